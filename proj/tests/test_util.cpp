#include <doctest.h>

#include <random>
#include <set>

#include "shopscope/error.hpp"
#include "shopscope/util.hpp"
#include "support.hpp"

using namespace shopscope;

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("utc timestamps round-trip") {
  const auto t = parse_utc("2020-06-02T09:05:00Z");
  REQUIRE(t);
  CHECK(format_utc(*t) == "2020-06-02T09:05:00Z");
  CHECK(t->time_since_epoch().count() == 1591088700);
  CHECK_FALSE(parse_utc("2020-06-02 09:05:00"));
  CHECK_FALSE(parse_utc("yesterday"));
}

TEST_CASE("atomic_write creates parents and replaces content") {
  testing::TempDir dir;
  const auto path = dir.path() / "a" / "b" / "out.txt";
  atomic_write(path, "first");
  atomic_write(path, "second");
  CHECK(read_file(path) == "second");
  CHECK_THROWS_AS(read_file(dir.path() / "missing"), DataError);
}

TEST_CASE("string helpers") {
  CHECK(trim("  a b \t\n") == "a b");
  CHECK(trim("   ") == "");
  CHECK(ascii_lower("NordVPN-X") == "nordvpn-x");
}

TEST_CASE("mix_seed is deterministic and spreads streams") {
  CHECK(mix_seed(7, 5) == mix_seed(7, 5));
  std::set<std::uint64_t> seeds;
  for (std::uint64_t k = 0; k < 1000; ++k) seeds.insert(mix_seed(42, k));
  CHECK(seeds.size() == 1000);
  CHECK(mix_seed(1, 5) != mix_seed(2, 5));
}

TEST_CASE("uniform helpers stay in range and are roughly uniform") {
  std::mt19937_64 eng(3);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = uniform_below(eng, 7);
    REQUIRE(v < 7);
    ++hist[v];
    const double u = uniform01(eng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  for (int h : hist) CHECK(h == doctest::Approx(10000).epsilon(0.05));
}
