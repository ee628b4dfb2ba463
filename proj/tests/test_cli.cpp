#include <doctest.h>

#include <json.hpp>

#include "commands.hpp"
#include "shopscope/config.hpp"
#include "shopscope/error.hpp"
#include "shopscope/util.hpp"
#include "support.hpp"

using namespace shopscope;
using namespace shopscope::cli;
using nlohmann::json;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "shopscope");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

PipelineConfig fixture_config(const std::filesystem::path& out) {
  auto config = load_config(testing::kSourceDir / "fixtures" / "config.json");
  config.harvest.fixture_dir = (testing::kSourceDir / "fixtures" / "forum").string();
  config.output.directory = out.string();
  config.lda.iterations = 30;
  config.lda.k = 3;
  config.lda.k_values = {3, 4};
  return config;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults round trip") {
    const PipelineConfig defaults;
    CHECK(defaults.lda.alpha_numerator == 5.0);
    CHECK(defaults.lda.beta == 0.01);
    CHECK(defaults.lda.iterations == 1000);
    CHECK(defaults.coherence.window_width == 110);
    CHECK(defaults.coherence.top_n == 20);
    CHECK(defaults.termrank.lambda == 0.6);
    const auto back = parse_config(serialize_config(defaults));
    CHECK(serialize_config(back) == serialize_config(defaults));
    CHECK(config_hash(back) == config_hash(defaults));
    CHECK(parse_config("{}").lda.k == defaults.lda.k);
  }

  TEST_CASE("bundled config loads") {
    const auto config = load_config(testing::kSourceDir / "fixtures" / "config.json");
    CHECK(config.harvest.forums.size() == 2);
    CHECK(config.lda.master_seed == 2020);
  }

  TEST_CASE("unknown and malformed keys are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"lda": {"kk": 3}})"), DataError);
    CHECK_THROWS_AS(parse_config(R"({"nope": 1})"), DataError);
    CHECK_THROWS_AS(parse_config(R"({"lda": {"k": "many"}})"), DataError);
    CHECK_THROWS_AS(parse_config("not json"), DataError);
    CHECK_NOTHROW(parse_config(R"({"termrank": {"augmentations": {"vpn": ["proxy"]}}})"));
  }

  TEST_CASE("overrides") {
    PipelineConfig config;
    apply_override(config, "lda.iterations", "200");
    apply_override(config, "output.directory", "elsewhere");
    apply_override(config, "lda.k_values", "[3,4]");
    CHECK(config.lda.iterations == 200);
    CHECK(config.output.directory == "elsewhere");
    CHECK(config.lda.k_values == std::vector<int>{3, 4});
    const auto before = config_hash(config);
    apply_override(config, "termrank.lambda", "0.5");
    CHECK(config_hash(config) != before);
    CHECK_THROWS_AS(apply_override(config, "lda.nope", "1"), ConfigError);
    CHECK_THROWS_AS(apply_override(config, "lda.k", "\"x\""), ConfigError);
  }
}

TEST_SUITE("tables") {
  TEST_CASE("tsv round trip") {
    Table t{"demo/v1", {"a", "b"}, {}};
    t.add({"1", "x\ty"});
    t.add({"22", "z"});
    CHECK_THROWS(t.add({"only one"}));
    const auto tsv = t.to_tsv();
    CHECK(tsv == "#schema=demo/v1\na\tb\n1\tx y\n22\tz\n");
    const auto back = parse_tsv(tsv, "demo/v1", {"a", "b"}, "demo.tsv");
    CHECK(back.rows == std::vector<std::vector<std::string>>{{"1", "x y"}, {"22", "z"}});
    CHECK_THROWS_AS(parse_tsv(tsv, "other/v1", {"a", "b"}, "demo.tsv"), DataError);
    CHECK_THROWS_AS(parse_tsv(tsv, "demo/v1", {"a", "c"}, "demo.tsv"), DataError);
    CHECK_THROWS_AS(parse_tsv("#schema=demo/v1\na\tb\n1\n", "demo/v1", {"a", "b"}, "demo.tsv"), DataError);
  }

  TEST_CASE("aligned text") {
    Table t{"demo/v1", {"name", "n"}, {}};
    t.add({"alpha", "1"});
    const auto text = t.to_text();
    CHECK(text.find("name   n") != std::string::npos);
    CHECK(text.find("alpha  1") != std::string::npos);
  }

  TEST_CASE("number formatting") {
    CHECK(fixed(0.5, 3) == "0.500");
    CHECK(exact(0.1) == "0.1");
    CHECK(std::stod(exact(1.0 / 3)) == 1.0 / 3);
    CHECK(join({"a", "b", "c"}, ", ") == "a, b, c");
  }
}

TEST_SUITE("commands") {
  TEST_CASE("pipeline writes schema tables and manifests") {
    testing::TempDir dir;
    const auto config = fixture_config(dir.path());
    const auto harvested = cmd_harvest(config);
    CHECK(harvested.outputs.contains("dataset.jsonl"));
    CHECK(harvested.outputs.contains("harvest_summary.tsv"));

    const auto swept = cmd_sweep(config);
    CHECK(swept.outputs.contains("coherence.tsv"));
    CHECK(swept.outputs.contains("model.json"));
    const auto reported = cmd_report(config);
    for (const auto* name : {"topics.tsv", "samples.tsv", "price_bins.tsv", "false_products.tsv", "lognormal_fit.tsv"})
      CHECK(reported.outputs.contains(name));
    const auto queried = cmd_query(config, 1, 3);
    CHECK(queried.outputs.contains("query_topic1.tsv"));
    CHECK_THROWS_AS(cmd_query(config, 0, 3), ConfigError);
    CHECK_THROWS_AS(cmd_query(config, 99, 3), ConfigError);

    const auto manifest = json::parse(read_file(dir.path() / "manifest_report.json"));
    CHECK(manifest["command"] == "report");
    CHECK(manifest["config_hash"] == config_hash(config));
    CHECK(manifest["seeds"]["master_seed"] == 2020);
    CHECK(manifest["inputs"].size() == 2);
    for (const auto& [name, sha] : reported.outputs) CHECK(manifest["outputs"][name] == sha);
    CHECK(parse_utc(manifest["created_at"].get<std::string>()).has_value());

    // The model must match the corpus it is reported against.
    auto other = config;
    other.corpus.min_df = 1;
    CHECK_THROWS_AS(cmd_report(other), DataError);
  }

  TEST_CASE("train writes a model and distributions") {
    testing::TempDir dir;
    const auto config = fixture_config(dir.path());
    cmd_harvest(config);
    const auto trained = cmd_train(config);
    for (const auto* name : {"vocab.tsv", "docs.txt", "model.json", "phi.tsv", "theta.tsv"})
      CHECK(trained.outputs.contains(name));
    const auto again = cmd_train(config);
    CHECK(again.outputs == trained.outputs);
  }

  TEST_CASE("exit codes") {
    testing::TempDir dir;
    CHECK(run({"--bogus"}) == kUsage);
    CHECK(run({}) == kUsage);
    CHECK(run({"query"}) == kUsage);
    CHECK(run({"--config", "/nonexistent.json", "report"}) == kUsage);
    CHECK(run({"--out", dir.path().string(), "--set", "lda.nope=1", "report"}) == kUsage);
    CHECK(run({"--out", dir.path().string(), "--set", "lda.k", "report"}) == kUsage);

    // Missing and empty datasets are data errors.
    CHECK(run({"--out", dir.path().string(), "report"}) == kData);
    atomic_write(dir.path() / "dataset.jsonl", "");
    CHECK(run({"--out", dir.path().string(), "report"}) == kData);
    CHECK(run({"--out", dir.path().string(), "--set", "harvest.fixture_dir=" + (dir.path() / "none").string(),
               "harvest"}) == kData);

    const auto cfg = (testing::kSourceDir / "fixtures" / "config.json").string();
    const auto fixtures = (testing::kSourceDir / "fixtures" / "forum").string();
    CHECK(run({"-q", "--config", cfg, "--out", dir.path().string(), "harvest", "--fixtures", fixtures}) == kOk);
    CHECK(run({"-q", "--config", cfg, "--out", dir.path().string(), "train", "--k", "3", "--iterations", "10"}) ==
          kOk);
    CHECK(run({"-q", "--config", cfg, "--out", dir.path().string(), "train", "--k", "1"}) == kUsage);
    CHECK(run({"-q", "--config", cfg, "--out", dir.path().string(), "--set", "lda.iterations=10", "sweep",
               "--k-values", "3,4"}) == kOk);
    CHECK(run({"-q", "--config", cfg, "--out", dir.path().string(), "report"}) == kOk);
    CHECK(run({"-q", "--config", cfg, "--out", dir.path().string(), "query", "--topic", "2"}) == kOk);
    CHECK(std::filesystem::exists(dir.path() / "query_topic2.tsv"));
  }
}
