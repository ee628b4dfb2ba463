#include <doctest.h>

#include <algorithm>
#include <random>

#include "shopscope/error.hpp"
#include "shopscope/termrank.hpp"
#include "shopscope/util.hpp"
#include "support.hpp"

using namespace shopscope;
using namespace shopscope::termrank;

namespace {

std::vector<WordId> order(const std::vector<TermScore>& ranked) {
  std::vector<WordId> out;
  for (const auto& t : ranked) out.push_back(t.word);
  return out;
}

ShopDataset dataset(std::vector<std::pair<std::string, std::vector<Product>>> shops) {
  ShopDataset d;
  for (auto& [handle, products] : shops) d.shops.push_back(Shop{handle, std::move(products), {}});
  return d;
}

std::vector<std::string> titles(const std::vector<ProductMatch>& matches) {
  std::vector<std::string> out;
  for (const auto& m : matches) out.push_back(m.product.title);
  return out;
}

}  // namespace

TEST_SUITE("termrank") {
  TEST_CASE("relevance hand values") {
    Eigen::MatrixXd phi(1, 3);
    phi << 0.5, 0.3, 0.2;
    Eigen::VectorXd p(3);
    p << 0.25, 0.25, 0.5;
    const auto ranked = relevance(phi, p, 0, 0.6);
    REQUIRE(ranked.size() == 3);
    CHECK(order(ranked) == std::vector<WordId>{0, 1, 2});
    CHECK(ranked[0].score == doctest::Approx(-0.138629436111989061883).epsilon(1e-12));
    CHECK(ranked[1].score == doctest::Approx(-0.649455059877979745089).epsilon(1e-12));
    CHECK(ranked[2].score == doctest::Approx(-1.332179040210122250834).epsilon(1e-12));
    CHECK(ranked[2].rank == 3);
    CHECK(ranked[0].topic == 0);
  }

  TEST_CASE("lambda extremes") {
    Eigen::MatrixXd phi(2, 4);
    phi << 0.4, 0.3, 0.2, 0.1,  //
        0.1, 0.1, 0.1, 0.7;
    Eigen::VectorXd p(4);
    p << 0.6, 0.1, 0.1, 0.2;
    // lambda = 1 is plain phi order; lambda = 0 is lift phi/p order.
    CHECK(order(relevance(phi, p, 0, 1.0)) == std::vector<WordId>{0, 1, 2, 3});
    CHECK(order(relevance(phi, p, 0, 0.0)) == std::vector<WordId>{1, 2, 0, 3});
    CHECK(order(relevance(phi, p, 1, 1.0)) == std::vector<WordId>{3, 0, 1, 2});
    CHECK_THROWS_AS(relevance(phi, p, 2, 0.6), ConfigError);
    CHECK_THROWS_AS(relevance(phi, p, 0, 1.5), ConfigError);

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::MatrixXd f = (Eigen::MatrixXd::Random(3, 9).array() + 1.5).matrix();
      f.array().colwise() /= f.rowwise().sum().array();
      Eigen::VectorXd q = (Eigen::VectorXd::Random(9).array() + 1.5).matrix();
      q /= q.sum();
      const int topic = static_cast<int>(uniform_below(rng, 3));
      std::vector<WordId> expect(9);
      for (int i = 0; i < 9; ++i) expect[static_cast<std::size_t>(i)] = i;
      std::stable_sort(expect.begin(), expect.end(), [&](WordId a, WordId b) { return f(topic, a) > f(topic, b); });
      CHECK(order(relevance(f, q, topic, 1.0)) == expect);
    }
  }

  TEST_CASE("saliency hand values") {
    Eigen::MatrixXd phi(2, 4);
    phi << 0.5, 0.3, 0.15, 0.05,  //
        0.1, 0.2, 0.3, 0.4;
    Eigen::VectorXd pk(2);
    pk << 0.6, 0.4;
    Eigen::VectorXd pw(4);
    pw << 0.1, 0.2, 0.3, 0.4;
    const auto s = compute_saliency(phi, pk, pw);
    const double distinct[] = {0.1963168440550316837, 0.018342348838161212411, 0.059611866555898674877,
                               0.41610759994541648575};
    const double sal[] = {0.01963168440550316837, 0.0036684697676322424822, 0.017883559966769602463,
                          0.1664430399781665943};
    for (int w = 0; w < 4; ++w) {
      CHECK(s.distinctiveness(w) == doctest::Approx(distinct[w]).epsilon(1e-12));
      CHECK(s.saliency(w) == doctest::Approx(sal[w]).epsilon(1e-12));
      CHECK(s.topic_given_term.col(w).sum() == doctest::Approx(1.0));
    }
    const auto ranked = saliency(phi, pk, pw);
    CHECK(order(ranked) == std::vector<WordId>{3, 0, 2, 1});
    CHECK(ranked[0].topic == 1);
    CHECK(ranked[1].topic == 0);
  }

  TEST_CASE("uniform association has zero saliency") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      // Identical topic rows make p(k|w) = p(k) for every word.
      Eigen::RowVectorXd row = (Eigen::RowVectorXd::Random(6).array() + 1.5).matrix();
      row /= row.sum();
      const Eigen::MatrixXd phi = row.replicate(4, 1);
      Eigen::VectorXd pk = (Eigen::VectorXd::Random(4).array() + 1.5).matrix();
      pk /= pk.sum();
      Eigen::VectorXd pw = (Eigen::VectorXd::Random(6).array() + 1.5).matrix();
      pw /= pw.sum();
      const auto s = compute_saliency(phi, pk, pw);
      CHECK(s.saliency.cwiseAbs().maxCoeff() < 1e-12);
      CHECK(s.distinctiveness.minCoeff() >= 0.0);
    }
  }

  TEST_CASE("corpus-derived probabilities and salient terms") {
    const auto corpus = testing::make_corpus({{0, 0, 1}, {2, 3, 3, 3}, {0, 1}}, 4);
    const auto pw = term_probabilities(corpus);
    CHECK(pw(0) == doctest::Approx(3.0 / 9));
    CHECK(pw(3) == doctest::Approx(3.0 / 9));
    CHECK(pw.sum() == doctest::Approx(1.0));

    lda::LdaHyperparams hp;
    hp.k = 2;
    hp.alpha = 0.5;
    hp.iterations = 50;
    hp.seed = 3;
    const auto model = lda::train(corpus, hp);
    CHECK(topic_probabilities(model).sum() == doctest::Approx(1.0));
    CHECK(top_salient_terms(model, corpus, 0, 0).empty());
    const auto a = top_salient_terms(model, corpus, 0, 10);
    const auto b = top_salient_terms(model, corpus, 1, 10);
    CHECK(a.size() + b.size() == 4);
    CHECK(top_salient_terms(model, corpus, 1, 1).size() <= 1);
    CHECK_THROWS_AS(top_salient_terms(model, corpus, 2, 3), ConfigError);
  }

  TEST_CASE("query products") {
    const Tokenizer tok;
    const auto data = dataset({{"alpha",
                                {testing::product("Combo List | 528M Yahoo.com", 4.0),
                                 testing::product("Fresh DB dump", 12.0, Category::file),
                                 testing::product("Dbrand skins", 2.0), testing::product("Netflix premium", 1.0)}},
                               {"beta", {testing::product("Database of gamers", 12.0, Category::file)}}});

    const auto combo = query_products(data, {"combo", "list"}, {}, tok);
    REQUIRE(combo.size() == 1);
    CHECK(combo[0].shop_handle == "alpha");
    CHECK(combo[0].matched_terms == std::vector<std::string>{"combo", "list"});
    CHECK(combo[0].record_count == 528000000ULL);

    // "db" is an augmentation for "database" and must match whole tokens only.
    const auto db = query_products(data, {"database"}, {"db"}, tok);
    CHECK(titles(db) == std::vector<std::string>{"Database of gamers", "Fresh DB dump"});
    CHECK(db[1].matched_terms == std::vector<std::string>{"db"});

    CHECK(query_products(data, {"combo list"}, {}, tok).size() == 1);
    CHECK(query_products(data, {"list combo"}, {}, tok).empty());
    CHECK(query_products(data, {"zzz"}, {}, tok).empty());
    CHECK(query_products(data, {}, {}, tok).empty());

    // Shop order does not change the result.
    auto reversed = data;
    std::reverse(reversed.shops.begin(), reversed.shops.end());
    for (auto& s : reversed.shops) std::reverse(s.products.begin(), s.products.end());
    CHECK(titles(query_products(reversed, {"database", "netflix"}, {"db"}, tok)) ==
          titles(query_products(data, {"database", "netflix"}, {"db"}, tok)));
  }

  TEST_CASE("record counts") {
    CHECK(parse_record_count("Combo List | 528M Yahoo.com") == 528000000ULL);
    CHECK(parse_record_count("92.2 Million gamer records") == 92200000ULL);
    CHECK(parse_record_count("4,6M mixed") == 4600000ULL);
    CHECK(parse_record_count("1,500k lines") == 1500000ULL);
    CHECK(parse_record_count("12k and 3M") == 3000000ULL);
    CHECK(parse_record_count("2B leak") == 2000000000ULL);
    CHECK_FALSE(parse_record_count("Netflix premium").has_value());
    CHECK_FALSE(parse_record_count("mp4 videos").has_value());
    CHECK_FALSE(parse_record_count("10 mbps vpn").has_value());
  }

  TEST_CASE("sample products") {
    const Tokenizer tok;
    const auto data = dataset({{"s0",
                                {testing::product("netflix premium account", 1.0),
                                 testing::product("netflix account", 2.0), testing::product("netflix account", 3.0),
                                 testing::product("spotify family", 1.0)}},
                               {"s1", {testing::product("combo list fresh", 5.0)}}});
    const auto corpus = testing::make_corpus({{0, 1}, {1, 0}}, 2);  // handles doc0, doc1
    auto named = corpus;
    named.documents[0].shop_handle = "s0";
    named.documents[1].shop_handle = "s1";
    Eigen::MatrixXd theta(2, 2);
    theta << 0.9, 0.1,  //
        0.2, 0.8;
    const std::vector<std::vector<std::string>> key{{"netflix", "account", "premium"}, {"combo", "fresh"}};
    const auto samples = sample_products(data, named, theta, key, tok, 2);
    REQUIRE(samples.size() == 3);
    CHECK(samples[0].title == "netflix premium account");
    CHECK(samples[0].topic_terms == 3);
    CHECK(samples[1].title == "netflix account");
    CHECK(samples[2].topic == 1);
    CHECK(samples[2].shop_handle == "s1");
    CHECK(samples[2].topic_terms == 2);
    CHECK_THROWS_AS(sample_products(data, named, theta.topRows(1), key, tok, 2), ConfigError);
  }
}
