#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "shopscope/error.hpp"
#include "shopscope/lda.hpp"
#include "shopscope/util.hpp"
#include "support.hpp"

using namespace shopscope;
using namespace shopscope::lda;

namespace {

LdaHyperparams hyper(int k, double alpha, double beta, int iterations, std::uint64_t seed) {
  LdaHyperparams hp;
  hp.k = k;
  hp.alpha = alpha;
  hp.beta = beta;
  hp.iterations = iterations;
  hp.seed = seed;
  return hp;
}

EncodedCorpus random_corpus(std::mt19937_64& rng, int docs, int vocab, int max_len) {
  std::vector<std::vector<WordId>> words(static_cast<std::size_t>(docs));
  for (auto& d : words) {
    const int len = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_len)));
    for (int i = 0; i < len; ++i) d.push_back(static_cast<WordId>(uniform_below(rng, static_cast<std::uint64_t>(vocab))));
  }
  return testing::make_corpus(words, vocab);
}

// Best mean diagonal over all k! topic relabelings of a k x k score matrix.
double best_matching(const Eigen::MatrixXd& score) {
  std::vector<int> perm(static_cast<std::size_t>(score.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1e300;
  do {
    double s = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += score(static_cast<Eigen::Index>(i), perm[i]);
    best = std::max(best, s / static_cast<double>(perm.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_SUITE("lda") {
  TEST_CASE("collapsed weight matches hand values") {
    // n_dk = [1,0], n_kw = [2,0], n_k = [4,1], V = 3, alpha = 0.5, beta = 0.01
    CHECK(collapsed_weight(1.0, 2.0, 4.0, 0.5, 0.01, 3.0) == doctest::Approx(0.7481389578163771712).epsilon(1e-12));
    CHECK(collapsed_weight(0.0, 0.0, 1.0, 0.5, 0.01, 3.0) == doctest::Approx(0.00485436893203883495).epsilon(1e-12));
  }

  TEST_CASE("conditional weights exclude the token itself") {
    std::mt19937_64 rng(11);
    const auto corpus = random_corpus(rng, 6, 5, 7);
    GibbsSampler sampler(corpus, hyper(3, 0.4, 0.05, 5, 3));
    for (int s = 0; s < 3; ++s) sampler.sweep();
    const auto& m = sampler.model();
    for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
      for (std::size_t i = 0; i < corpus.documents[d].words.size(); ++i) {
        // Tally the other tokens directly.
        std::vector<double> ndk(3, 0), nkw(3, 0), nk(3, 0);
        for (std::size_t d2 = 0; d2 < corpus.documents.size(); ++d2) {
          for (std::size_t j = 0; j < corpus.documents[d2].words.size(); ++j) {
            if (d2 == d && j == i) continue;
            const auto t = static_cast<std::size_t>(m.assignments[d2][j]);
            nk[t] += 1;
            if (d2 == d) ndk[t] += 1;
            if (corpus.documents[d2].words[j] == corpus.documents[d].words[i]) nkw[t] += 1;
          }
        }
        const auto w = sampler.conditional_weights(d, i);
        for (int t = 0; t < 3; ++t) {
          const double expect = (ndk[t] + 0.4) * (nkw[t] + 0.05) / (nk[t] + 5 * 0.05);
          CHECK(w(t) == doctest::Approx(expect).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("validation") {
    const auto corpus = testing::make_corpus({{0, 1}, {1, 0}}, 2);
    CHECK_THROWS_AS(train(corpus, hyper(4, 0.5, 0.01, 1, 0)), ConfigError);
    CHECK_THROWS_AS(train(corpus, hyper(5, 0.5, 0.01, 1, 0)), ConfigError);
    CHECK_NOTHROW(train(corpus, hyper(3, 0.5, 0.01, 1, 0)));
    CHECK_THROWS_AS(train(corpus, hyper(1, 0.5, 0.01, 1, 0)), ConfigError);
    CHECK_THROWS_AS(train(corpus, hyper(2, 0.0, 0.01, 1, 0)), ConfigError);
    CHECK_THROWS_AS(train(corpus, hyper(2, 0.5, -1.0, 1, 0)), ConfigError);
    CHECK_THROWS_AS(train(corpus, hyper(2, 0.5, 0.01, 0, 0)), ConfigError);
    CHECK_THROWS_AS(train(testing::make_corpus({}, 2), hyper(2, 0.5, 0.01, 1, 0)), ConfigError);
    CHECK_THROWS_AS(train(testing::make_corpus({{0, 0, 0}}, 1), hyper(2, 0.5, 0.01, 1, 0)), ConfigError);
    auto averaged = hyper(2, 0.5, 0.01, 3, 0);
    averaged.averaging_sweeps = 4;
    CHECK_THROWS_AS(averaged.validate(), ConfigError);
  }

  TEST_CASE("alpha rule") {
    const auto hp = LdaHyperparams::with_alpha_rule(20);
    CHECK(hp.alpha == doctest::Approx(0.25));
    CHECK(hp.beta == doctest::Approx(0.01));
    CHECK(LdaHyperparams::with_alpha_rule(5).alpha == doctest::Approx(1.0));
  }

  TEST_CASE("same seed gives the same model, different seeds differ") {
    std::mt19937_64 rng(5);
    const auto corpus = random_corpus(rng, 20, 12, 15);
    const auto a = train(corpus, hyper(4, 0.5, 0.01, 30, 99));
    const auto b = train(corpus, hyper(4, 0.5, 0.01, 30, 99));
    const auto c = train(corpus, hyper(4, 0.5, 0.01, 30, 100));
    CHECK(a.assignments == b.assignments);
    CHECK(serialize_model(a) == serialize_model(b));
    CHECK(a.assignments != c.assignments);
  }

  TEST_CASE("counts stay consistent with the assignments") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const auto corpus = random_corpus(rng, 8, 6, 10);
      int sweeps = 0;
      train(corpus, hyper(3, 0.3, 0.02, 10, static_cast<std::uint64_t>(trial)), [&](const GibbsSampler& s) {
        const auto c = recount(s.model(), corpus);
        CHECK(c.doc_topic == s.model().doc_topic);
        CHECK(c.topic_word == s.model().topic_word);
        CHECK(c.topic_totals == s.model().topic_totals);
        CHECK(s.model().topic_totals.sum() == static_cast<int>(corpus.token_count()));
        CHECK(s.sweeps_done() == ++sweeps);
      });
      CHECK(sweeps == 10);
    }
  }

  TEST_CASE("phi and theta estimates") {
    LdaModel m;
    m.hyperparams = hyper(2, 0.5, 0.1, 1, 0);
    m.topic_word = TopicWordCounts::Zero(2, 4);
    m.topic_word(1, 2) = 6;
    m.topic_totals = TopicTotals::Zero(2);
    m.topic_totals(1) = 6;
    m.doc_topic = DocTopicCounts::Zero(2, 2);
    m.doc_topic(1, 1) = 6;
    const auto phi = estimate_phi(m);
    for (int w = 0; w < 4; ++w) CHECK(phi(0, w) == doctest::Approx(0.25));
    CHECK(phi(1, 2) == doctest::Approx(6.1 / 6.4));
    CHECK(phi(1, 0) == doctest::Approx(0.1 / 6.4));
    const auto theta = estimate_theta(m);
    CHECK(theta(0, 0) == doctest::Approx(0.5));
    CHECK(theta(1, 1) == doctest::Approx(6.5 / 7.0));

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
      const auto corpus = random_corpus(rng, 10, 8, 12);
      const auto model = train(corpus, hyper(3, 0.2, 0.01, 5, static_cast<std::uint64_t>(trial)));
      const auto d = distributions(model);
      CHECK((d.phi.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
      CHECK((d.theta.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
      CHECK(d.phi.minCoeff() > 0.0);
      CHECK(d.theta.minCoeff() > 0.0);
    }
  }

  TEST_CASE("dominant topic ties go to the lowest index") {
    Eigen::MatrixXd theta(3, 3);
    theta << 0.2, 0.5, 0.3,  //
        0.4, 0.2, 0.4,       //
        1.0 / 3, 1.0 / 3, 1.0 / 3;
    CHECK(dominant_topic(theta.row(0)) == 1);
    CHECK(dominant_topic(theta.row(1)) == 0);
    CHECK(dominant_topic(theta.row(2)) == 0);
    CHECK(dominant_topic_counts(theta) == std::vector<std::int64_t>{2, 1, 0});
  }

  TEST_CASE("single-word documents concentrate each topic on one word") {
    // Three words, each document repeats one of them.
    std::vector<std::vector<WordId>> docs;
    for (int d = 0; d < 30; ++d) docs.push_back(std::vector<WordId>(20, static_cast<WordId>(d % 3)));
    const auto corpus = testing::make_corpus(docs, 3);
    const auto model = train(corpus, hyper(3, 0.1, 0.01, 200, 17));
    const auto phi = estimate_phi(model);
    Eigen::MatrixXd score(3, 3);
    for (int t = 0; t < 3; ++t)
      for (int w = 0; w < 3; ++w) score(t, w) = phi(t, w);
    CHECK(best_matching(score) >= 0.9);
  }

  TEST_CASE("topic mass is invariant to token order") {
    // Averaged over seeds, the sorted topic-size profile must not depend on token order.
    std::mt19937_64 rng(21);
    const auto corpus = random_corpus(rng, 12, 10, 14);
    auto shuffled = corpus;
    for (auto& d : shuffled.documents) std::shuffle(d.words.begin(), d.words.end(), rng);

    const auto profile = [](const EncodedCorpus& c, std::uint64_t base) {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
      const int runs = 60;
      for (int r = 0; r < runs; ++r) {
        const auto m = train(c, hyper(3, 0.3, 0.05, 40, base + static_cast<std::uint64_t>(r)));
        std::vector<double> sizes(m.topic_totals.data(), m.topic_totals.data() + 3);
        std::sort(sizes.rbegin(), sizes.rend());
        for (int t = 0; t < 3; ++t) mean(t) += sizes[static_cast<std::size_t>(t)] / static_cast<double>(c.token_count());
      }
      return Eigen::VectorXd(mean / runs);
    };
    const Eigen::VectorXd a = profile(corpus, 1000);
    const Eigen::VectorXd b = profile(shuffled, 5000);
    CHECK(0.5 * (a - b).cwiseAbs().sum() <= 0.05);
  }

  TEST_CASE("averaging over final sweeps") {
    std::mt19937_64 rng(6);
    const auto corpus = random_corpus(rng, 10, 8, 12);
    auto hp = hyper(3, 0.3, 0.02, 20, 4);
    hp.averaging_sweeps = 5;
    const auto model = train(corpus, hp);
    REQUIRE(model.averaged.has_value());
    CHECK((model.averaged->phi.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK((model.averaged->theta.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    const auto d = distributions(model);
    CHECK(d.phi == model.averaged->phi);
    hp.averaging_sweeps = 0;
    CHECK_FALSE(train(corpus, hp).averaged.has_value());
  }

  TEST_CASE("serialization round trip is bit exact") {
    std::mt19937_64 rng(9);
    const auto corpus = random_corpus(rng, 10, 8, 12);
    auto hp = hyper(3, 5.0 / 3.0, 0.01, 15, 12345678901234ULL);
    hp.averaging_sweeps = 3;
    const auto model = train(corpus, hp);
    const auto back = deserialize_model(serialize_model(model));
    CHECK(back.assignments == model.assignments);
    CHECK(back.hyperparams.alpha == model.hyperparams.alpha);
    CHECK(back.hyperparams.seed == model.hyperparams.seed);
    CHECK(back.vocabulary_hash == corpus.vocabulary.hash());
    CHECK(estimate_phi(back) == estimate_phi(model));
    CHECK(estimate_theta(back) == estimate_theta(model));
    CHECK(back.averaged->phi == model.averaged->phi);
    CHECK(back.averaged->theta == model.averaged->theta);

    testing::TempDir dir;
    save_model(model, dir.path() / "model.json");
    CHECK(serialize_model(load_model(dir.path() / "model.json")) == serialize_model(model));
  }

  TEST_CASE("corrupt models are rejected") {
    const auto corpus = testing::make_corpus({{0, 1, 1}, {1, 0, 0}}, 2);
    const auto model = train(corpus, hyper(2, 0.5, 0.01, 3, 1));
    auto tampered = model;
    tampered.assignments[0][0] = 1 - tampered.assignments[0][0];
    CHECK_THROWS_AS(deserialize_model(serialize_model(tampered)), DataError);
    CHECK_THROWS_AS(deserialize_model("{}"), DataError);
    CHECK_THROWS_AS(deserialize_model("not json"), DataError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), Error);
  }
}
