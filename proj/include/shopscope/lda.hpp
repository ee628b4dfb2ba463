#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shopscope/corpus.hpp"

namespace shopscope::lda {

/// Topic x word counts, column-major so a word's topic counts are contiguous.
using TopicWordCounts = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;
/// Document x topic counts, row-major so a document's topic counts are contiguous.
using DocTopicCounts = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using TopicTotals = Eigen::Matrix<std::int32_t, Eigen::Dynamic, 1>;

struct LdaHyperparams {
  int k = 20;
  double alpha = 0.25;
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t seed = 0;
  /// Average phi/theta over this many final sweeps; 0 keeps the final sample only.
  int averaging_sweeps = 0;

  /// Symmetric alpha = numerator / k (5/k by default).
  static LdaHyperparams with_alpha_rule(int k, double numerator = 5.0);
  /// Throws ConfigError when k < 2, alpha/beta <= 0 or iterations < 1.
  void validate() const;
};

struct TopicDistributions {
  Eigen::MatrixXd phi;    ///< k x V, rows sum to 1
  Eigen::MatrixXd theta;  ///< D x k, rows sum to 1
};

/// Collapsed Gibbs state: topic assignments and the counts that tally them.
struct LdaModel {
  LdaHyperparams hyperparams;
  std::string vocabulary_hash;
  std::vector<std::vector<std::int32_t>> assignments;
  DocTopicCounts doc_topic;
  TopicWordCounts topic_word;
  TopicTotals topic_totals;
  std::optional<TopicDistributions> averaged;

  int topics() const { return static_cast<int>(topic_word.rows()); }
  Eigen::Index vocabulary_size() const { return topic_word.cols(); }
  Eigen::Index documents() const { return doc_topic.rows(); }
};

/// Row-normalized (counts + prior): the smoothed Dirichlet-multinomial estimate.
template <typename Scalar = double, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> smoothed_rows(const Eigen::MatrixBase<Derived>& counts,
                                                                      Scalar prior) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = counts.template cast<Scalar>().array() + prior;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> totals =
      counts.template cast<Scalar>().rowwise().sum().array() + prior * static_cast<Scalar>(counts.cols());
  out.array().colwise() /= totals.array();
  return out;
}

/// phi[k][w] = (n_kw + beta) / (n_k + V beta)
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> estimate_phi(const LdaModel& model) {
  return smoothed_rows<Scalar>(model.topic_word, static_cast<Scalar>(model.hyperparams.beta));
}

/// theta[d][k] = (n_dk + alpha) / (N_d + k alpha)
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> estimate_theta(const LdaModel& model) {
  return smoothed_rows<Scalar>(model.doc_topic, static_cast<Scalar>(model.hyperparams.alpha));
}

/// The averaged estimates when the model carries them, else the final-sample ones.
TopicDistributions distributions(const LdaModel& model);

/// Argmax with ties going to the lowest index.
template <typename Derived>
Eigen::Index dominant_topic(const Eigen::DenseBase<Derived>& row) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < row.size(); ++i) {
    if (row(i) > row(best)) best = i;
  }
  return best;
}

/// Number of documents whose dominant topic is k, for each k.
std::vector<std::int64_t> dominant_topic_counts(const Eigen::MatrixXd& theta);

/// Unnormalized p(z_i = k | z_-i, w) = (n_dk + alpha)(n_kw + beta)/(n_k + V beta) from
/// counts that already exclude token i.
template <typename Scalar = double>
Scalar collapsed_weight(Scalar n_dk, Scalar n_kw, Scalar n_k, Scalar alpha, Scalar beta, Scalar vocab_size) {
  return (n_dk + alpha) * (n_kw + beta) / (n_k + vocab_size * beta);
}

class GibbsSampler {
 public:
  /// Validates the corpus and hyperparameters and draws a uniform random initial state.
  GibbsSampler(const EncodedCorpus& corpus, const LdaHyperparams& hp);

  /// One full pass resampling every token in document order.
  void sweep();
  int sweeps_done() const noexcept { return sweeps_; }

  /// Conditional weights for token (doc, pos) with that token excluded from the counts.
  Eigen::VectorXd conditional_weights(std::size_t doc, std::size_t pos) const;

  const LdaModel& model() const noexcept { return model_; }
  LdaModel release() && { return std::move(model_); }

 private:
  const EncodedCorpus& corpus_;
  LdaModel model_;
  std::mt19937_64 rng_;
  std::vector<double> cumulative_;
  int sweeps_ = 0;
};

using SweepObserver = std::function<void(const GibbsSampler&)>;

/// Random init plus `iterations` sweeps. Throws ConfigError for invalid hyperparameters,
/// an empty corpus, V < 2, or k >= total token count.
LdaModel train(const EncodedCorpus& corpus, const LdaHyperparams& hp, const SweepObserver& after_sweep = {});

struct Counts {
  DocTopicCounts doc_topic;
  TopicWordCounts topic_word;
  TopicTotals topic_totals;
};

/// Counts tallied from scratch out of the assignments.
Counts recount(const LdaModel& model, const EncodedCorpus& corpus);

/// Structured-text dump; floating-point values are stored as hex floats so a reload
/// reproduces phi and theta bit for bit.
std::string serialize_model(const LdaModel& model);
LdaModel deserialize_model(const std::string& text, const std::string& source_name = "<model>");
void save_model(const LdaModel& model, const std::filesystem::path& path);
LdaModel load_model(const std::filesystem::path& path);

}  // namespace shopscope::lda
