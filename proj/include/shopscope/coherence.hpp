#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "shopscope/corpus.hpp"
#include "shopscope/lda.hpp"

namespace shopscope::coherence {

inline constexpr int kDefaultWindowWidth = 110;
inline constexpr double kDefaultEpsilon = 1e-12;

/// Boolean sliding-window statistics. Each word keeps the sorted, merged runs of
/// global window ids it occurs in, so occurrence and pairwise co-occurrence counts
/// are exact interval arithmetic.
class WindowStats {
 public:
  struct Run {
    std::int64_t begin;  ///< first window id
    std::int64_t end;    ///< one past the last
  };

  WindowStats() = default;
  WindowStats(int width, std::int64_t total_windows, std::vector<std::vector<Run>> runs);

  int width() const noexcept { return width_; }
  std::int64_t total_windows() const noexcept { return total_windows_; }
  std::size_t vocabulary_size() const noexcept { return runs_.size(); }
  std::int64_t occurrence(WordId w) const;
  std::int64_t co_occurrence(WordId a, WordId b) const;

 private:
  int width_ = kDefaultWindowWidth;
  std::int64_t total_windows_ = 0;
  std::vector<std::vector<Run>> runs_;
  std::vector<std::int64_t> occurrence_;
};

/// Windows of `width` tokens slide with step 1; a document no longer than the width is a
/// single window. Empty documents contribute nothing. Throws ConfigError for width < 1.
WindowStats build_window_stats(const std::vector<std::vector<WordId>>& docs, int width, std::size_t vocabulary_size);
WindowStats build_window_stats(const EncodedCorpus& corpus, int width = kDefaultWindowWidth);

/// NPMI from window counts: log((p12 + eps) / (p1 p2)) / -log(p12 + eps), clamped to
/// [-1, 1]. No evidence (p1 p2 = 0 or no windows) gives 0; p12 = 1 gives 1.
double npmi_from_counts(std::int64_t co, std::int64_t occ_a, std::int64_t occ_b, std::int64_t total,
                        double epsilon = kDefaultEpsilon);
double npmi(WordId a, WordId b, const WindowStats& stats, double epsilon = kDefaultEpsilon);

/// The n highest-probability word ids of a topic row, ties to the lower id.
std::vector<WordId> top_words(const Eigen::Ref<const Eigen::RowVectorXd>& row, int n);

struct CvScore {
  double overall = 0.0;
  std::vector<double> per_topic;
};

/// C_v with one-set segmentation: each top word's NPMI context vector is compared by
/// cosine against the sum of all context vectors of the topic.
CvScore cv_score(const Eigen::Ref<const Eigen::MatrixXd>& phi, const WindowStats& stats, int top_n,
                 double epsilon = kDefaultEpsilon);
CvScore cv_score(const lda::LdaModel& model, const WindowStats& stats, int top_n, double epsilon = kDefaultEpsilon);

/// 5, 10, ..., 50.
std::vector<int> default_k_values();

/// Per-k training seed derived from the master seed.
std::uint64_t seed_for_k(std::uint64_t master_seed, int k);

struct SweepOptions {
  std::vector<int> k_values = default_k_values();
  double alpha_numerator = 5.0;
  double beta = 0.01;
  int iterations = 1000;
  int averaging_sweeps = 0;
  std::uint64_t master_seed = 0;
  int top_n = 20;
  double epsilon = kDefaultEpsilon;
  std::size_t workers = 0;  ///< 0 = hardware concurrency
};

struct SweepEntry {
  int k = 0;
  double cv = 0.0;
  std::vector<double> per_topic;
  std::uint64_t seed = 0;
};

struct CoherenceReport {
  std::vector<SweepEntry> entries;  ///< in k_values order
  int best_k = 0;

  /// "k<TAB>cv" per row.
  std::string to_tsv() const;
  nlohmann::json to_json() const;
};

struct SweepResult {
  CoherenceReport report;
  lda::LdaModel best_model;
};

/// Trains one model per k and keeps the highest C_v (ties to the smaller k). Training
/// errors are rethrown as ConfigError tagged with their k.
SweepResult select_k(const EncodedCorpus& corpus, const SweepOptions& options, const WindowStats& stats);

}  // namespace shopscope::coherence
