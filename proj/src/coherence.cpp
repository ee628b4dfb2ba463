#include "shopscope/coherence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <numeric>
#include <thread>

#include "shopscope/error.hpp"
#include "shopscope/util.hpp"

namespace shopscope::coherence {

WindowStats::WindowStats(int width, std::int64_t total_windows, std::vector<std::vector<Run>> runs)
    : width_(width), total_windows_(total_windows), runs_(std::move(runs)) {
  occurrence_.reserve(runs_.size());
  for (const auto& list : runs_) {
    occurrence_.push_back(std::accumulate(list.begin(), list.end(), std::int64_t{0},
                                          [](std::int64_t acc, const Run& r) { return acc + (r.end - r.begin); }));
  }
}

std::int64_t WindowStats::occurrence(WordId w) const {
  if (w < 0 || static_cast<std::size_t>(w) >= occurrence_.size()) return 0;
  return occurrence_[static_cast<std::size_t>(w)];
}

std::int64_t WindowStats::co_occurrence(WordId a, WordId b) const {
  if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= runs_.size() || static_cast<std::size_t>(b) >= runs_.size())
    return 0;
  if (a == b) return occurrence(a);
  const auto& x = runs_[static_cast<std::size_t>(a)];
  const auto& y = runs_[static_cast<std::size_t>(b)];
  std::int64_t shared = 0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const auto lo = std::max(x[i].begin, y[j].begin);
    const auto hi = std::min(x[i].end, y[j].end);
    if (hi > lo) shared += hi - lo;
    if (x[i].end < y[j].end) {
      ++i;
    } else {
      ++j;
    }
  }
  return shared;
}

WindowStats build_window_stats(const std::vector<std::vector<WordId>>& docs, int width, std::size_t vocabulary_size) {
  if (width < 1) throw ConfigError("window width must be >= 1");
  std::vector<std::vector<WindowStats::Run>> runs(vocabulary_size);
  std::int64_t offset = 0;
  for (const auto& doc : docs) {
    const auto length = static_cast<std::int64_t>(doc.size());
    if (length == 0) continue;
    const std::int64_t windows = length <= width ? 1 : length - width + 1;
    for (std::int64_t p = 0; p < length; ++p) {
      const auto w = doc[static_cast<std::size_t>(p)];
      if (w < 0 || static_cast<std::size_t>(w) >= vocabulary_size) throw DataError("word id out of vocabulary range");
      const std::int64_t begin = offset + std::max<std::int64_t>(0, p - width + 1);
      const std::int64_t end = offset + std::min(p, windows - 1) + 1;
      auto& list = runs[static_cast<std::size_t>(w)];
      if (!list.empty() && begin <= list.back().end) {
        list.back().end = std::max(list.back().end, end);
      } else {
        list.push_back({begin, end});
      }
    }
    offset += windows;
  }
  return WindowStats(width, offset, std::move(runs));
}

WindowStats build_window_stats(const EncodedCorpus& corpus, int width) {
  std::vector<std::vector<WordId>> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents) docs.push_back(d.words);
  return build_window_stats(docs, width, corpus.vocabulary.size());
}

double npmi_from_counts(std::int64_t co, std::int64_t occ_a, std::int64_t occ_b, std::int64_t total, double epsilon) {
  if (total <= 0 || occ_a <= 0 || occ_b <= 0) return 0.0;
  if (co >= total) return 1.0;
  const double n = static_cast<double>(total);
  const double p_a = static_cast<double>(occ_a) / n;
  const double p_b = static_cast<double>(occ_b) / n;
  const double p_ab = static_cast<double>(co) / n + epsilon;
  const double value = std::log(p_ab / (p_a * p_b)) / -std::log(p_ab);
  return std::clamp(value, -1.0, 1.0);
}

double npmi(WordId a, WordId b, const WindowStats& stats, double epsilon) {
  return npmi_from_counts(stats.co_occurrence(a, b), stats.occurrence(a), stats.occurrence(b), stats.total_windows(),
                          epsilon);
}

std::vector<WordId> top_words(const Eigen::Ref<const Eigen::RowVectorXd>& row, int n) {
  std::vector<WordId> ids(static_cast<std::size_t>(row.size()));
  std::iota(ids.begin(), ids.end(), 0);
  const auto count = static_cast<std::size_t>(std::clamp<Eigen::Index>(n, 0, row.size()));
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(count), ids.end(),
                    [&](WordId a, WordId b) { return row(a) != row(b) ? row(a) > row(b) : a < b; });
  ids.resize(count);
  return ids;
}

CvScore cv_score(const Eigen::Ref<const Eigen::MatrixXd>& phi, const WindowStats& stats, int top_n, double epsilon) {
  if (top_n < 2) throw ConfigError("top_n must be >= 2");
  if (top_n > phi.cols()) throw ConfigError("top_n=" + std::to_string(top_n) + " exceeds vocabulary size " +
                                            std::to_string(phi.cols()));
  CvScore score;
  for (Eigen::Index t = 0; t < phi.rows(); ++t) {
    const auto words = top_words(phi.row(t), top_n);
    Eigen::MatrixXd context(top_n, top_n);
    for (int i = 0; i < top_n; ++i) {
      for (int j = i; j < top_n; ++j) {
        context(i, j) = context(j, i) = npmi(words[static_cast<std::size_t>(i)], words[static_cast<std::size_t>(j)],
                                             stats, epsilon);
      }
    }
    const Eigen::RowVectorXd topic_vector = context.colwise().sum();
    const double topic_norm = topic_vector.norm();
    double sum = 0.0;
    for (int i = 0; i < top_n; ++i) {
      const double norm = context.row(i).norm();
      if (norm > 0.0 && topic_norm > 0.0) sum += context.row(i).dot(topic_vector) / (norm * topic_norm);
    }
    score.per_topic.push_back(sum / top_n);
  }
  score.overall = score.per_topic.empty()
                      ? 0.0
                      : std::accumulate(score.per_topic.begin(), score.per_topic.end(), 0.0) /
                            static_cast<double>(score.per_topic.size());
  return score;
}

CvScore cv_score(const lda::LdaModel& model, const WindowStats& stats, int top_n, double epsilon) {
  return cv_score(lda::distributions(model).phi, stats, top_n, epsilon);
}

std::vector<int> default_k_values() {
  std::vector<int> ks;
  for (int k = 5; k <= 50; k += 5) ks.push_back(k);
  return ks;
}

std::uint64_t seed_for_k(std::uint64_t master_seed, int k) {
  return mix_seed(master_seed, static_cast<std::uint64_t>(k));
}

std::string CoherenceReport::to_tsv() const {
  std::string out = "k\tcv\n";
  for (const auto& e : entries) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d\t%.6f\n", e.k, e.cv);
    out += buf;
  }
  return out;
}

nlohmann::json CoherenceReport::to_json() const {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& e : entries) runs.push_back({{"k", e.k}, {"cv", e.cv}, {"per_topic", e.per_topic}, {"seed", e.seed}});
  return {{"best_k", best_k}, {"runs", runs}};
}

SweepResult select_k(const EncodedCorpus& corpus, const SweepOptions& options, const WindowStats& stats) {
  if (options.k_values.empty()) throw ConfigError("k_values must not be empty");
  if (options.top_n > static_cast<int>(corpus.vocabulary.size()))
    throw ConfigError("top_n=" + std::to_string(options.top_n) + " exceeds vocabulary size");

  const std::size_t n = options.k_values.size();
  std::vector<std::optional<lda::LdaModel>> models(n);
  std::vector<SweepEntry> entries(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};

  const auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const int k = options.k_values[i];
      try {
        auto hp = lda::LdaHyperparams::with_alpha_rule(k, options.alpha_numerator);
        hp.beta = options.beta;
        hp.iterations = options.iterations;
        hp.averaging_sweeps = options.averaging_sweeps;
        hp.seed = seed_for_k(options.master_seed, k);
        auto model = lda::train(corpus, hp);
        const auto score = cv_score(model, stats, options.top_n, options.epsilon);
        entries[i] = SweepEntry{k, score.overall, score.per_topic, hp.seed};
        models[i] = std::move(model);
      } catch (const Error& e) {
        errors[i] = "k=" + std::to_string(k) + ": " + e.what();
      }
    }
  };
  std::size_t workers = options.workers == 0 ? std::thread::hardware_concurrency() : options.workers;
  workers = std::clamp<std::size_t>(workers, 1, n);
  if (workers == 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw ConfigError(e);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const auto& a = entries[i];
    const auto& b = entries[best];
    if (a.cv > b.cv || (a.cv == b.cv && a.k < b.k)) best = i;
  }
  return SweepResult{CoherenceReport{std::move(entries), options.k_values[best]}, std::move(*models[best])};
}

}  // namespace shopscope::coherence
