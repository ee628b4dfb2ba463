#include "shopscope/lda.hpp"

#include <cstdio>
#include <cstdlib>
#include <json.hpp>

#include "shopscope/error.hpp"
#include "shopscope/util.hpp"

namespace shopscope::lda {

using nlohmann::json;

LdaHyperparams LdaHyperparams::with_alpha_rule(int k, double numerator) {
  LdaHyperparams hp;
  hp.k = k;
  hp.alpha = numerator / static_cast<double>(k);
  return hp;
}

void LdaHyperparams::validate() const {
  if (k < 2) throw ConfigError("k must be >= 2, got " + std::to_string(k));
  if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (averaging_sweeps < 0 || averaging_sweeps > iterations)
    throw ConfigError("averaging_sweeps must lie in [0, iterations]");
}

TopicDistributions distributions(const LdaModel& model) {
  if (model.averaged) return *model.averaged;
  return {estimate_phi(model), estimate_theta(model)};
}

std::vector<std::int64_t> dominant_topic_counts(const Eigen::MatrixXd& theta) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(theta.cols()), 0);
  for (Eigen::Index d = 0; d < theta.rows(); ++d) ++counts[static_cast<std::size_t>(dominant_topic(theta.row(d)))];
  return counts;
}

GibbsSampler::GibbsSampler(const EncodedCorpus& corpus, const LdaHyperparams& hp)
    : corpus_(corpus), rng_(hp.seed), cumulative_(static_cast<std::size_t>(std::max(hp.k, 0))) {
  hp.validate();
  if (corpus.documents.empty()) throw ConfigError("cannot train on an empty corpus");
  const auto vocab = static_cast<Eigen::Index>(corpus.vocabulary.size());
  if (vocab < 2) throw ConfigError("vocabulary must contain at least 2 terms");
  if (static_cast<std::size_t>(hp.k) >= corpus.token_count())
    throw ConfigError("k=" + std::to_string(hp.k) + " is not below the corpus token count " +
                      std::to_string(corpus.token_count()));

  model_.hyperparams = hp;
  model_.vocabulary_hash = corpus.vocabulary.hash();
  const auto docs = static_cast<Eigen::Index>(corpus.documents.size());
  model_.doc_topic = DocTopicCounts::Zero(docs, hp.k);
  model_.topic_word = TopicWordCounts::Zero(hp.k, vocab);
  model_.topic_totals = TopicTotals::Zero(hp.k);
  model_.assignments.resize(corpus.documents.size());
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& words = corpus.documents[d].words;
    auto& z = model_.assignments[d];
    z.resize(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (words[i] < 0 || words[i] >= vocab) throw DataError("word id out of vocabulary range");
      const auto topic = static_cast<std::int32_t>(uniform_below(rng_, static_cast<std::uint64_t>(hp.k)));
      z[i] = topic;
      ++model_.doc_topic(static_cast<Eigen::Index>(d), topic);
      ++model_.topic_word(topic, words[i]);
      ++model_.topic_totals(topic);
    }
  }
}

void GibbsSampler::sweep() {
  const int k = model_.hyperparams.k;
  const double alpha = model_.hyperparams.alpha;
  const double beta = model_.hyperparams.beta;
  const double v_beta = static_cast<double>(model_.topic_word.cols()) * beta;
  std::int32_t* totals = model_.topic_totals.data();

  for (std::size_t d = 0; d < corpus_.documents.size(); ++d) {
    const auto& words = corpus_.documents[d].words;
    auto& z = model_.assignments[d];
    std::int32_t* doc_counts = model_.doc_topic.row(static_cast<Eigen::Index>(d)).data();
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::int32_t* word_counts = model_.topic_word.col(words[i]).data();
      const std::int32_t old_topic = z[i];
      --doc_counts[old_topic];
      --word_counts[old_topic];
      --totals[old_topic];

      double total = 0.0;
      for (int t = 0; t < k; ++t) {
        total += (doc_counts[t] + alpha) * (word_counts[t] + beta) / (totals[t] + v_beta);
        cumulative_[static_cast<std::size_t>(t)] = total;
      }
      const double u = uniform01(rng_) * total;
      int new_topic = 0;
      while (new_topic < k - 1 && cumulative_[static_cast<std::size_t>(new_topic)] <= u) ++new_topic;

      z[i] = new_topic;
      ++doc_counts[new_topic];
      ++word_counts[new_topic];
      ++totals[new_topic];
    }
  }
  ++sweeps_;
}

Eigen::VectorXd GibbsSampler::conditional_weights(std::size_t doc, std::size_t pos) const {
  const auto& hp = model_.hyperparams;
  const auto word = corpus_.documents.at(doc).words.at(pos);
  const auto own = model_.assignments[doc][pos];
  const auto vocab = static_cast<double>(model_.topic_word.cols());
  Eigen::VectorXd weights(hp.k);
  for (int t = 0; t < hp.k; ++t) {
    const int self = t == own ? 1 : 0;
    weights(t) = collapsed_weight<double>(model_.doc_topic(static_cast<Eigen::Index>(doc), t) - self,
                                          model_.topic_word(t, word) - self, model_.topic_totals(t) - self, hp.alpha,
                                          hp.beta, vocab);
  }
  return weights;
}

LdaModel train(const EncodedCorpus& corpus, const LdaHyperparams& hp, const SweepObserver& after_sweep) {
  GibbsSampler sampler(corpus, hp);
  Eigen::MatrixXd phi_sum, theta_sum;
  const int average_from = hp.iterations - hp.averaging_sweeps;
  for (int it = 0; it < hp.iterations; ++it) {
    sampler.sweep();
    if (after_sweep) after_sweep(sampler);
    if (hp.averaging_sweeps > 0 && it >= average_from) {
      const auto phi = estimate_phi(sampler.model());
      const auto theta = estimate_theta(sampler.model());
      if (phi_sum.size() == 0) {
        phi_sum = phi;
        theta_sum = theta;
      } else {
        phi_sum += phi;
        theta_sum += theta;
      }
    }
  }
  LdaModel model = std::move(sampler).release();
  if (hp.averaging_sweeps > 0) {
    const double n = hp.averaging_sweeps;
    model.averaged = TopicDistributions{phi_sum / n, theta_sum / n};
  }
  return model;
}

Counts recount(const LdaModel& model, const EncodedCorpus& corpus) {
  Counts c{DocTopicCounts::Zero(model.doc_topic.rows(), model.topics()),
           TopicWordCounts::Zero(model.topics(), model.topic_word.cols()), TopicTotals::Zero(model.topics())};
  for (std::size_t d = 0; d < model.assignments.size(); ++d) {
    for (std::size_t i = 0; i < model.assignments[d].size(); ++i) {
      const auto t = model.assignments[d][i];
      ++c.doc_topic(static_cast<Eigen::Index>(d), t);
      ++c.topic_word(t, corpus.documents[d].words[i]);
      ++c.topic_totals(t);
    }
  }
  return c;
}

namespace {

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hexfloat(const json& v) {
  const auto s = v.get<std::string>();
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw DataError("bad hex float '" + s + "'");
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(hexfloat(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, Eigen::Index n_rows, Eigen::Index n_cols) {
  if (static_cast<Eigen::Index>(rows.size()) != n_rows) throw DataError("matrix row count mismatch");
  Eigen::MatrixXd m(n_rows, n_cols);
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != n_cols) throw DataError("matrix column count mismatch");
    for (Eigen::Index c = 0; c < n_cols; ++c) m(r, c) = parse_hexfloat(rows[r][c]);
  }
  return m;
}

template <typename Matrix>
json counts_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Matrix>
Matrix counts_from_json(const json& rows, Eigen::Index n_rows, Eigen::Index n_cols) {
  if (static_cast<Eigen::Index>(rows.size()) != n_rows) throw DataError("count matrix row count mismatch");
  Matrix m(n_rows, n_cols);
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != n_cols) throw DataError("count matrix column count mismatch");
    for (Eigen::Index c = 0; c < n_cols; ++c) m(r, c) = rows[r][c].get<std::int32_t>();
  }
  return m;
}

}  // namespace

std::string serialize_model(const LdaModel& model) {
  const auto& hp = model.hyperparams;
  json out{{"format", "shopscope-lda"},
           {"version", 1},
           {"hyperparams",
            {{"k", hp.k},
             {"alpha", hexfloat(hp.alpha)},
             {"beta", hexfloat(hp.beta)},
             {"iterations", hp.iterations},
             {"seed", hp.seed},
             {"averaging_sweeps", hp.averaging_sweeps}}},
           {"vocabulary_hash", model.vocabulary_hash},
           {"vocabulary_size", model.topic_word.cols()},
           {"assignments", model.assignments},
           {"doc_topic", counts_to_json(model.doc_topic)},
           {"topic_word", counts_to_json(model.topic_word)},
           {"topic_totals", std::vector<std::int32_t>(model.topic_totals.data(),
                                                      model.topic_totals.data() + model.topic_totals.size())}};
  if (model.averaged) {
    out["averaged"] = {{"phi", matrix_to_json(model.averaged->phi)}, {"theta", matrix_to_json(model.averaged->theta)}};
  }
  return out.dump() + "\n";
}

LdaModel deserialize_model(const std::string& text, const std::string& source_name) {
  try {
    const json in = json::parse(text);
    if (in.value("format", "") != "shopscope-lda") throw DataError(source_name + ": not a shopscope LDA model");
    if (in.value("version", 0) != 1) throw DataError(source_name + ": unsupported model version");
    LdaModel model;
    const auto& hp = in.at("hyperparams");
    model.hyperparams.k = hp.at("k").get<int>();
    model.hyperparams.alpha = parse_hexfloat(hp.at("alpha"));
    model.hyperparams.beta = parse_hexfloat(hp.at("beta"));
    model.hyperparams.iterations = hp.at("iterations").get<int>();
    model.hyperparams.seed = hp.at("seed").get<std::uint64_t>();
    model.hyperparams.averaging_sweeps = hp.value("averaging_sweeps", 0);
    model.hyperparams.validate();
    model.vocabulary_hash = in.at("vocabulary_hash").get<std::string>();
    const auto k = static_cast<Eigen::Index>(model.hyperparams.k);
    const auto vocab = in.at("vocabulary_size").get<Eigen::Index>();
    model.assignments = in.at("assignments").get<std::vector<std::vector<std::int32_t>>>();
    const auto docs = static_cast<Eigen::Index>(model.assignments.size());
    model.doc_topic = counts_from_json<DocTopicCounts>(in.at("doc_topic"), docs, k);
    model.topic_word = counts_from_json<TopicWordCounts>(in.at("topic_word"), k, vocab);
    const auto totals = in.at("topic_totals").get<std::vector<std::int32_t>>();
    if (static_cast<Eigen::Index>(totals.size()) != k) throw DataError(source_name + ": topic_totals size mismatch");
    model.topic_totals = Eigen::Map<const TopicTotals>(totals.data(), k);

    // z must tally to the stored document and topic counts.
    DocTopicCounts doc_topic = DocTopicCounts::Zero(docs, k);
    for (Eigen::Index d = 0; d < docs; ++d) {
      for (const auto t : model.assignments[static_cast<std::size_t>(d)]) {
        if (t < 0 || t >= k) throw DataError(source_name + ": topic assignment out of range");
        ++doc_topic(d, t);
      }
    }
    if (doc_topic != model.doc_topic || model.doc_topic.colwise().sum().transpose() != model.topic_totals ||
        model.topic_word.rowwise().sum() != model.topic_totals)
      throw DataError(source_name + ": stored counts do not match the assignments");
    if (in.contains("averaged")) {
      model.averaged = TopicDistributions{matrix_from_json(in["averaged"].at("phi"), k, vocab),
                                          matrix_from_json(in["averaged"].at("theta"), docs, k)};
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(source_name + ": " + e.what());
  }
}

void save_model(const LdaModel& model, const std::filesystem::path& path) { atomic_write(path, serialize_model(model)); }

LdaModel load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path), path.string()); }

}  // namespace shopscope::lda
