#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shopscope/corpus.hpp"
#include "shopscope/harvest/dataset.hpp"
#include "shopscope/lda.hpp"

namespace shopscope::termrank {

inline constexpr double kDefaultLambda = 0.6;

struct TermScore {
  WordId word = 0;
  std::string term;
  std::optional<int> topic;
  double score = 0.0;
  int rank = 0;  ///< 1-based, dense
};

/// p(w): corpus token frequencies, normalized.
Eigen::VectorXd term_probabilities(const EncodedCorpus& corpus);
/// p(k): share of all token assignments held by each topic.
Eigen::VectorXd topic_probabilities(const lda::LdaModel& model);

/// lambda log phi_kw + (1 - lambda) log(phi_kw / p_w) over the whole vocabulary,
/// ranked descending with ties to the lower word id.
std::vector<TermScore> relevance(const Eigen::Ref<const Eigen::MatrixXd>& phi,
                                 const Eigen::Ref<const Eigen::VectorXd>& term_probs, int topic, double lambda,
                                 const Vocabulary* vocabulary = nullptr);

struct Saliency {
  Eigen::MatrixXd topic_given_term;  ///< k x V; column w is p(k|w)
  Eigen::VectorXd distinctiveness;   ///< KL(p(k|w) || p(k))
  Eigen::VectorXd saliency;          ///< p(w) * distinctiveness
};

Saliency compute_saliency(const Eigen::Ref<const Eigen::MatrixXd>& phi,
                          const Eigen::Ref<const Eigen::VectorXd>& topic_probs,
                          const Eigen::Ref<const Eigen::VectorXd>& term_probs);

/// Corpus-wide saliency ranking; `topic` holds argmax_k p(k|w).
std::vector<TermScore> saliency(const Eigen::Ref<const Eigen::MatrixXd>& phi,
                                const Eigen::Ref<const Eigen::VectorXd>& topic_probs,
                                const Eigen::Ref<const Eigen::VectorXd>& term_probs,
                                const Vocabulary* vocabulary = nullptr);

/// The n most salient terms among those whose most likely generating topic is `topic`.
std::vector<std::string> top_salient_terms(const lda::LdaModel& model, const EncodedCorpus& corpus, int topic, int n);

struct ProductMatch {
  std::string shop_handle;
  Product product;
  std::vector<std::string> matched_terms;
  std::optional<std::uint64_t> record_count;
};

/// Products whose title contains any term (or augmentation) as whole tokens. Terms are
/// tokenized like titles; a multi-token term must appear contiguously. Sorted by
/// descending price, then title.
std::vector<ProductMatch> query_products(const ShopDataset& dataset, const std::vector<std::string>& terms,
                                         const std::vector<std::string>& augment, const Tokenizer& tokenizer);

/// Heuristic advertised record count: the largest "<number><k|m|b|thousand|million|billion>"
/// in the title, e.g. "528M" -> 528000000, "92.2 Million" -> 92200000.
std::optional<std::uint64_t> parse_record_count(std::string_view title);

struct SampleProduct {
  int topic = 0;
  std::string shop_handle;
  std::string title;
  double price_usd = 0.0;
  int topic_terms = 0;  ///< number of the topic's key terms present in the title
};

/// Per topic, products from shops where that topic dominates, ranked by how many of the
/// topic's key terms their title contains (ties: shorter title, then title).
std::vector<SampleProduct> sample_products(const ShopDataset& dataset, const EncodedCorpus& corpus,
                                           const Eigen::Ref<const Eigen::MatrixXd>& theta,
                                           const std::vector<std::vector<std::string>>& key_terms,
                                           const Tokenizer& tokenizer, int per_topic);

}  // namespace shopscope::termrank
