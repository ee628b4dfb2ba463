#include "shopscope/termrank.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "shopscope/error.hpp"
#include "shopscope/util.hpp"

namespace shopscope::termrank {

namespace {

std::vector<TermScore> rank(const Eigen::Ref<const Eigen::VectorXd>& scores, const Vocabulary* vocabulary) {
  std::vector<TermScore> out;
  out.reserve(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index w = 0; w < scores.size(); ++w) {
    TermScore ts;
    ts.word = static_cast<WordId>(w);
    ts.score = scores(w);
    if (vocabulary) ts.term = vocabulary->term(ts.word);
    out.push_back(std::move(ts));
  }
  std::stable_sort(out.begin(), out.end(), [](const TermScore& a, const TermScore& b) {
    return a.score != b.score ? a.score > b.score : a.word < b.word;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

bool contains_sequence(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

}  // namespace

Eigen::VectorXd term_probabilities(const EncodedCorpus& corpus) {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(corpus.vocabulary.size()));
  for (const auto& doc : corpus.documents) {
    for (const auto w : doc.words) counts(w) += 1.0;
  }
  const double total = counts.sum();
  if (total <= 0.0) throw DataError("corpus has no tokens");
  return counts / total;
}

Eigen::VectorXd topic_probabilities(const lda::LdaModel& model) {
  const Eigen::VectorXd mass = model.topic_totals.cast<double>();
  return mass / mass.sum();
}

std::vector<TermScore> relevance(const Eigen::Ref<const Eigen::MatrixXd>& phi,
                                 const Eigen::Ref<const Eigen::VectorXd>& term_probs, int topic, double lambda,
                                 const Vocabulary* vocabulary) {
  if (topic < 0 || topic >= phi.rows()) throw ConfigError("topic out of range");
  if (lambda < 0.0 || lambda > 1.0) throw ConfigError("lambda must lie in [0, 1]");
  if (term_probs.size() != phi.cols()) throw ConfigError("term probability size does not match phi");
  const Eigen::ArrayXd log_phi = phi.row(topic).transpose().array().log();
  const Eigen::VectorXd scores = (lambda * log_phi + (1.0 - lambda) * (log_phi - term_probs.array().log())).matrix();
  auto ranked = rank(scores, vocabulary);
  for (auto& t : ranked) t.topic = topic;
  return ranked;
}

Saliency compute_saliency(const Eigen::Ref<const Eigen::MatrixXd>& phi,
                          const Eigen::Ref<const Eigen::VectorXd>& topic_probs,
                          const Eigen::Ref<const Eigen::VectorXd>& term_probs) {
  if (topic_probs.size() != phi.rows() || term_probs.size() != phi.cols())
    throw ConfigError("saliency inputs have mismatched dimensions");
  Saliency s;
  // joint(k, w) = phi_kw p(k); normalizing each column gives p(k|w).
  const Eigen::MatrixXd joint = phi.array().colwise() * topic_probs.array();
  s.topic_given_term = joint.array().rowwise() / joint.colwise().sum().array();
  s.distinctiveness = Eigen::VectorXd::Zero(phi.cols());
  for (Eigen::Index w = 0; w < phi.cols(); ++w) {
    double kl = 0.0;
    for (Eigen::Index k = 0; k < phi.rows(); ++k) {
      const double p = s.topic_given_term(k, w);
      if (p > 0.0) kl += p * std::log(p / topic_probs(k));
    }
    s.distinctiveness(w) = std::max(kl, 0.0);
  }
  s.saliency = term_probs.cwiseProduct(s.distinctiveness);
  return s;
}

std::vector<TermScore> saliency(const Eigen::Ref<const Eigen::MatrixXd>& phi,
                                const Eigen::Ref<const Eigen::VectorXd>& topic_probs,
                                const Eigen::Ref<const Eigen::VectorXd>& term_probs, const Vocabulary* vocabulary) {
  const auto s = compute_saliency(phi, topic_probs, term_probs);
  auto ranked = rank(s.saliency, vocabulary);
  for (auto& t : ranked) t.topic = static_cast<int>(lda::dominant_topic(s.topic_given_term.col(t.word)));
  return ranked;
}

std::vector<std::string> top_salient_terms(const lda::LdaModel& model, const EncodedCorpus& corpus, int topic, int n) {
  if (topic < 0 || topic >= model.topics()) throw ConfigError("topic out of range");
  std::vector<std::string> out;
  if (n <= 0) return out;
  const auto phi = lda::distributions(model).phi;
  for (const auto& t : saliency(phi, topic_probabilities(model), term_probabilities(corpus), &corpus.vocabulary)) {
    if (t.topic != topic) continue;
    out.push_back(t.term);
    if (static_cast<int>(out.size()) == n) break;
  }
  return out;
}

std::vector<ProductMatch> query_products(const ShopDataset& dataset, const std::vector<std::string>& terms,
                                         const std::vector<std::string>& augment, const Tokenizer& tokenizer) {
  std::set<std::pair<std::vector<std::string>, std::string>> queries;  // tokens, display term
  for (const auto* list : {&terms, &augment}) {
    for (const auto& term : *list) {
      auto tokens = tokenizer(term);
      if (!tokens.empty()) queries.emplace(std::move(tokens), ascii_lower(trim(term)));
    }
  }
  std::vector<ProductMatch> out;
  for (const auto& shop : dataset.shops) {
    for (const auto& product : shop.products) {
      const auto title_tokens = tokenizer(product.title);
      std::vector<std::string> matched;
      for (const auto& [tokens, display] : queries) {
        if (contains_sequence(title_tokens, tokens)) matched.push_back(display);
      }
      if (matched.empty()) continue;
      out.push_back(ProductMatch{shop.handle, product, std::move(matched), parse_record_count(product.title)});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ProductMatch& a, const ProductMatch& b) {
    if (a.product.price_usd != b.product.price_usd) return a.product.price_usd > b.product.price_usd;
    if (a.product.title != b.product.title) return a.product.title < b.product.title;
    return a.shop_handle < b.shop_handle;
  });
  return out;
}

std::optional<std::uint64_t> parse_record_count(std::string_view title) {
  static const std::regex re(R"((^|[^0-9A-Za-z.,])(\d+(?:[.,]\d+)?)\s*(billion|million|thousand|bn|mil|[kmb])(?![a-z]))",
                             std::regex::icase | std::regex::ECMAScript);
  std::optional<std::uint64_t> best;
  const std::string text(title);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
    std::string number = (*it)[2].str();
    // "4,6M" uses a decimal comma; "1,500" is a thousands separator.
    if (const auto comma = number.find(','); comma != std::string::npos) {
      if (number.size() - comma - 1 == 3) {
        number.erase(comma, 1);
      } else {
        number[comma] = '.';
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec != std::errc{}) continue;
    const std::string unit = ascii_lower((*it)[3].str());
    double scale = 1.0;
    if (unit == "k" || unit == "thousand") scale = 1e3;
    if (unit == "m" || unit == "million" || unit == "mil") scale = 1e6;
    if (unit == "b" || unit == "billion" || unit == "bn") scale = 1e9;
    const auto count = static_cast<std::uint64_t>(std::llround(value * scale));
    if (!best || count > *best) best = count;
  }
  return best;
}

std::vector<SampleProduct> sample_products(const ShopDataset& dataset, const EncodedCorpus& corpus,
                                           const Eigen::Ref<const Eigen::MatrixXd>& theta,
                                           const std::vector<std::vector<std::string>>& key_terms,
                                           const Tokenizer& tokenizer, int per_topic) {
  if (theta.rows() != static_cast<Eigen::Index>(corpus.documents.size()))
    throw ConfigError("theta rows do not match corpus documents");
  std::unordered_map<std::string, int> dominant;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    dominant[corpus.documents[d].shop_handle] = static_cast<int>(lda::dominant_topic(theta.row(static_cast<Eigen::Index>(d))));
  }
  std::vector<std::vector<SampleProduct>> by_topic(key_terms.size());
  for (const auto& shop : dataset.shops) {
    const auto it = dominant.find(shop.handle);
    if (it == dominant.end() || it->second >= static_cast<int>(key_terms.size())) continue;
    const int topic = it->second;
    const std::unordered_set<std::string> terms(key_terms[topic].begin(), key_terms[topic].end());
    for (const auto& product : shop.products) {
      const auto tokens = tokenizer(product.title);
      const std::unordered_set<std::string> distinct(tokens.begin(), tokens.end());
      const auto hits = static_cast<int>(std::count_if(distinct.begin(), distinct.end(),
                                                       [&](const std::string& t) { return terms.contains(t); }));
      if (hits == 0) continue;
      by_topic[topic].push_back(SampleProduct{topic, shop.handle, product.title, product.price_usd, hits});
    }
  }
  std::vector<SampleProduct> out;
  for (auto& list : by_topic) {
    std::stable_sort(list.begin(), list.end(), [](const SampleProduct& a, const SampleProduct& b) {
      if (a.topic_terms != b.topic_terms) return a.topic_terms > b.topic_terms;
      if (a.title.size() != b.title.size()) return a.title.size() < b.title.size();
      return a.title < b.title;
    });
    // Distinct titles only; shops often relist the same product.
    std::set<std::string> seen;
    int taken = 0;
    for (auto& s : list) {
      if (taken == per_topic) break;
      if (!seen.insert(s.title).second) continue;
      out.push_back(std::move(s));
      ++taken;
    }
  }
  return out;
}

}  // namespace shopscope::termrank
