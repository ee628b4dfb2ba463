#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "shopscope/harvest/dataset.hpp"

namespace shopscope {

using WordId = std::int32_t;

std::vector<std::string> default_stopwords();

struct TokenizerConfig {
  std::size_t min_len = 2;
  std::vector<std::string> stopwords = default_stopwords();
  bool lemmatize = false;
  /// Lookup lemmatizer used when `lemmatize` is on and no custom hook is set.
  std::map<std::string, std::string> lemmas;
};

/// Lowercase (Unicode-aware), split on non-alphanumerics, drop pure digits, short
/// tokens and stopwords, then optionally lemmatize.
class Tokenizer {
 public:
  using Lemmatizer = std::function<std::string(std::string_view)>;

  explicit Tokenizer(TokenizerConfig config = {}, Lemmatizer hook = {});
  std::vector<std::string> operator()(std::string_view text) const;
  const TokenizerConfig& config() const noexcept { return config_; }

 private:
  TokenizerConfig config_;
  std::unordered_set<std::string> stopwords_;
  Lemmatizer lemmatizer_;
};

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

struct Document {
  std::string shop_handle;
  std::vector<std::string> tokens;
};

struct DocumentSet {
  std::vector<Document> documents;
  std::vector<std::string> dropped_empty;  ///< handles whose titles tokenized to nothing
};

/// One document per shop: its product titles in listing order, tokenized.
DocumentSet build_documents(const ShopDataset& dataset, const Tokenizer& tokenizer);

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Terms must be distinct; ids follow the given order.
  Vocabulary(std::vector<std::string> terms, std::vector<std::int64_t> document_frequency);

  std::size_t size() const noexcept { return terms_.size(); }
  std::optional<WordId> id(std::string_view term) const;
  const std::string& term(WordId id) const { return terms_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::int64_t document_frequency(WordId id) const { return df_.at(static_cast<std::size_t>(id)); }
  /// SHA-256 over the ordered term list; ties a trained model to its vocabulary.
  std::string hash() const;

 private:
  std::vector<std::string> terms_;
  std::vector<std::int64_t> df_;
  std::unordered_map<std::string, WordId> ids_;
};

struct VocabularyOptions {
  std::int64_t min_df = 2;
  double max_df_ratio = 0.5;
};

/// Keeps terms with min_df <= df <= max_df_ratio * |docs|; ids by descending df, then term.
/// Throws ConfigError when nothing survives.
Vocabulary build_vocabulary(const std::vector<Document>& docs, const VocabularyOptions& options = {});

struct EncodedDocument {
  std::string shop_handle;
  std::vector<WordId> words;
};

struct EncodedCorpus {
  std::vector<EncodedDocument> documents;
  Vocabulary vocabulary;
  std::vector<std::string> excluded;  ///< handles with no in-vocabulary tokens

  std::size_t token_count() const;
  std::vector<std::string> decode(const EncodedDocument& doc) const;
};

EncodedCorpus encode(const std::vector<Document>& docs, const Vocabulary& vocabulary);

/// `vocab.tsv`: "id<TAB>term<TAB>df" per line. `docs.txt`: handle then space-separated ids.
void write_corpus(const EncodedCorpus& corpus, const std::filesystem::path& vocab_path,
                  const std::filesystem::path& docs_path);
EncodedCorpus read_corpus(const std::filesystem::path& vocab_path, const std::filesystem::path& docs_path);
std::string vocabulary_to_tsv(const Vocabulary& vocabulary);
std::string documents_to_text(const EncodedCorpus& corpus);

}  // namespace shopscope
