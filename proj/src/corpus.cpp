#include "shopscope/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <locale>
#include <numeric>
#include <sstream>

#include "shopscope/error.hpp"
#include "shopscope/util.hpp"

namespace shopscope {

namespace {

const std::locale& utf8_locale() {
  static const std::locale loc = [] {
    for (const char* name : {"C.UTF-8", "C.utf8", "en_US.UTF-8"}) {
      try {
        return std::locale(name);
      } catch (const std::runtime_error&) {
      }
    }
    return std::locale::classic();
  }();
  return loc;
}

/// Decodes one code point; invalid sequences yield U+FFFD and consume one byte.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
  if (len == 0 || i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  char32_t cp = len == 1 ? b0 : b0 & (0x7F >> len);
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool all_digits(const std::string& token) {
  return std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::size_t code_point_count(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

}  // namespace

std::vector<std::string> default_stopwords() {
  return {"a",    "about", "after", "all",   "also", "am",   "an",   "and",   "any",  "are",   "as",    "at",
          "be",   "been",  "but",   "by",    "can",  "do",   "does", "for",   "from", "get",   "got",   "had",
          "has",  "have",  "he",    "her",   "his",  "how",  "if",   "in",    "into", "is",    "it",    "its",
          "me",   "my",    "of",    "on",    "or",   "our",  "she",  "so",    "than", "that",  "the",   "their",
          "them", "then",  "there", "these", "they", "this", "those", "to",   "too",  "up",    "us",    "very",
          "was",  "we",    "were",  "what",  "when", "which", "who", "will",  "with", "you",   "your"};
}

Tokenizer::Tokenizer(TokenizerConfig config, Lemmatizer hook)
    : config_(std::move(config)),
      stopwords_(config_.stopwords.begin(), config_.stopwords.end()),
      lemmatizer_(std::move(hook)) {
  if (config_.lemmatize && !lemmatizer_ && !config_.lemmas.empty()) {
    lemmatizer_ = [lemmas = config_.lemmas](std::string_view token) {
      const auto it = lemmas.find(std::string(token));
      return it == lemmas.end() ? std::string(token) : it->second;
    };
  }
}

std::vector<std::string> Tokenizer::operator()(std::string_view text) const {
  const auto& ctype = std::use_facet<std::ctype<wchar_t>>(utf8_locale());
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (current.empty()) return;
    std::string token = std::move(current);
    current.clear();
    if (all_digits(token) || code_point_count(token) < config_.min_len || stopwords_.contains(token)) return;
    if (config_.lemmatize && lemmatizer_) {
      token = lemmatizer_(token);
      if (token.empty() || stopwords_.contains(token)) return;
    }
    tokens.push_back(std::move(token));
  };
  for (std::size_t i = 0; i < text.size();) {
    const char32_t cp = next_code_point(text, i);
    const auto wc = static_cast<wchar_t>(cp);
    if (cp != 0xFFFD && ctype.is(std::ctype_base::alnum, wc)) {
      append_utf8(current, static_cast<char32_t>(ctype.tolower(wc)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
  return Tokenizer(config)(text);
}

DocumentSet build_documents(const ShopDataset& dataset, const Tokenizer& tokenizer) {
  DocumentSet out;
  for (const auto& shop : dataset.shops) {
    Document doc{shop.handle, {}};
    for (const auto& product : shop.products) {
      auto tokens = tokenizer(product.title);
      std::move(tokens.begin(), tokens.end(), std::back_inserter(doc.tokens));
    }
    if (doc.tokens.empty()) {
      out.dropped_empty.push_back(shop.handle);
    } else {
      out.documents.push_back(std::move(doc));
    }
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::int64_t> document_frequency)
    : terms_(std::move(terms)), df_(std::move(document_frequency)) {
  if (df_.size() != terms_.size()) throw ConfigError("vocabulary term/df size mismatch");
  ids_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!ids_.emplace(terms_[i], static_cast<WordId>(i)).second) throw DataError("duplicate vocabulary term '" + terms_[i] + "'");
  }
}

std::optional<WordId> Vocabulary::id(std::string_view term) const {
  const auto it = ids_.find(std::string(term));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::hash() const {
  std::string joined;
  for (const auto& t : terms_) {
    joined += t;
    joined += '\n';
  }
  return sha256_hex(joined);
}

Vocabulary build_vocabulary(const std::vector<Document>& docs, const VocabularyOptions& options) {
  if (docs.empty()) throw ConfigError("cannot build a vocabulary from zero documents");
  std::unordered_map<std::string, std::int64_t> df;
  for (const auto& doc : docs) {
    std::unordered_set<std::string_view> distinct(doc.tokens.begin(), doc.tokens.end());
    for (const auto term : distinct) ++df[std::string(term)];
  }
  const double ceiling = options.max_df_ratio * static_cast<double>(docs.size());
  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (auto& [term, count] : df) {
    if (count >= options.min_df && static_cast<double>(count) <= ceiling) kept.emplace_back(term, count);
  }
  if (kept.empty()) throw ConfigError("vocabulary is empty after document-frequency filtering");
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> terms;
  std::vector<std::int64_t> freqs;
  for (auto& [term, count] : kept) {
    terms.push_back(std::move(term));
    freqs.push_back(count);
  }
  return Vocabulary(std::move(terms), std::move(freqs));
}

std::size_t EncodedCorpus::token_count() const {
  return std::accumulate(documents.begin(), documents.end(), std::size_t{0},
                         [](std::size_t acc, const EncodedDocument& d) { return acc + d.words.size(); });
}

std::vector<std::string> EncodedCorpus::decode(const EncodedDocument& doc) const {
  std::vector<std::string> out;
  out.reserve(doc.words.size());
  for (const auto id : doc.words) out.push_back(vocabulary.term(id));
  return out;
}

EncodedCorpus encode(const std::vector<Document>& docs, const Vocabulary& vocabulary) {
  EncodedCorpus corpus;
  corpus.vocabulary = vocabulary;
  for (const auto& doc : docs) {
    EncodedDocument encoded{doc.shop_handle, {}};
    for (const auto& token : doc.tokens) {
      if (const auto id = vocabulary.id(token)) encoded.words.push_back(*id);
    }
    if (encoded.words.empty()) {
      corpus.excluded.push_back(doc.shop_handle);
    } else {
      corpus.documents.push_back(std::move(encoded));
    }
  }
  return corpus;
}

std::string vocabulary_to_tsv(const Vocabulary& vocabulary) {
  std::string out;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    out += std::to_string(i) + "\t" + vocabulary.terms()[i] + "\t" +
           std::to_string(vocabulary.document_frequency(static_cast<WordId>(i))) + "\n";
  }
  return out;
}

std::string documents_to_text(const EncodedCorpus& corpus) {
  std::string out;
  for (const auto& doc : corpus.documents) {
    out += doc.shop_handle;
    for (const auto id : doc.words) out += " " + std::to_string(id);
    out += "\n";
  }
  return out;
}

void write_corpus(const EncodedCorpus& corpus, const std::filesystem::path& vocab_path,
                  const std::filesystem::path& docs_path) {
  atomic_write(vocab_path, vocabulary_to_tsv(corpus.vocabulary));
  atomic_write(docs_path, documents_to_text(corpus));
}

EncodedCorpus read_corpus(const std::filesystem::path& vocab_path, const std::filesystem::path& docs_path) {
  std::vector<std::string> terms;
  std::vector<std::int64_t> dfs;
  {
    std::istringstream in(read_file(vocab_path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::istringstream fields(line);
      std::size_t id = 0;
      std::string term;
      std::int64_t df = 0;
      if (!(fields >> id) || fields.get() != '\t' || !std::getline(fields, term, '\t') || !(fields >> df) ||
          id != terms.size())
        throw DataError(vocab_path.string(), line_no, "expected 'id<TAB>term<TAB>df' with dense ids");
      terms.push_back(term);
      dfs.push_back(df);
    }
  }
  EncodedCorpus corpus;
  corpus.vocabulary = Vocabulary(std::move(terms), std::move(dfs));
  std::istringstream in(read_file(docs_path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    EncodedDocument doc;
    fields >> doc.shop_handle;
    long long id = 0;
    while (fields >> id) {
      if (id < 0 || static_cast<std::size_t>(id) >= corpus.vocabulary.size())
        throw DataError(docs_path.string(), line_no, "word id " + std::to_string(id) + " out of range");
      doc.words.push_back(static_cast<WordId>(id));
    }
    if (!fields.eof()) throw DataError(docs_path.string(), line_no, "non-numeric word id");
    if (doc.words.empty()) throw DataError(docs_path.string(), line_no, "document without tokens");
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace shopscope
