#pragma once

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "shopscope/corpus.hpp"
#include "shopscope/harvest/dataset.hpp"

namespace testing {

inline const std::filesystem::path kSourceDir{SHOPSCOPE_SOURCE_DIR};

/// A fresh directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "shopscope") {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Corpus over terms "w0".."w{V-1}" with the given word ids, vocabulary ids kept as-is.
inline shopscope::EncodedCorpus make_corpus(const std::vector<std::vector<shopscope::WordId>>& docs, int vocab_size) {
  std::vector<std::string> terms;
  std::vector<std::int64_t> df(static_cast<std::size_t>(vocab_size), 0);
  for (int w = 0; w < vocab_size; ++w) terms.push_back("w" + std::to_string(w));
  shopscope::EncodedCorpus corpus;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<bool> seen(static_cast<std::size_t>(vocab_size), false);
    for (auto w : docs[d]) {
      if (!seen[static_cast<std::size_t>(w)]) ++df[static_cast<std::size_t>(w)];
      seen[static_cast<std::size_t>(w)] = true;
    }
    corpus.documents.push_back({"doc" + std::to_string(d), docs[d]});
  }
  corpus.vocabulary = shopscope::Vocabulary(terms, df);
  return corpus;
}

inline shopscope::Product product(std::string title, double price,
                                  shopscope::Category c = shopscope::Category::account) {
  return shopscope::Product{std::move(title), price, c, {}};
}

}  // namespace testing
