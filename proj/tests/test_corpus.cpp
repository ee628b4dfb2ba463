#include <doctest.h>

#include <random>

#include "shopscope/corpus.hpp"
#include "shopscope/error.hpp"
#include "shopscope/util.hpp"
#include "support.hpp"

using namespace shopscope;
using Tokens = std::vector<std::string>;

namespace {

ShopDataset shops(const std::vector<std::vector<std::string>>& titles) {
  ShopDataset d;
  for (std::size_t i = 0; i < titles.size(); ++i) {
    Shop s{"shop" + std::to_string(i), {}, {}};
    for (const auto& t : titles[i]) s.products.push_back(testing::product(t, 1.0));
    d.shops.push_back(s);
  }
  return d;
}

Document doc(const std::string& handle, Tokens tokens) { return Document{handle, std::move(tokens)}; }

}  // namespace

TEST_SUITE("tokenize") {
  TEST_CASE("default pipeline") {
    CHECK(tokenize("Combo List | 528M Yahoo.com") == Tokens{"combo", "list", "528m", "yahoo", "com"});
    CHECK(tokenize("A 1 2 3").empty());
    CHECK(tokenize("NordVPN | PREMIUM") == Tokens{"nordvpn", "premium"});
    CHECK(tokenize("$40 for 100% of the NFA accounts") == Tokens{"nfa", "accounts"});
    CHECK(tokenize("CPM 3000 OpenBullet combolist") == Tokens{"cpm", "openbullet", "combolist"});
  }

  TEST_CASE("unicode lowercasing and splitting") {
    CHECK(tokenize("ÜBER Café\xE2\x80\x94" "Déjà vu") == Tokens{"über", "café", "déjà", "vu"});
    CHECK(tokenize("Ωmega x") == Tokens{"ωmega"});
  }

  TEST_CASE("knobs") {
    TokenizerConfig cfg;
    cfg.min_len = 3;
    cfg.stopwords = {"premium"};
    CHECK(tokenize("NordVPN premium 1yr go", cfg) == Tokens{"nordvpn", "1yr"});
    cfg.lemmatize = true;
    cfg.lemmas = {{"accounts", "account"}, {"data", "datum"}};
    CHECK(tokenize("Accounts data", cfg) == Tokens{"account", "datum"});

    Tokenizer hooked(TokenizerConfig{}, [](std::string_view t) {
      return t.ends_with("s") ? std::string(t.substr(0, t.size() - 1)) : std::string(t);
    });
    CHECK(hooked("Netflix accounts") == Tokens{"netflix", "accounts"});
    TokenizerConfig on;
    on.lemmatize = true;
    Tokenizer hooked_on(on, [](std::string_view t) {
      return t.ends_with("s") ? std::string(t.substr(0, t.size() - 1)) : std::string(t);
    });
    CHECK(hooked_on("Netflix accounts") == Tokens{"netflix", "account"});
  }

  TEST_CASE("idempotence on random text") {
    std::mt19937_64 rng(11);
    const std::vector<std::string> symbols{"a", "b", "c", "X", "Y", "Z", "0", "1", "9", " ", ".", ",",
                                           "|", "-", "$", "%", "é", "_", "/"};
    for (int trial = 0; trial < 500; ++trial) {
      std::string text;
      const auto len = uniform_below(rng, 40);
      for (std::uint64_t i = 0; i < len; ++i) text += symbols[uniform_below(rng, symbols.size())];
      const auto once = tokenize(text);
      std::string joined;
      for (const auto& t : once) joined += t + " ";
      CHECK(tokenize(joined) == once);
    }
  }
}

TEST_SUITE("documents") {
  TEST_CASE("one document per shop, titles concatenated in order") {
    const auto set = build_documents(shops({{"Netflix Premium", "Spotify Family"}, {"!!! ---"}, {}}), Tokenizer{});
    REQUIRE(set.documents.size() == 1);
    CHECK(set.documents[0].tokens == Tokens{"netflix", "premium", "spotify", "family"});
    CHECK(set.dropped_empty == Tokens{"shop1", "shop2"});
  }

  TEST_CASE("never more documents than shops") {
    const auto d = shops({{"a b"}, {"cc dd"}, {"ee"}, {"1 2"}});
    CHECK(build_documents(d, Tokenizer{}).documents.size() <= d.shops.size());
  }
}

TEST_SUITE("vocabulary") {
  TEST_CASE("ceiling and floor") {
    const std::vector<Document> docs{doc("a", {"all", "two", "one"}), doc("b", {"all", "two"}), doc("c", {"all", "x"}),
                                     doc("d", {"y", "x"})};
    const auto v = build_vocabulary(docs, {2, 0.5});
    CHECK(v.terms() == Tokens{"two", "x"});
    CHECK_FALSE(v.id("all"));
    CHECK_FALSE(v.id("one"));
    CHECK(v.document_frequency(*v.id("two")) == 2);
  }

  TEST_CASE("ids by descending frequency then term") {
    std::vector<Document> docs;
    for (int i = 0; i < 10; ++i) {
      Tokens t{"filler" + std::to_string(i)};
      if (i < 4) t.push_back("beta");
      if (i < 4) t.push_back("alpha");
      if (i < 3) t.push_back("gamma");
      if (i < 2) t.push_back("delta");
      if (i < 2) t.push_back("delta");
      docs.push_back(doc("d" + std::to_string(i), t));
    }
    const auto v = build_vocabulary(docs);
    CHECK(v.terms() == Tokens{"alpha", "beta", "gamma", "delta"});
    for (WordId id = 0; id < static_cast<WordId>(v.size()); ++id) CHECK(*v.id(v.term(id)) == id);
  }

  TEST_CASE("empty vocabulary is a configuration error") {
    CHECK_THROWS_AS(build_vocabulary({doc("a", {"x"}), doc("b", {"y"})}), ConfigError);
  }

  TEST_CASE("hash tracks the term list") {
    const Vocabulary a({"x", "y"}, {2, 2});
    const Vocabulary b({"y", "x"}, {2, 2});
    CHECK(a.hash() != b.hash());
    CHECK(a.hash() == Vocabulary({"x", "y"}, {3, 5}).hash());
  }
}

TEST_SUITE("encode") {
  const std::vector<Document> docs{doc("a", {"x", "q", "y", "x"}), doc("b", {"q", "r"}), doc("c", {"y", "y", "x"}),
                                   doc("d", {"x"})};

  TEST_CASE("OOV dropped, empty documents excluded and reported") {
    const Vocabulary v({"x", "y"}, {3, 2});
    const auto corpus = encode(docs, v);
    REQUIRE(corpus.documents.size() == 3);
    CHECK(corpus.documents[0].shop_handle == "a");
    CHECK(corpus.documents[0].words == std::vector<WordId>{0, 1, 0});
    CHECK(corpus.excluded == Tokens{"b"});
    CHECK(corpus.token_count() == 7);
    CHECK(corpus.decode(corpus.documents[1]) == Tokens{"y", "y", "x"});
  }

  TEST_CASE("decode(encode(d)) is d without OOV tokens") {
    std::mt19937_64 rng(5);
    const Tokens pool{"a1", "b2", "c3", "d4", "e5", "f6", "g7"};
    std::vector<Document> random_docs;
    for (int d = 0; d < 50; ++d) {
      Tokens t;
      for (std::uint64_t i = 0, n = 1 + uniform_below(rng, 12); i < n; ++i) t.push_back(pool[uniform_below(rng, pool.size())]);
      random_docs.push_back(doc("h" + std::to_string(d), t));
    }
    const auto v = build_vocabulary(random_docs, {2, 0.9});
    const auto corpus = encode(random_docs, v);
    std::size_t next = 0;
    for (const auto& d : random_docs) {
      Tokens kept;
      for (const auto& t : d.tokens) {
        if (v.id(t)) kept.push_back(t);
      }
      if (kept.empty()) continue;
      REQUIRE(next < corpus.documents.size());
      CHECK(corpus.documents[next].shop_handle == d.shop_handle);
      CHECK(corpus.decode(corpus.documents[next]) == kept);
      for (auto w : corpus.documents[next].words) CHECK(w < static_cast<WordId>(v.size()));
      ++next;
    }
    CHECK(next == corpus.documents.size());
  }

  TEST_CASE("plain-text serialization round trip") {
    const Vocabulary v({"x", "y"}, {3, 2});
    const auto corpus = encode(docs, v);
    testing::TempDir dir;
    write_corpus(corpus, dir.path() / "vocab.tsv", dir.path() / "docs.txt");
    CHECK(read_file(dir.path() / "vocab.tsv") == "0\tx\t3\n1\ty\t2\n");
    CHECK(read_file(dir.path() / "docs.txt") == "a 0 1 0\nc 1 1 0\nd 0\n");
    const auto back = read_corpus(dir.path() / "vocab.tsv", dir.path() / "docs.txt");
    CHECK(back.vocabulary.terms() == v.terms());
    CHECK(back.documents.size() == 3);
    CHECK(back.documents[1].words == corpus.documents[1].words);

    atomic_write(dir.path() / "docs.txt", "a 0 7\n");
    CHECK_THROWS_AS(read_corpus(dir.path() / "vocab.tsv", dir.path() / "docs.txt"), DataError);
  }
}
