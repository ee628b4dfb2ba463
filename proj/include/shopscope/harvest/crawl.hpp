#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shopscope/harvest/fetch.hpp"
#include "shopscope/harvest/signature.hpp"

namespace shopscope::harvest {

enum class RecordSource { forum_username, forum_signature };

std::string_view to_string(RecordSource s);

struct HarvestRecord {
  RecordSource source = RecordSource::forum_username;
  std::string forum;
  std::string raw_value;
  std::optional<std::string> shop_handle;
  std::string page_url;

  friend bool operator==(const HarvestRecord&, const HarvestRecord&) = default;
};

/// Link structure of one forum. A page is followed when its absolute URL matches the
/// board or thread pattern and starts with one of `allowed_prefixes` (all if empty).
struct ForumRules {
  std::string forum;
  std::string seed_url;
  std::vector<std::string> allowed_prefixes;
  std::string board_pattern = "/forums/";
  std::string thread_pattern = "/threads/";
  std::string post_class = "post";
  std::string username_class = "username";
  std::string signature_class = "signature";
};

struct CrawlLimits {
  std::size_t max_pages = 10000;
  std::size_t max_depth = 32;
  std::chrono::milliseconds min_delay{0};  ///< per host, between request starts
  std::size_t workers = 1;
};

struct SkippedPage {
  std::string url;
  std::string reason;
};

struct CrawlResult {
  std::vector<HarvestRecord> records;
  std::vector<std::string> fetched;  ///< in processing order
  std::vector<SkippedPage> skipped;
  std::vector<std::string> diagnostics;
};

/// Breadth-first crawl from the seed; each level is visited in lexicographic URL order
/// and no URL is fetched twice. A seed failure throws TransportError; later failures
/// land in `skipped`.
CrawlResult crawl_forum(const ForumRules& rules, Fetcher& fetcher, const CrawlLimits& limits,
                        const HandleGrammar& grammar = HandleGrammar{}, const MarketplacePattern& market = {});

/// Username and signature records of the posts on one page, in document order.
std::vector<HarvestRecord> extract_post_records(const HtmlNode& page, const ForumRules& rules, std::string_view page_url,
                                                const HandleGrammar& grammar, const MarketplacePattern& market,
                                                std::vector<std::string>* diagnostics = nullptr);

}  // namespace shopscope::harvest
