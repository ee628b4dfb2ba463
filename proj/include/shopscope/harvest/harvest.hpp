#pragma once

#include <string>
#include <vector>

#include "shopscope/harvest/crawl.hpp"
#include "shopscope/harvest/dataset.hpp"
#include "shopscope/harvest/shop_client.hpp"

namespace shopscope::harvest {

struct SummaryRow {
  std::string forum;
  RecordSource source = RecordSource::forum_username;
  std::size_t collected = 0;  ///< distinct handles seen in this row
  std::size_t valid = 0;      ///< of those, handles that resolved to a shop
  std::size_t unknown = 0;
};

/// Collected vs. valid handles per (forum, source), plus deduplicated totals.
struct HarvestSummary {
  std::vector<SummaryRow> rows;
  std::size_t collected_unique = 0;
  std::size_t valid_unique = 0;
  std::size_t unknown_unique = 0;
  std::size_t without_handle = 0;  ///< records whose raw value is not a valid handle

  /// Tab-separated: source, collected, valid; last row is "Total (unique)".
  std::string to_tsv() const;
};

HarvestSummary summarize(const std::vector<HarvestRecord>& records, const ValidationResult& validation);

/// Handles from records in first-discovery order, deduplicated.
std::vector<std::string> candidate_handles(const std::vector<HarvestRecord>& records);

struct HarvestOptions {
  std::vector<ForumRules> forums;
  CrawlLimits limits;
  RetryPolicy retry;
  HandleGrammar grammar;
  MarketplacePattern market;
};

struct HarvestOutput {
  std::vector<HarvestRecord> records;
  ValidationResult validation;
  HarvestSummary summary;
  ShopDataset dataset;
  std::vector<std::string> gone;
  std::vector<SkippedPage> skipped_pages;
  std::size_t malformed_products = 0;
  std::vector<std::string> diagnostics;
};

/// Crawl every forum, validate the discovered handles, then fetch each valid shop.
HarvestOutput run_harvest(const HarvestOptions& options, Fetcher& fetcher, ShopClient& client);

/// One JSON object per record line.
std::string records_to_jsonl(const std::vector<HarvestRecord>& records);

}  // namespace shopscope::harvest
