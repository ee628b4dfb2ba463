#include "shopscope/harvest/harvest.hpp"

#include <algorithm>
#include <json.hpp>
#include <map>
#include <set>
#include <unordered_set>

#include "shopscope/error.hpp"

namespace shopscope::harvest {

std::vector<std::string> candidate_handles(const std::vector<HarvestRecord>& records) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (r.shop_handle && seen.insert(*r.shop_handle).second) out.push_back(*r.shop_handle);
  }
  return out;
}

HarvestSummary summarize(const std::vector<HarvestRecord>& records, const ValidationResult& validation) {
  const std::set<std::string> valid(validation.valid.begin(), validation.valid.end());
  const std::set<std::string> unknown(validation.unknown.begin(), validation.unknown.end());

  std::vector<std::string> forums;
  std::map<std::pair<std::string, RecordSource>, std::set<std::string>> per_row;
  std::set<std::string> all;
  HarvestSummary summary;
  for (const auto& r : records) {
    if (std::find(forums.begin(), forums.end(), r.forum) == forums.end()) forums.push_back(r.forum);
    if (!r.shop_handle) {
      ++summary.without_handle;
      continue;
    }
    per_row[{r.forum, r.source}].insert(*r.shop_handle);
    all.insert(*r.shop_handle);
  }
  for (const auto& forum : forums) {
    for (const auto source : {RecordSource::forum_username, RecordSource::forum_signature}) {
      SummaryRow row{forum, source};
      if (const auto it = per_row.find({forum, source}); it != per_row.end()) {
        row.collected = it->second.size();
        row.valid = std::count_if(it->second.begin(), it->second.end(), [&](const auto& h) { return valid.contains(h); });
        row.unknown = std::count_if(it->second.begin(), it->second.end(), [&](const auto& h) { return unknown.contains(h); });
      }
      summary.rows.push_back(row);
    }
  }
  summary.collected_unique = all.size();
  summary.valid_unique = std::count_if(all.begin(), all.end(), [&](const auto& h) { return valid.contains(h); });
  summary.unknown_unique = std::count_if(all.begin(), all.end(), [&](const auto& h) { return unknown.contains(h); });
  return summary;
}

std::string HarvestSummary::to_tsv() const {
  std::string out = "source\tcollected\tvalid\n";
  for (const auto& row : rows) {
    out += row.forum + " - " + std::string(to_string(row.source)) + "\t" + std::to_string(row.collected) + "\t" +
           std::to_string(row.valid) + "\n";
  }
  out += "Total (unique)\t" + std::to_string(collected_unique) + "\t" + std::to_string(valid_unique) + "\n";
  return out;
}

HarvestOutput run_harvest(const HarvestOptions& options, Fetcher& fetcher, ShopClient& client) {
  HarvestOutput out;
  for (const auto& forum : options.forums) {
    auto crawl = crawl_forum(forum, fetcher, options.limits, options.grammar, options.market);
    std::move(crawl.records.begin(), crawl.records.end(), std::back_inserter(out.records));
    std::move(crawl.skipped.begin(), crawl.skipped.end(), std::back_inserter(out.skipped_pages));
    std::move(crawl.diagnostics.begin(), crawl.diagnostics.end(), std::back_inserter(out.diagnostics));
  }
  const auto handles = candidate_handles(out.records);
  out.validation = validate_shops(handles, client, options.retry);
  out.summary = summarize(out.records, out.validation);
  for (const auto& handle : out.validation.valid) {
    try {
      auto fetched = fetch_shop(handle, client, options.retry);
      out.malformed_products += fetched.malformed;
      std::move(fetched.warnings.begin(), fetched.warnings.end(), std::back_inserter(out.diagnostics));
      out.dataset.shops.push_back(std::move(fetched.shop));
    } catch (const ShopGoneError& e) {
      out.gone.push_back(handle);
      out.diagnostics.push_back(e.what());
    } catch (const TransientError& e) {
      out.gone.push_back(handle);
      out.diagnostics.push_back(handle + ": product fetch failed after retries: " + e.what());
    }
  }
  return out;
}

std::string records_to_jsonl(const std::vector<HarvestRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::json line{{"source", r.source == RecordSource::forum_username ? "forum_username" : "forum_signature"},
                        {"forum", r.forum},
                        {"raw_value", r.raw_value},
                        {"shop_handle", r.shop_handle ? nlohmann::json(*r.shop_handle) : nlohmann::json(nullptr)},
                        {"page_url", r.page_url}};
    out += line.dump() + "\n";
  }
  return out;
}

}  // namespace shopscope::harvest
