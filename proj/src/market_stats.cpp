#include "shopscope/market_stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "shopscope/error.hpp"
#include "shopscope/util.hpp"

namespace shopscope::stats {

CategoryCounts category_counts(const ShopDataset& dataset) {
  CategoryCounts out;
  for (const auto& shop : dataset.shops) {
    for (const auto& p : shop.products) {
      ++out.counts[p.category];
      ++out.total;
    }
  }
  return out;
}

std::vector<CdfPoint> empirical_cdf(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<CdfPoint> out;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    out.push_back({values[i], static_cast<double>(i + 1) / n});
  }
  if (!out.empty()) out.back().f = 1.0;
  return out;
}

std::vector<double> prices(const ShopDataset& dataset) {
  std::vector<double> out;
  for (const auto& shop : dataset.shops) {
    for (const auto& p : shop.products) out.push_back(p.price_usd);
  }
  return out;
}

std::vector<double> items_per_shop(const ShopDataset& dataset) {
  std::vector<double> out;
  for (const auto& shop : dataset.shops) out.push_back(static_cast<double>(shop.products.size()));
  return out;
}

LognormalFit fit_lognormal(const std::vector<double>& prices) {
  LognormalFit fit;
  std::vector<double> logs;
  logs.reserve(prices.size());
  for (const double p : prices) {
    if (p > 0.0) {
      logs.push_back(std::log(p));
    } else {
      ++fit.n_excluded;
    }
  }
  fit.n_used = static_cast<std::int64_t>(logs.size());
  if (logs.size() < 2) throw InsufficientDataError("lognormal fit needs at least 2 positive prices");
  double mean = 0.0;
  for (const double l : logs) mean += l;
  mean /= static_cast<double>(logs.size());
  double ss = 0.0;
  for (const double l : logs) ss += (l - mean) * (l - mean);
  fit.mu = mean;
  fit.sigma = std::sqrt(ss / static_cast<double>(logs.size()));
  return fit;
}

PriceSummary price_stats(const std::vector<double>& values, double band_low, double band_high) {
  PriceSummary s;
  s.band_low = band_low;
  s.band_high = band_high;
  s.count = static_cast<std::int64_t>(values.size());
  if (values.empty()) return s;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  s.median = sorted[(sorted.size() - 1) / 2];
  s.max = sorted.back();
  const auto in_band =
      std::count_if(sorted.begin(), sorted.end(), [&](double p) { return p >= band_low && p <= band_high; });
  s.band_fraction = static_cast<double>(in_band) / static_cast<double>(sorted.size());
  return s;
}

PriceSummary price_stats(const ShopDataset& dataset) { return price_stats(prices(dataset)); }

std::vector<double> default_bin_edges() { return {0, 1, 5, 10, 50, 100, 500}; }

PriceBinReport price_bins(const ShopDataset& dataset, const std::vector<double>& edges) {
  if (edges.empty()) throw ConfigError("price bins need at least one edge");
  if (edges.front() > 0.0) throw ConfigError("first price bin edge must be <= 0");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw ConfigError("price bin edges must be strictly ascending");
  }
  PriceBinReport report;
  report.edges = edges;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    PriceBin bin;
    bin.lower = edges[i];
    if (i + 1 < edges.size()) bin.upper = edges[i + 1];
    report.bins.push_back(bin);
  }
  for (const auto& shop : dataset.shops) {
    for (const auto& p : shop.products) {
      const auto it = std::upper_bound(edges.begin(), edges.end(), p.price_usd);
      auto& bin = report.bins[static_cast<std::size_t>(std::distance(edges.begin(), it)) - 1];
      ++bin.counts[p.category];
      ++bin.total;
    }
  }
  return report;
}

namespace {

/// Lowercase, every run of non-alphanumerics collapsed to one space, padded with spaces.
std::string normalize_phrase(std::string_view text) {
  std::string out = " ";
  for (const char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80) {
      out.push_back(static_cast<char>(std::tolower(u)));
    } else if (out.back() != ' ') {
      out.push_back(' ');
    }
  }
  if (out.back() != ' ') out.push_back(' ');
  return out;
}

bool no_information(std::string_view title, const std::vector<std::string>& filler) {
  const std::string norm = normalize_phrase(title);
  std::size_t pos = 1;
  while (pos < norm.size()) {
    const auto end = norm.find(' ', pos);
    const std::string word = norm.substr(pos, end - pos);
    const bool digits = std::all_of(word.begin(), word.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
    // Single letters are contraction fragments ("don't" -> "don t").
    if (word.size() > 1 && !digits && std::find(filler.begin(), filler.end(), word) == filler.end()) return false;
    pos = end + 1;
  }
  return true;
}

}  // namespace

std::vector<FlaggedProduct> flag_false_products(const ShopDataset& dataset, const FalseProductRules& rules) {
  std::vector<std::string> phrases;
  for (const auto& kw : rules.keywords) phrases.push_back(normalize_phrase(kw));
  std::vector<FlaggedProduct> out;
  for (const auto& shop : dataset.shops) {
    for (const auto& p : shop.products) {
      if (p.price_usd < rules.price_threshold) continue;
      const std::string title = normalize_phrase(p.title);
      std::string rule;
      for (std::size_t i = 0; i < phrases.size() && rule.empty(); ++i) {
        if (phrases[i].size() > 2 && title.find(phrases[i]) != std::string::npos) rule = "keyword:" + rules.keywords[i];
      }
      if (rule.empty() && p.category == Category::service && no_information(p.title, rules.filler_terms))
        rule = "service-no-information";
      if (!rule.empty()) out.push_back({shop.handle, p, rule});
    }
  }
  return out;
}

}  // namespace shopscope::stats
