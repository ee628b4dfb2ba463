#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shopscope/harvest/dataset.hpp"

namespace shopscope::stats {

struct CategoryCounts {
  std::map<Category, std::int64_t> counts{{Category::account, 0}, {Category::service, 0}, {Category::file, 0}};
  std::int64_t total = 0;

  std::int64_t operator[](Category c) const { return counts.at(c); }
};

CategoryCounts category_counts(const ShopDataset& dataset);

struct CdfPoint {
  double x = 0.0;
  double f = 0.0;
};

/// Right-continuous step function over the sorted distinct values; the last point has F = 1.
std::vector<CdfPoint> empirical_cdf(std::vector<double> values);

std::vector<double> prices(const ShopDataset& dataset);
std::vector<double> items_per_shop(const ShopDataset& dataset);

struct LognormalFit {
  double mu = 0.0;
  double sigma = 0.0;
  std::int64_t n_used = 0;
  std::int64_t n_excluded = 0;
};

/// Maximum-likelihood fit on log prices: mu = mean(ln p), sigma = population standard
/// deviation. Non-positive prices are excluded and counted. Throws
/// InsufficientDataError with fewer than 2 positive prices.
LognormalFit fit_lognormal(const std::vector<double>& prices);

struct PriceSummary {
  double median = 0.0;  ///< lower middle for even counts
  double max = 0.0;
  double band_fraction = 0.0;  ///< share of prices in [band_low, band_high]
  double band_low = 1.0;
  double band_high = 10.0;
  std::int64_t count = 0;
};

PriceSummary price_stats(const std::vector<double>& prices, double band_low = 1.0, double band_high = 10.0);
PriceSummary price_stats(const ShopDataset& dataset);

std::vector<double> default_bin_edges();

struct PriceBin {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();  ///< exclusive
  std::map<Category, std::int64_t> counts{{Category::account, 0}, {Category::service, 0}, {Category::file, 0}};
  std::int64_t total = 0;

  double fraction(Category c) const { return total == 0 ? 0.0 : static_cast<double>(counts.at(c)) / total; }
};

struct PriceBinReport {
  std::vector<double> edges;
  std::vector<PriceBin> bins;
};

/// Half-open bins [e_i, e_{i+1}) plus a final [e_last, inf). Edges must be strictly
/// ascending and start at or below 0 so every product lands in exactly one bin.
PriceBinReport price_bins(const ShopDataset& dataset, const std::vector<double>& edges = default_bin_edges());

struct FalseProductRules {
  double price_threshold = 500.0;
  std::vector<std::string> keywords{"terms of service", "discord", "telegram", "read before buying", "contact",
                                    "support"};
  /// Words that carry no product information; a service title made only of these is flagged.
  std::vector<std::string> filler_terms{"buy", "dont", "don", "do", "not", "me", "here", "click", "info",
                                        "information", "important", "notice", "note", "please", "read", "service",
                                        "services", "shop", "store", "join", "server", "link", "links", "new",
                                        "warranty", "general", "feedback", "vouch", "vouches", "tos"};
};

struct FlaggedProduct {
  std::string shop_handle;
  Product product;
  std::string rule;  ///< "keyword:<kw>" or "service-no-information"
};

/// Products at or above the threshold whose titles contain a keyword phrase, or
/// services at or above the threshold whose titles carry no information.
std::vector<FlaggedProduct> flag_false_products(const ShopDataset& dataset, const FalseProductRules& rules = {});

}  // namespace shopscope::stats
