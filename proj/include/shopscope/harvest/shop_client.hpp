#pragma once

#include <chrono>
#include <functional>
#include <json.hpp>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "shopscope/harvest/dataset.hpp"
#include "shopscope/harvest/fetch.hpp"

namespace shopscope::harvest {

enum class ShopStatus { exists, missing };

struct ProductPage {
  std::vector<nlohmann::json> items;  ///< raw entries, validated by fetch_shop
  Timestamp fetched_at{};
};

/// Marketplace API. `lookup` and `products` throw TransientError for retryable
/// failures; `products` throws ShopGoneError when the shop no longer exists.
/// Pages are numbered from 1; an empty page ends pagination.
class ShopClient {
 public:
  virtual ~ShopClient() = default;
  virtual ShopStatus lookup(const std::string& handle) = 0;
  virtual ProductPage products(const std::string& handle, int page) = 0;
};

/// Minimal paginated JSON contract over a Fetcher:
///   GET {base}/shops/{handle}                 200 exists, 404 missing
///   GET {base}/shops/{handle}/products?page=N  200 JSON array, 404 gone
/// 429 and 5xx responses and transport failures are transient.
class ApiShopClient : public ShopClient {
 public:
  ApiShopClient(Fetcher& fetcher, std::string base_url) : fetcher_(fetcher), base_(std::move(base_url)) {}
  ShopStatus lookup(const std::string& handle) override;
  ProductPage products(const std::string& handle, int page) override;

 private:
  FetchResponse get(const std::string& url);
  Fetcher& fetcher_;
  std::string base_;
};

/// In-memory client: shops map to their product pages. `transient_failures[h]` makes the
/// first n calls for h fail transiently; `vanish_on_fetch` makes product pages report gone.
class StaticShopClient : public ShopClient {
 public:
  std::map<std::string, std::vector<std::vector<nlohmann::json>>> shops;
  std::map<std::string, int> transient_failures;
  std::set<std::string> vanish_on_fetch;
  Timestamp now{};
  int calls = 0;

  ShopStatus lookup(const std::string& handle) override;
  ProductPage products(const std::string& handle, int page) override;

 private:
  void maybe_fail(const std::string& handle);
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{200};
  std::function<void(std::chrono::milliseconds)> sleep;  ///< defaults to sleep_for
};

struct ValidationResult {
  std::vector<std::string> valid;
  std::vector<std::string> invalid;
  std::vector<std::string> unknown;  ///< still failing after all retries
};

/// Partitions the distinct handles (first-occurrence order) by shop existence.
ValidationResult validate_shops(std::span<const std::string> handles, ShopClient& client,
                                const RetryPolicy& retry = {});

struct FetchedShop {
  Shop shop;
  std::vector<std::string> warnings;
  std::size_t malformed = 0;
};

/// Pulls every product page. Unknown categories become `account` with a warning;
/// malformed entries are skipped and counted. Throws ShopGoneError.
FetchedShop fetch_shop(const std::string& handle, ShopClient& client, const RetryPolicy& retry = {});

/// Converts one raw API entry; nullopt (with a reason in `error`) when malformed.
std::optional<Product> parse_product(const nlohmann::json& item, std::string& error, std::string& warning);

}  // namespace shopscope::harvest
