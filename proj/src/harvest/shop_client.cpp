#include "shopscope/harvest/shop_client.hpp"

#include <charconv>
#include <thread>
#include <unordered_set>

#include "shopscope/error.hpp"

namespace shopscope::harvest {

using nlohmann::json;

namespace {

bool transient_status(int status) { return status == 429 || status >= 500; }

template <typename Fn>
auto with_retry(const RetryPolicy& retry, Fn&& fn) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const TransientError&) {
      if (attempt >= retry.max_retries) throw;
      const auto delay = retry.base_delay * (1LL << attempt);
      if (retry.sleep) {
        retry.sleep(delay);
      } else {
        std::this_thread::sleep_for(delay);
      }
    }
  }
}

std::optional<double> parse_price(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) return std::nullopt;
  std::string s = trim(v.get<std::string>());
  if (!s.empty() && s.front() == '$') s.erase(0, 1);
  double out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return out;
}

}  // namespace

FetchResponse ApiShopClient::get(const std::string& url) {
  FetchResponse response;
  try {
    response = fetcher_.fetch(FetchRequest{url, {{"Accept", "application/json"}}});
  } catch (const TransportError& e) {
    throw TransientError(e.what());
  }
  if (transient_status(response.status)) throw TransientError("HTTP " + std::to_string(response.status) + " for " + url);
  return response;
}

ShopStatus ApiShopClient::lookup(const std::string& handle) {
  const auto response = get(base_ + "/shops/" + handle);
  return response.status >= 200 && response.status < 300 ? ShopStatus::exists : ShopStatus::missing;
}

ProductPage ApiShopClient::products(const std::string& handle, int page) {
  const auto url = base_ + "/shops/" + handle + "/products?page=" + std::to_string(page);
  const auto response = get(url);
  if (response.status == 404 || response.status == 410) throw ShopGoneError(handle);
  if (response.status < 200 || response.status >= 300)
    throw DataError("unexpected HTTP " + std::to_string(response.status) + " for " + url);
  ProductPage out;
  out.fetched_at = response.fetched_at;
  json body;
  try {
    body = json::parse(response.body);
  } catch (const json::exception& e) {
    throw DataError(url + ": " + e.what());
  }
  if (!body.is_array()) throw DataError(url + ": product page is not a JSON array");
  out.items.assign(body.begin(), body.end());
  return out;
}

void StaticShopClient::maybe_fail(const std::string& handle) {
  ++calls;
  if (auto it = transient_failures.find(handle); it != transient_failures.end() && it->second > 0) {
    --it->second;
    throw TransientError("simulated transient failure for " + handle);
  }
}

ShopStatus StaticShopClient::lookup(const std::string& handle) {
  maybe_fail(handle);
  return shops.contains(handle) ? ShopStatus::exists : ShopStatus::missing;
}

ProductPage StaticShopClient::products(const std::string& handle, int page) {
  maybe_fail(handle);
  const auto it = shops.find(handle);
  if (it == shops.end() || vanish_on_fetch.contains(handle)) throw ShopGoneError(handle);
  ProductPage out;
  out.fetched_at = now;
  if (page >= 1 && static_cast<std::size_t>(page) <= it->second.size()) out.items = it->second[page - 1];
  return out;
}

ValidationResult validate_shops(std::span<const std::string> handles, ShopClient& client, const RetryPolicy& retry) {
  ValidationResult result;
  std::unordered_set<std::string> seen;
  for (const auto& handle : handles) {
    if (!seen.insert(handle).second) continue;
    try {
      const auto status = with_retry(retry, [&] { return client.lookup(handle); });
      (status == ShopStatus::exists ? result.valid : result.invalid).push_back(handle);
    } catch (const TransientError&) {
      result.unknown.push_back(handle);
    }
  }
  return result;
}

std::optional<Product> parse_product(const json& item, std::string& error, std::string& warning) {
  error.clear();
  warning.clear();
  if (!item.is_object()) {
    error = "entry is not an object";
    return std::nullopt;
  }
  Product p;
  const auto title = item.find("title");
  if (title == item.end() || !title->is_string() || trim(title->get<std::string>()).empty()) {
    error = "missing or empty title";
    return std::nullopt;
  }
  p.title = trim(title->get<std::string>());
  const auto price_field = item.find("price");
  const auto price = price_field == item.end() ? std::nullopt : parse_price(*price_field);
  if (!price || !(*price >= 0.0)) {
    error = "missing, non-numeric or negative price for '" + p.title + "'";
    return std::nullopt;
  }
  p.price_usd = *price;
  if (const auto type = item.find("type"); type != item.end() && type->is_string()) {
    if (const auto cat = parse_category(type->get<std::string>())) {
      p.category = *cat;
    } else {
      warning = "unknown category '" + type->get<std::string>() + "' for '" + p.title + "' mapped to account";
    }
  }
  for (const auto& [key, value] : item.items()) {
    if (key == "title" || key == "price" || key == "type") continue;
    p.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
  }
  return p;
}

FetchedShop fetch_shop(const std::string& handle, ShopClient& client, const RetryPolicy& retry) {
  FetchedShop out;
  out.shop.handle = handle;
  for (int page = 1;; ++page) {
    const auto batch = with_retry(retry, [&] { return client.products(handle, page); });
    if (page == 1 || batch.fetched_at > out.shop.retrieved_at) out.shop.retrieved_at = batch.fetched_at;
    if (batch.items.empty()) break;
    for (const auto& item : batch.items) {
      std::string error, warning;
      auto product = parse_product(item, error, warning);
      if (!product) {
        ++out.malformed;
        out.warnings.push_back(handle + ": skipped malformed product: " + error);
        continue;
      }
      if (!warning.empty()) out.warnings.push_back(handle + ": " + warning);
      out.shop.products.push_back(std::move(*product));
    }
  }
  return out;
}

}  // namespace shopscope::harvest
