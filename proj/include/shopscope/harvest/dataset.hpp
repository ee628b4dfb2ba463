#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shopscope/util.hpp"

namespace shopscope {

enum class Category { account, service, file };

inline constexpr std::array kCategories{Category::account, Category::service, Category::file};

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view text);

struct Product {
  std::string title;
  double price_usd = 0.0;
  Category category = Category::account;
  std::map<std::string, std::string> metadata;
};

struct Shop {
  std::string handle;
  std::vector<Product> products;
  Timestamp retrieved_at{};
};

/// Normalized shops in discovery order. Handles are unique.
struct ShopDataset {
  std::vector<Shop> shops;

  std::size_t product_count() const;
  bool empty() const { return shops.empty(); }
};

/// Throws DataError on duplicate handles, empty titles or negative prices.
void validate(const ShopDataset& dataset);

/// One JSON object per line: {"handle", "retrieved_at", "products": [{title, price_usd, category, metadata}]}.
std::string to_jsonl(const ShopDataset& dataset);
ShopDataset parse_jsonl(std::string_view text, const std::string& source_name = "<dataset>");
void write_dataset(const std::filesystem::path& path, const ShopDataset& dataset);
ShopDataset read_dataset(const std::filesystem::path& path);

}  // namespace shopscope
