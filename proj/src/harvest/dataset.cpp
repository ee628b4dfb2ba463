#include "shopscope/harvest/dataset.hpp"

#include <json.hpp>
#include <numeric>
#include <unordered_set>

#include "shopscope/error.hpp"

namespace shopscope {

using nlohmann::json;

std::string_view to_string(Category c) {
  switch (c) {
    case Category::account: return "account";
    case Category::service: return "service";
    case Category::file: return "file";
  }
  return "account";
}

std::optional<Category> parse_category(std::string_view text) {
  const std::string lowered = ascii_lower(trim(text));
  if (lowered == "account") return Category::account;
  if (lowered == "service") return Category::service;
  if (lowered == "file") return Category::file;
  return std::nullopt;
}

std::size_t ShopDataset::product_count() const {
  return std::accumulate(shops.begin(), shops.end(), std::size_t{0},
                         [](std::size_t acc, const Shop& s) { return acc + s.products.size(); });
}

void validate(const ShopDataset& dataset) {
  std::unordered_set<std::string> handles;
  for (const auto& shop : dataset.shops) {
    if (shop.handle.empty()) throw DataError("shop with empty handle");
    if (!handles.insert(shop.handle).second) throw DataError("duplicate shop handle '" + shop.handle + "'");
    for (const auto& p : shop.products) {
      if (trim(p.title).empty()) throw DataError("shop '" + shop.handle + "' has a product with an empty title");
      if (!(p.price_usd >= 0.0)) throw DataError("shop '" + shop.handle + "' has a negative price");
    }
  }
}

std::string to_jsonl(const ShopDataset& dataset) {
  std::string out;
  for (const auto& shop : dataset.shops) {
    json products = json::array();
    for (const auto& p : shop.products) {
      products.push_back({{"title", p.title},
                          {"price_usd", p.price_usd},
                          {"category", to_string(p.category)},
                          {"metadata", p.metadata}});
    }
    json line{{"handle", shop.handle}, {"retrieved_at", format_utc(shop.retrieved_at)}, {"products", products}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

ShopDataset parse_jsonl(std::string_view text, const std::string& source_name) {
  ShopDataset dataset;
  std::unordered_set<std::string> handles;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    const std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json obj = json::parse(line);
      Shop shop;
      shop.handle = obj.at("handle").get<std::string>();
      if (shop.handle.empty()) throw DataError(source_name, line_no, "empty handle");
      if (!handles.insert(shop.handle).second) throw DataError(source_name, line_no, "duplicate handle '" + shop.handle + "'");
      const auto ts = parse_utc(obj.at("retrieved_at").get<std::string>());
      if (!ts) throw DataError(source_name, line_no, "retrieved_at is not an ISO-8601 UTC timestamp");
      shop.retrieved_at = *ts;
      for (const auto& item : obj.at("products")) {
        Product p;
        p.title = item.at("title").get<std::string>();
        if (trim(p.title).empty()) throw DataError(source_name, line_no, "empty product title");
        p.price_usd = item.at("price_usd").get<double>();
        if (!(p.price_usd >= 0.0)) throw DataError(source_name, line_no, "negative price");
        const auto cat = parse_category(item.at("category").get<std::string>());
        if (!cat) throw DataError(source_name, line_no, "unknown category");
        p.category = *cat;
        p.metadata = item.value("metadata", std::map<std::string, std::string>{});
        shop.products.push_back(std::move(p));
      }
      dataset.shops.push_back(std::move(shop));
    } catch (const json::exception& e) {
      throw DataError(source_name, line_no, e.what());
    }
  }
  return dataset;
}

void write_dataset(const std::filesystem::path& path, const ShopDataset& dataset) {
  atomic_write(path, to_jsonl(dataset));
}

ShopDataset read_dataset(const std::filesystem::path& path) { return parse_jsonl(read_file(path), path.string()); }

}  // namespace shopscope
