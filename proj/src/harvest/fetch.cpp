#include "shopscope/harvest/fetch.hpp"

#include <json.hpp>

#include "shopscope/error.hpp"
#include "shopscope/harvest/url.hpp"

namespace shopscope::harvest {

using nlohmann::json;

void check_response(const FetchResponse& response, std::size_t body_cap) {
  if (!is_absolute_url(response.url)) throw TransportError("response url is not absolute: " + response.url);
  if (response.status < 100 || response.status > 599)
    throw TransportError("invalid HTTP status " + std::to_string(response.status) + " for " + response.url);
  if (response.body.size() > body_cap)
    throw TransportError("body of " + response.url + " exceeds cap of " + std::to_string(body_cap) + " bytes");
}

std::string FixtureStore::file_name_for(const std::string& url) { return sha256_hex(url).substr(0, 24) + ".body"; }

FixtureStore FixtureStore::load(const std::filesystem::path& dir) {
  const auto index_path = dir / "index.json";
  if (!std::filesystem::exists(index_path)) throw DataError("fixture index missing: " + index_path.string());
  FixtureStore store(dir);
  json index;
  try {
    index = json::parse(read_file(index_path));
  } catch (const json::exception& e) {
    throw DataError(index_path.string() + ": " + e.what());
  }
  if (index.value("version", 0) != 1) throw DataError(index_path.string() + ": unsupported fixture index version");
  std::size_t line = 0;
  for (const auto& item : index.at("entries")) {
    ++line;
    try {
      Entry entry;
      const auto url = item.at("url").get<std::string>();
      entry.file = item.at("file").get<std::string>();
      entry.status = item.value("status", 200);
      entry.headers = item.value("headers", std::map<std::string, std::string>{});
      const auto ts = parse_utc(item.value("fetched_at", std::string{"1970-01-01T00:00:00Z"}));
      if (!ts) throw DataError("bad fetched_at");
      entry.fetched_at = *ts;
      entry.body = read_file(dir / entry.file);
      store.entries_.emplace(url, std::move(entry));
    } catch (const json::exception& e) {
      throw DataError(index_path.string(), line, std::string("entry: ") + e.what());
    }
  }
  return store;
}

std::optional<FetchResponse> FixtureStore::find(const std::string& url) const {
  const auto it = entries_.find(url);
  if (it == entries_.end()) return std::nullopt;
  return FetchResponse{it->first, it->second.status, it->second.headers, it->second.body, it->second.fetched_at};
}

void FixtureStore::add(const FetchResponse& response) {
  Entry entry{file_name_for(response.url), response.status, response.headers, response.fetched_at, response.body};
  entries_.insert_or_assign(response.url, std::move(entry));
}

void FixtureStore::save() const {
  json entries = json::array();
  for (const auto& [url, entry] : entries_) {
    atomic_write(dir_ / entry.file, entry.body);
    json item{{"url", url}, {"file", entry.file}, {"status", entry.status}, {"fetched_at", format_utc(entry.fetched_at)}};
    if (!entry.headers.empty()) item["headers"] = entry.headers;
    entries.push_back(std::move(item));
  }
  atomic_write(dir_ / "index.json", json{{"version", 1}, {"entries", entries}}.dump(2) + "\n");
}

FixtureFetcher::FixtureFetcher(FixtureStore store, std::size_t body_cap)
    : store_(std::move(store)), body_cap_(body_cap) {}

FetchResponse FixtureFetcher::fetch(const FetchRequest& request) {
  {
    std::lock_guard lock(mutex_);
    requested_.push_back(request.url);
  }
  auto response = store_.find(request.url);
  if (!response) throw TransportError("no recorded response for " + request.url);
  check_response(*response, body_cap_);
  return *std::move(response);
}

std::vector<std::string> FixtureFetcher::requested_urls() const {
  std::lock_guard lock(mutex_);
  return requested_;
}

FetchResponse RecordingFetcher::fetch(const FetchRequest& request) {
  auto response = inner_.fetch(request);
  std::lock_guard lock(mutex_);
  store_.add(response);
  return response;
}

}  // namespace shopscope::harvest
