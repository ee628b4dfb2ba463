#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "shopscope/util.hpp"

namespace shopscope::harvest {

inline constexpr std::size_t kDefaultBodyCap = 8u << 20;

/// GET request; the only method the harvester issues.
struct FetchRequest {
  std::string url;
  std::map<std::string, std::string> headers;
};

struct FetchResponse {
  std::string url;
  int status = 0;
  std::map<std::string, std::string> headers;
  std::string body;
  Timestamp fetched_at{};
};

/// Source of HTTP responses. Throws TransportError when no response can be produced;
/// HTTP error statuses are returned, not thrown. Implementations must be thread-safe.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual FetchResponse fetch(const FetchRequest& request) = 0;
};

/// Checks url/status/body-cap invariants; throws TransportError on violation.
void check_response(const FetchResponse& response, std::size_t body_cap);

/// Directory of recorded responses: one body file per URL (named by URL hash) plus an
/// `index.json` sidecar holding url, file, status, headers and fetched_at.
class FixtureStore {
 public:
  static FixtureStore load(const std::filesystem::path& dir);
  static std::string file_name_for(const std::string& url);

  explicit FixtureStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::optional<FetchResponse> find(const std::string& url) const;
  void add(const FetchResponse& response);
  /// Writes bodies and the index; the index lists entries sorted by URL.
  void save() const;
  std::size_t size() const { return entries_.size(); }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  struct Entry {
    std::string file;
    int status = 200;
    std::map<std::string, std::string> headers;
    Timestamp fetched_at{};
    std::string body;
  };
  std::filesystem::path dir_;
  std::map<std::string, Entry> entries_;
};

/// Replays a FixtureStore. Unrecorded URLs raise TransportError.
class FixtureFetcher : public Fetcher {
 public:
  explicit FixtureFetcher(FixtureStore store, std::size_t body_cap = kDefaultBodyCap);
  FetchResponse fetch(const FetchRequest& request) override;
  std::vector<std::string> requested_urls() const;

 private:
  FixtureStore store_;
  std::size_t body_cap_;
  mutable std::mutex mutex_;
  std::vector<std::string> requested_;
};

/// Live HTTP(S) GET over cpp-httplib. No cookies, no authentication.
class HttpFetcher : public Fetcher {
 public:
  struct Options {
    std::size_t body_cap = kDefaultBodyCap;
    int timeout_seconds = 30;
    std::string user_agent = "shopscope/1.0";
  };
  HttpFetcher();
  explicit HttpFetcher(Options options);
  FetchResponse fetch(const FetchRequest& request) override;

 private:
  Options options_;
};

/// Passes requests through to `inner` and records every response into `store`.
class RecordingFetcher : public Fetcher {
 public:
  RecordingFetcher(Fetcher& inner, FixtureStore& store) : inner_(inner), store_(store) {}
  FetchResponse fetch(const FetchRequest& request) override;

 private:
  Fetcher& inner_;
  FixtureStore& store_;
  std::mutex mutex_;
};

}  // namespace shopscope::harvest
