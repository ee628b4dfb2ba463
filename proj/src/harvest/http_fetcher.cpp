#include <httplib.h>

#include "shopscope/error.hpp"
#include "shopscope/harvest/fetch.hpp"
#include "shopscope/harvest/url.hpp"

namespace shopscope::harvest {

HttpFetcher::HttpFetcher() : HttpFetcher(Options{}) {}

HttpFetcher::HttpFetcher(Options options) : options_(std::move(options)) {}

FetchResponse HttpFetcher::fetch(const FetchRequest& request) {
  const auto url = parse_url(request.url);
  if (!url) throw TransportError("not an absolute http(s) url: " + request.url);

  httplib::Client client(url->scheme + "://" + url->authority());
  client.set_connection_timeout(options_.timeout_seconds, 0);
  client.set_read_timeout(options_.timeout_seconds, 0);
  client.set_follow_location(false);

  httplib::Headers headers{{"User-Agent", options_.user_agent}};
  for (const auto& [k, v] : request.headers) headers.emplace(k, v);

  std::string body;
  bool over_cap = false;
  const std::string target = url->query.empty() ? url->path : url->path + "?" + url->query;
  auto result = client.Get(target, headers, [&](const char* data, std::size_t len) {
    if (body.size() + len > options_.body_cap) {
      over_cap = true;
      return false;
    }
    body.append(data, len);
    return true;
  });
  if (over_cap) throw TransportError("body of " + request.url + " exceeds cap of " + std::to_string(options_.body_cap) + " bytes");
  if (!result) throw TransportError("GET " + request.url + " failed: " + httplib::to_string(result.error()));

  FetchResponse response;
  response.url = url->str();
  response.status = result->status;
  for (const auto& [k, v] : result->headers) response.headers[k] = v;
  response.body = std::move(body);
  response.fetched_at = utc_now();
  check_response(response, options_.body_cap);
  return response;
}

}  // namespace shopscope::harvest
