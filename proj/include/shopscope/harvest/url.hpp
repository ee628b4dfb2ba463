#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace shopscope::harvest {

/// Minimal absolute URL: scheme://host[:port]/path[?query]. Fragments are dropped.
struct Url {
  std::string scheme;
  std::string host;
  std::string port;
  std::string path = "/";
  std::string query;

  std::string str() const;
  std::string authority() const { return port.empty() ? host : host + ":" + port; }
};

std::optional<Url> parse_url(std::string_view text);
bool is_absolute_url(std::string_view text);

/// RFC 3986 reference resolution (the subset forums emit: absolute, scheme-relative,
/// absolute-path, relative-path, query-only). Returns nullopt for non-http(s) targets.
std::optional<std::string> resolve_url(std::string_view base, std::string_view reference);

}  // namespace shopscope::harvest
