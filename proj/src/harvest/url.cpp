#include "shopscope/harvest/url.hpp"

#include <vector>

#include "shopscope/util.hpp"

namespace shopscope::harvest {

namespace {

std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  const bool trailing_slash = path.ends_with('/') || path.ends_with("/.") || path.ends_with("/..");
  while (pos <= path.size()) {
    const auto next = path.find('/', pos);
    const auto seg = path.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
    } else if (!seg.empty() && seg != ".") {
      out.push_back(seg);
    }
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  std::string result;
  for (auto seg : out) {
    result += '/';
    result += seg;
  }
  if (result.empty() || (trailing_slash && !out.empty())) result += '/';
  return result;
}

std::string_view strip_fragment(std::string_view s) {
  const auto hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

}  // namespace

std::string Url::str() const {
  std::string out = scheme + "://" + authority() + path;
  if (!query.empty()) out += "?" + query;
  return out;
}

std::optional<Url> parse_url(std::string_view text) {
  const std::string trimmed = trim(text);
  std::string_view s = strip_fragment(trimmed);
  const auto colon = s.find("://");
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  Url url;
  url.scheme = ascii_lower(s.substr(0, colon));
  if (url.scheme != "http" && url.scheme != "https") return std::nullopt;
  s.remove_prefix(colon + 3);
  const auto auth_end = s.find_first_of("/?");
  std::string_view authority = s.substr(0, auth_end);
  s = auth_end == std::string_view::npos ? std::string_view{} : s.substr(auth_end);
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
  if (const auto pc = authority.rfind(':'); pc != std::string_view::npos) {
    url.port = std::string(authority.substr(pc + 1));
    authority = authority.substr(0, pc);
  }
  url.host = ascii_lower(authority);
  if (url.host.empty()) return std::nullopt;
  if ((url.scheme == "http" && url.port == "80") || (url.scheme == "https" && url.port == "443")) url.port.clear();
  const auto q = s.find('?');
  const std::string_view path = s.substr(0, q);
  url.path = remove_dot_segments(path.empty() ? std::string_view{"/"} : path);
  if (q != std::string_view::npos) url.query = std::string(s.substr(q + 1));
  return url;
}

bool is_absolute_url(std::string_view text) { return parse_url(text).has_value(); }

std::optional<std::string> resolve_url(std::string_view base, std::string_view reference) {
  const auto base_url = parse_url(base);
  if (!base_url) return std::nullopt;
  const std::string ref_owned = trim(reference);
  std::string_view ref = strip_fragment(ref_owned);
  if (ref.empty()) return base_url->str();
  if (ref.find("://") != std::string_view::npos) {
    const auto abs = parse_url(ref);
    return abs ? std::optional(abs->str()) : std::nullopt;
  }
  if (ref.starts_with("//")) {
    const auto abs = parse_url(base_url->scheme + ":" + std::string(ref));
    return abs ? std::optional(abs->str()) : std::nullopt;
  }
  // mailto:, javascript:, etc.
  if (const auto colon = ref.find(':'); colon != std::string_view::npos && ref.find('/') > colon) return std::nullopt;

  Url out = *base_url;
  const auto q = ref.find('?');
  const std::string_view ref_path = ref.substr(0, q);
  out.query = q == std::string_view::npos ? std::string{} : std::string(ref.substr(q + 1));
  if (ref_path.empty()) {
    if (q == std::string_view::npos) out.query = base_url->query;
  } else if (ref_path.front() == '/') {
    out.path = remove_dot_segments(ref_path);
  } else {
    const auto dir_end = base_url->path.rfind('/');
    const std::string merged = base_url->path.substr(0, dir_end + 1) + std::string(ref_path);
    out.path = remove_dot_segments(merged);
  }
  return out.str();
}

}  // namespace shopscope::harvest
