#include "shopscope/harvest/signature.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "shopscope/harvest/url.hpp"
#include "shopscope/util.hpp"

namespace shopscope::harvest {

HandleGrammar::HandleGrammar(const std::string& pattern)
    : pattern_(pattern), re_(pattern, std::regex::ECMAScript | std::regex::optimize) {}

std::optional<std::string> HandleGrammar::normalize(std::string_view raw) const {
  std::string handle = trim(raw);
  if (!handle.empty() && handle.front() == '@') handle.erase(0, 1);
  handle = ascii_lower(handle);
  if (handle.empty() || !matches(handle)) return std::nullopt;
  return handle;
}

bool HandleGrammar::matches(std::string_view handle) const {
  return !handle.empty() && std::regex_match(handle.begin(), handle.end(), re_);
}

std::optional<std::string> MarketplacePattern::handle_segment(std::string_view text) const {
  std::string candidate(text);
  if (candidate.find("://") == std::string::npos) candidate = "https://" + candidate;
  const auto url = parse_url(candidate);
  if (!url || std::find(hosts.begin(), hosts.end(), url->host) == hosts.end()) return std::nullopt;
  std::string_view path = url->path;
  path.remove_prefix(1);
  const std::string segment(path.substr(0, path.find('/')));
  if (segment.empty()) return std::nullopt;
  const std::string lowered = ascii_lower(segment);
  if (std::find(reserved_paths.begin(), reserved_paths.end(), lowered) != reserved_paths.end()) return std::nullopt;
  return segment;
}

namespace {

class Collector {
 public:
  Collector(const HandleGrammar& grammar, const MarketplacePattern& market, SignatureLinks& out)
      : grammar_(grammar), market_(market), out_(out) {}

  void consider(std::string_view raw) {
    const auto segment = market_.handle_segment(raw);
    if (!segment) return;
    const auto handle = grammar_.normalize(*segment);
    if (!handle) {
      out_.diagnostics.push_back("marketplace link with malformed handle: " + std::string(raw));
      return;
    }
    if (seen_.insert(*handle).second) {
      out_.handles.push_back(*handle);
      out_.raw_values.emplace_back(raw);
    }
  }

  void scan_text(std::string_view text) {
    // Matches from every host, taken in document order.
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (const auto& host : market_.hosts) {
      std::size_t pos = 0;
      while ((pos = text.find(host, pos)) != std::string_view::npos) {
        // Require a boundary before the host so "notshoppy.gg" does not match.
        std::size_t start = pos;
        const bool boundary = pos == 0 || !(std::isalnum(static_cast<unsigned char>(text[pos - 1])) || text[pos - 1] == '.' ||
                                            text[pos - 1] == '-');
        if (pos >= 3 && text.substr(pos - 3, 3) == "://") {
          start = text.rfind(' ', pos);
          start = start == std::string_view::npos ? 0 : start + 1;
        } else if (!boundary) {
          pos += host.size();
          continue;
        }
        std::size_t end = pos + host.size();
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])) && text[end] != '"' &&
               text[end] != '<' && text[end] != ')' && text[end] != ']' && text[end] != ',')
          ++end;
        spans.emplace_back(start, end);
        pos = end;
      }
    }
    std::sort(spans.begin(), spans.end());
    std::size_t covered = 0;
    for (const auto& [start, end] : spans) {
      if (start < covered) continue;
      consider(text.substr(start, end - start));
      covered = end;
    }
  }

 private:
  const HandleGrammar& grammar_;
  const MarketplacePattern& market_;
  SignatureLinks& out_;
  std::unordered_set<std::string> seen_;
};

void walk(const HtmlNode& node, Collector& collector) {
  if (node.is_text()) {
    collector.scan_text(node.text);
    return;
  }
  if (node.tag == "script" || node.tag == "style") return;
  if (node.tag == "a") {
    const auto href = node.attribute("href");
    if (!href.empty()) collector.consider(href);
  }
  for (const auto& child : node.children) walk(child, collector);
}

}  // namespace

SignatureLinks extract_signature_links(const HtmlNode& node, const HandleGrammar& grammar,
                                       const MarketplacePattern& market) {
  SignatureLinks out;
  Collector collector(grammar, market, out);
  walk(node, collector);
  return out;
}

SignatureLinks extract_signature_links(std::string_view html, const HandleGrammar& grammar,
                                       const MarketplacePattern& market) {
  const HtmlDocument doc = parse_html(html);
  if (!doc.parsed) {
    SignatureLinks out;
    out.diagnostics = doc.diagnostics;
    return out;
  }
  return extract_signature_links(doc.root, grammar, market);
}

}  // namespace shopscope::harvest
