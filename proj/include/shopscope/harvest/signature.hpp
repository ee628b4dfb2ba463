#pragma once

#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "shopscope/harvest/html.hpp"

namespace shopscope::harvest {

/// Canonical shop-handle form: trimmed, leading '@' stripped, lowercased, and matching
/// the grammar (alphanumerics plus `._-` by default).
class HandleGrammar {
 public:
  explicit HandleGrammar(const std::string& pattern = "[a-z0-9._-]{1,64}");
  std::optional<std::string> normalize(std::string_view raw) const;
  bool matches(std::string_view handle) const;
  const std::string& pattern() const noexcept { return pattern_; }

 private:
  std::string pattern_;
  std::regex re_;
};

/// Which hosts count as the marketplace and which first path segments are site pages
/// rather than shops.
struct MarketplacePattern {
  std::vector<std::string> hosts{"shoppy.gg", "www.shoppy.gg"};
  std::vector<std::string> reserved_paths{"api", "product", "products", "login", "register", "dashboard",
                                          "terms", "privacy", "faq", "blog", "feedback", "contact"};

  /// The raw handle segment of a marketplace URL, or nullopt for other links.
  std::optional<std::string> handle_segment(std::string_view url) const;
};

struct SignatureLinks {
  std::vector<std::string> handles;
  std::vector<std::string> raw_values;  ///< matched URL text, parallel to `handles`
  std::vector<std::string> diagnostics;
};

/// Distinct shop handles referenced by anchors or visible text, in document order.
SignatureLinks extract_signature_links(std::string_view html, const HandleGrammar& grammar,
                                       const MarketplacePattern& market = {});
SignatureLinks extract_signature_links(const HtmlNode& node, const HandleGrammar& grammar,
                                       const MarketplacePattern& market = {});

}  // namespace shopscope::harvest
