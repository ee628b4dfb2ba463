#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shopscope::harvest {

/// Element or text node of a leniently parsed HTML tree. Text nodes have an empty tag.
struct HtmlNode {
  std::string tag;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<HtmlNode> children;
  std::string text;

  bool is_text() const noexcept { return tag.empty(); }
  std::string_view attribute(std::string_view name) const;
  bool has_class(std::string_view cls) const;
  /// Concatenated descendant text, whitespace-collapsed and trimmed.
  std::string inner_text() const;
};

struct HtmlDocument {
  HtmlNode root;
  std::vector<std::string> diagnostics;
  bool parsed = true;
};

/// Error-recovering parse: unclosed tags are closed at end of input, stray end tags are
/// ignored, implicit closes apply to p/li/td/tr/option. Input that looks binary
/// (NUL bytes) yields an empty tree with `parsed == false`.
HtmlDocument parse_html(std::string_view bytes);

/// Pre-order visit of every element node.
void visit_elements(const HtmlNode& node, const std::function<void(const HtmlNode&)>& fn);
std::vector<const HtmlNode*> find_by_class(const HtmlNode& root, std::string_view cls);
std::vector<const HtmlNode*> find_by_tag(const HtmlNode& root, std::string_view tag);

std::string decode_entities(std::string_view text);

}  // namespace shopscope::harvest
