#include "shopscope/harvest/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "shopscope/util.hpp"

namespace shopscope::harvest {

namespace {

constexpr std::array kVoidElements{"area", "base", "br", "col", "embed", "hr", "img", "input",
                                   "link", "meta", "param", "source", "track", "wbr"};
constexpr std::array kImplicitlyClosed{"p", "li", "td", "th", "tr", "option", "dt", "dd"};
constexpr std::array kRawText{"script", "style", "textarea"};

template <std::size_t N>
bool contains(const std::array<const char*, N>& set, std::string_view v) {
  return std::any_of(set.begin(), set.end(), [&](const char* s) { return v == s; });
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x110000) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class TreeBuilder {
 public:
  explicit TreeBuilder(HtmlDocument& doc) : doc_(doc) { stack_.push_back(&doc_.root); }

  void text(std::string_view raw) {
    if (raw.empty()) return;
    HtmlNode node;
    node.text = decode_entities(raw);
    current().children.push_back(std::move(node));
  }

  void open(HtmlNode element, bool self_closing) {
    if (contains(kImplicitlyClosed, element.tag) && current().tag == element.tag) stack_.pop_back();
    auto& children = current().children;
    children.push_back(std::move(element));
    HtmlNode* added = &children.back();
    if (!self_closing && !contains(kVoidElements, added->tag)) stack_.push_back(added);
  }

  void close(std::string_view tag) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->tag == tag) {
        if (i + 1 != stack_.size()) doc_.diagnostics.push_back("implicitly closed elements before </" + std::string(tag) + ">");
        stack_.resize(i);
        return;
      }
    }
    doc_.diagnostics.push_back("stray end tag </" + std::string(tag) + ">");
  }

  void finish() {
    if (stack_.size() > 1) doc_.diagnostics.push_back(std::to_string(stack_.size() - 1) + " element(s) unclosed at end of input");
  }

 private:
  HtmlNode& current() { return *stack_.back(); }

  HtmlDocument& doc_;
  // Pointers stay valid: only the innermost open element gains children.
  std::vector<HtmlNode*> stack_;
};

}  // namespace

std::string_view HtmlNode::attribute(std::string_view name) const {
  for (const auto& [k, v] : attributes) {
    if (k == name) return v;
  }
  return {};
}

bool HtmlNode::has_class(std::string_view cls) const {
  const std::string_view classes = attribute("class");
  std::size_t pos = 0;
  while (pos < classes.size()) {
    const auto start = classes.find_first_not_of(" \t\n\r\f", pos);
    if (start == std::string_view::npos) break;
    const auto end = std::min(classes.find_first_of(" \t\n\r\f", start), classes.size());
    if (classes.substr(start, end - start) == cls) return true;
    pos = end;
  }
  return false;
}

std::string HtmlNode::inner_text() const {
  std::string raw;
  std::function<void(const HtmlNode&)> walk = [&](const HtmlNode& n) {
    if (n.is_text()) {
      raw += n.text;
      return;
    }
    if (n.tag == "script" || n.tag == "style") return;
    if (n.tag == "br") raw += ' ';
    for (const auto& c : n.children) walk(c);
    raw += ' ';
  };
  if (is_text()) {
    raw = text;
  } else {
    for (const auto& c : children) walk(c);
  }
  std::string out;
  bool pending_space = false;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '&') {
      out.push_back(text[i]);
      continue;
    }
    const auto semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    const std::string_view name = text.substr(i + 1, semi - i - 1);
    if (!name.empty() && name[0] == '#') {
      unsigned long cp = 0;
      const bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
      const char* first = name.data() + (hex ? 2 : 1);
      const auto [ptr, ec] = std::from_chars(first, name.data() + name.size(), cp, hex ? 16 : 10);
      if (ec != std::errc{} || ptr != name.data() + name.size()) {
        out.push_back('&');
        continue;
      }
      append_utf8(out, static_cast<char32_t>(cp));
    } else if (name == "amp") {
      out.push_back('&');
    } else if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (name == "apos") {
      out.push_back('\'');
    } else if (name == "nbsp") {
      out.push_back(' ');
    } else {
      out.push_back('&');
      continue;
    }
    i = semi;
  }
  return out;
}

HtmlDocument parse_html(std::string_view bytes) {
  HtmlDocument doc;
  doc.root.tag = "#document";
  if (bytes.find('\0') != std::string_view::npos) {
    doc.parsed = false;
    doc.diagnostics.push_back("input contains NUL bytes; not an HTML document");
    return doc;
  }
  TreeBuilder builder(doc);
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  std::size_t text_start = 0;

  while (i < n) {
    if (bytes[i] != '<') {
      ++i;
      continue;
    }
    if (bytes.substr(i, 4) == "<!--") {
      builder.text(bytes.substr(text_start, i - text_start));
      const auto end = bytes.find("-->", i + 4);
      i = end == std::string_view::npos ? n : end + 3;
      text_start = i;
      continue;
    }
    if (i + 1 < n && (bytes[i + 1] == '!' || bytes[i + 1] == '?')) {
      builder.text(bytes.substr(text_start, i - text_start));
      const auto end = bytes.find('>', i);
      i = end == std::string_view::npos ? n : end + 1;
      text_start = i;
      continue;
    }
    const bool closing = i + 1 < n && bytes[i + 1] == '/';
    std::size_t j = i + (closing ? 2 : 1);
    const std::size_t name_start = j;
    while (j < n && is_name_char(bytes[j])) ++j;
    if (j == name_start) {
      ++i;  // a literal '<' in text
      continue;
    }
    builder.text(bytes.substr(text_start, i - text_start));
    const std::string tag = ascii_lower(bytes.substr(name_start, j - name_start));

    HtmlNode element;
    element.tag = tag;
    bool self_closing = false;
    while (j < n && bytes[j] != '>') {
      const char c = bytes[j];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++j;
        continue;
      }
      if (c == '/') {
        self_closing = j + 1 < n && bytes[j + 1] == '>';
        ++j;
        continue;
      }
      if (c == '<') break;  // unterminated tag; recover at the next tag
      const std::size_t attr_start = j;
      while (j < n && !std::isspace(static_cast<unsigned char>(bytes[j])) && bytes[j] != '=' && bytes[j] != '>' &&
             bytes[j] != '/')
        ++j;
      std::string name = ascii_lower(bytes.substr(attr_start, j - attr_start));
      while (j < n && std::isspace(static_cast<unsigned char>(bytes[j]))) ++j;
      std::string value;
      if (j < n && bytes[j] == '=') {
        ++j;
        while (j < n && std::isspace(static_cast<unsigned char>(bytes[j]))) ++j;
        if (j < n && (bytes[j] == '"' || bytes[j] == '\'')) {
          const char quote = bytes[j];
          const auto end = bytes.find(quote, j + 1);
          if (end == std::string_view::npos) {
            doc.diagnostics.push_back("unterminated attribute value in <" + tag + ">");
            value = bytes.substr(j + 1);
            j = n;
          } else {
            value = bytes.substr(j + 1, end - j - 1);
            j = end + 1;
          }
        } else {
          const std::size_t v_start = j;
          while (j < n && !std::isspace(static_cast<unsigned char>(bytes[j])) && bytes[j] != '>') ++j;
          value = bytes.substr(v_start, j - v_start);
        }
      }
      if (!name.empty() && !closing) element.attributes.emplace_back(std::move(name), decode_entities(value));
    }
    if (j >= n) doc.diagnostics.push_back("unterminated tag <" + tag + ">");
    i = (j < n && bytes[j] == '>') ? j + 1 : j;
    text_start = i;

    if (closing) {
      builder.close(tag);
      continue;
    }
    builder.open(std::move(element), self_closing);
    if (!self_closing && contains(kRawText, tag)) {
      const std::string end_tag = "</" + tag;
      std::size_t k = i;
      std::size_t end = std::string_view::npos;
      while (k < n) {
        const auto cand = bytes.find("</", k);
        if (cand == std::string_view::npos) break;
        if (ascii_lower(bytes.substr(cand, end_tag.size())) == end_tag) {
          end = cand;
          break;
        }
        k = cand + 2;
      }
      if (end == std::string_view::npos) end = n;
      if (tag == "textarea") builder.text(bytes.substr(i, end - i));
      builder.close(tag);
      const auto gt = bytes.find('>', end);
      i = gt == std::string_view::npos ? n : gt + 1;
      text_start = i;
    }
  }
  builder.text(bytes.substr(text_start, n - text_start));
  builder.finish();
  return doc;
}

void visit_elements(const HtmlNode& node, const std::function<void(const HtmlNode&)>& fn) {
  if (!node.is_text()) fn(node);
  for (const auto& child : node.children) visit_elements(child, fn);
}

std::vector<const HtmlNode*> find_by_class(const HtmlNode& root, std::string_view cls) {
  std::vector<const HtmlNode*> out;
  visit_elements(root, [&](const HtmlNode& n) {
    if (n.has_class(cls)) out.push_back(&n);
  });
  return out;
}

std::vector<const HtmlNode*> find_by_tag(const HtmlNode& root, std::string_view tag) {
  std::vector<const HtmlNode*> out;
  visit_elements(root, [&](const HtmlNode& n) {
    if (n.tag == tag) out.push_back(&n);
  });
  return out;
}

}  // namespace shopscope::harvest
