#include "tables.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "shopscope/error.hpp"

namespace shopscope::cli {

namespace {

std::string clean(std::string_view cell) {
  std::string out(cell);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

// Display width in code points; continuation bytes take no column.
std::size_t width(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("table " + schema + ": row width mismatch");
  rows.push_back(std::move(row));
}

std::string Table::to_tsv() const {
  std::string out = "#schema=" + schema + "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += '\t';
      out += clean(cells[i]);
    }
    out += '\n';
  };
  line(columns);
  for (const auto& row : rows) line(row);
  return out;
}

std::string Table::to_text() const {
  std::vector<std::size_t> widths(columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i) widths[i] = width(columns[i]);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], width(clean(row[i])));
  }
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    std::string text;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string cell = clean(cells[i]);
      text += cell;
      if (i + 1 < cells.size()) text.append(widths[i] - width(cell) + 2, ' ');
    }
    out += text + "\n";
  };
  line(columns);
  std::size_t rule = 0;
  for (auto w : widths) rule += w + 2;
  out += std::string(rule > 2 ? rule - 2 : 0, '-') + "\n";
  for (const auto& row : rows) line(row);
  return out;
}

Table parse_tsv(std::string_view text, const std::string& expected_schema, const std::vector<std::string>& columns,
                const std::string& source_name) {
  Table table;
  table.schema = expected_schema;
  table.columns = columns;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != "#schema=" + expected_schema) {
        throw DataError(source_name, line_no, "expected #schema=" + expected_schema);
      }
      continue;
    }
    auto cells = split_tabs(line);
    if (line_no == 2) {
      if (cells != columns) throw DataError(source_name, line_no, "unexpected header");
      continue;
    }
    if (cells.size() != columns.size()) {
      throw DataError(source_name, line_no,
                      "expected " + std::to_string(columns.size()) + " fields, got " + std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (line_no < 2) throw DataError(source_name, line_no == 0 ? 1 : line_no, "missing header");
  return table;
}

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace shopscope::cli
