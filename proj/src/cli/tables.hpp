#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace shopscope::cli {

/// A named, versioned table rendered as TSV (machine) and aligned text (human).
struct Table {
  std::string schema;  ///< e.g. "topics/v1"
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  /// "#schema=<schema>" line, header line, then one line per row. Tabs and newlines
  /// inside cells become spaces.
  std::string to_tsv() const;
  std::string to_text() const;
};

/// Parses `to_tsv` output and checks the schema name and column list.
Table parse_tsv(std::string_view text, const std::string& expected_schema, const std::vector<std::string>& columns,
                const std::string& source_name);

/// Fixed-point with `precision` decimals.
std::string fixed(double v, int precision = 6);
/// Shortest text that reads back to the same double.
std::string exact(double v);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace shopscope::cli
