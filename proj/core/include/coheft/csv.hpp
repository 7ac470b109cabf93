#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace coheft {

/// Shortest decimal form that parses back to the same double (to_chars).
/// NaN prints as "nan", infinities as "inf"/"-inf".
std::string format_double(double v);

/// Exact inverse of format_double; throws ConfigParse on malformed input.
double parse_double(const std::string& text);

/// Comma-separated writer: optional "# key=value" comment lines, one header
/// row, then data rows. LF line endings, '.' decimal point, UTF-8.
class CsvWriter {
public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

private:
  std::ostream& out_;
  std::size_t columns_ = 0;
};

/// Split one CSV line on commas (no quoting in this dialect).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace coheft
