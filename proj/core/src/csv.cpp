#include "coheft/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

#include "coheft/errors.hpp"

namespace coheft {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConfigParse("not a number: \"" + text + "\"");
  return v;
}

void CsvWriter::comment(const std::string& key, const std::string& value) {
  out_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  columns_ = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (columns_ != 0 && cells.size() != columns_)
    throw IOFailure("csv row width " + std::to_string(cells.size()) +
                    " does not match header width " + std::to_string(columns_));
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
  out_ << "\n";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace coheft
