#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace medcap::ingest::detail {

/// Record-at-a-time reader for the toolkit's CSV dialect.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string_view source);

  /// Reads the next non-blank record into `fields`; false at end of input.
  bool next(std::vector<std::string>& fields);

  /// 1-based line on which the most recently returned record starts.
  std::size_t line() const noexcept { return record_line_; }
  const std::string& source() const noexcept { return source_; }

 private:
  bool read_physical_line(std::string& line);

  std::istream& in_;
  std::string source_;
  std::size_t physical_line_ = 0;
  std::size_t record_line_ = 0;
};

/// Reads physical lines with BOM and trailing-CR handling; blank lines are
/// skipped. Used by the JSON-lines parser.
class LineReader {
 public:
  LineReader(std::istream& in) : in_(in) {}
  bool next(std::string& line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

void write_field(std::ostream& out, std::string_view field);
std::string_view trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

}  // namespace medcap::ingest::detail
