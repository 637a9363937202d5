#include "csv.hpp"

#include <algorithm>
#include <cctype>

#include "medcap/errors.hpp"

namespace medcap::ingest::detail {

namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";

bool getline_stripped(std::istream& in, std::string& line, bool first) {
  if (!std::getline(in, line)) return false;
  if (first && line.starts_with(kBom)) line.erase(0, kBom.size());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

CsvReader::CsvReader(std::istream& in, std::string_view source) : in_(in), source_(source) {}

bool CsvReader::read_physical_line(std::string& line) {
  if (!getline_stripped(in_, line, physical_line_ == 0)) return false;
  ++physical_line_;
  return true;
}

bool CsvReader::next(std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  do {
    if (!read_physical_line(line)) return false;
  } while (line.empty());
  record_line_ = physical_line_;

  std::string field;
  std::size_t pos = 0;
  for (;;) {
    field.clear();
    if (pos < line.size() && line[pos] == '"') {
      ++pos;
      for (;;) {
        if (pos >= line.size()) {
          if (!read_physical_line(line)) {
            throw FileFormatError(source_, record_line_, "unterminated quote");
          }
          field.push_back('\n');
          pos = 0;
          continue;
        }
        const char c = line[pos++];
        if (c != '"') {
          field.push_back(c);
        } else if (pos < line.size() && line[pos] == '"') {
          field.push_back('"');
          ++pos;
        } else {
          break;
        }
      }
      if (pos < line.size() && line[pos] != ',') {
        throw FileFormatError(source_, physical_line_, "unexpected character after closing quote");
      }
    } else {
      const std::size_t comma = line.find(',', pos);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      field.assign(line, pos, end - pos);
      pos = end;
    }
    fields.push_back(field);
    if (pos >= line.size()) break;
    ++pos;  // skip ','
    if (pos == line.size()) {
      fields.emplace_back();
      break;
    }
  }
  return true;
}

bool LineReader::next(std::string& line) {
  for (;;) {
    if (!getline_stripped(in_, line, line_ == 0)) return false;
    ++line_;
    if (!trim(line).empty()) return true;
  }
}

void write_field(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return std::ranges::equal(a, b, [](unsigned char x, unsigned char y) {
    return std::tolower(x) == std::tolower(y);
  });
}

}  // namespace medcap::ingest::detail
