#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace medcap {

/// Raised when a domain value violates one of its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by parsers; carries the source name and the 1-based line of the
/// offending record.
class FileFormatError : public std::runtime_error {
 public:
  FileFormatError(std::string path, std::size_t line, std::string message);

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::size_t line_;
  std::string message_;
};

/// Raised when an output sink rejects a write.
class WriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace medcap
