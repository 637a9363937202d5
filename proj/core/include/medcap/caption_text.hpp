#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "medcap/types.hpp"

namespace medcap::text {

/// Lowercase tokens over [a-z0-9].
class TokenSequence {
 public:
  TokenSequence() = default;
  explicit TokenSequence(std::vector<std::string> tokens);

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }
  auto begin() const noexcept { return tokens_.begin(); }
  auto end() const noexcept { return tokens_.end(); }

  /// Tokens joined by single spaces.
  std::string joined() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;

 private:
  std::vector<std::string> tokens_;
};

/// Lowercases the text, then keeps maximal runs of ASCII letters and digits.
/// Everything else separates tokens, including non-ASCII letters.
TokenSequence tokenize(std::string_view text);

/// Splits on '.', '!' and '?', trims whitespace and drops empty segments.
std::vector<std::string> split_sentences(std::string_view text);

/// Removes immediately repeated token blocks (length <= max_block) and
/// sentences that repeat an earlier sentence. Output is normalized token
/// text: sentences joined with ". " and closed with ".", or "" when no
/// tokens remain. Idempotent.
std::string collapse_repetitions(std::string_view text, std::size_t max_block = 4);

}  // namespace medcap::text
