#include "medcap/caption_text.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

namespace medcap::text {

namespace {

bool is_token_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

/// Length of the UTF-8 sequence starting at `lead`, 0 if `lead` is not a
/// valid lead byte.
std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 0;
}

/// Decodes one code point; returns 0 for malformed input.
char32_t decode(std::string_view text, std::size_t pos, std::size_t len) {
  if (len == 0 || pos + len > text.size()) return 0;
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[pos + i]); };
  char32_t cp = len == 2 ? (byte(0) & 0x1F) : len == 3 ? (byte(0) & 0x0F) : (byte(0) & 0x07);
  for (std::size_t i = 1; i < len; ++i) {
    if ((byte(i) & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (byte(i) & 0x3F);
  }
  return cp;
}

struct Word {
  std::string text;
  bool ends_sentence = false;
};

std::vector<Word> sentence_words(std::string_view text) {
  std::vector<Word> words;
  for (const auto& sentence : split_sentences(text)) {
    const TokenSequence tokens = tokenize(sentence);
    for (const auto& token : tokens) words.push_back({token, false});
    if (!tokens.empty()) words.back().ends_sentence = true;
  }
  return words;
}

bool blocks_equal(const std::vector<Word>& words, std::size_t i, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    if (words[i + k].text != words[i + n + k].text) return false;
  }
  return true;
}

void collapse_blocks(std::vector<Word>& words, std::size_t max_block) {
  bool deleted = true;
  while (deleted) {
    deleted = false;
    for (std::size_t n = max_block; n >= 1; --n) {
      std::size_t i = 0;
      while (i + 2 * n <= words.size()) {
        if (!blocks_equal(words, i, n)) {
          ++i;
          continue;
        }
        // A sentence end on the dropped copy moves to the surviving one.
        if (words[i + 2 * n - 1].ends_sentence) words[i + n - 1].ends_sentence = true;
        words.erase(words.begin() + static_cast<std::ptrdiff_t>(i + n),
                    words.begin() + static_cast<std::ptrdiff_t>(i + 2 * n));
        deleted = true;
      }
    }
  }
}

std::string render(const std::vector<Word>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i].text;
    if (words[i].ends_sentence || i + 1 == words.size()) out += '.';
  }
  return out;
}

std::string drop_repeated_sentences(std::string_view text) {
  std::vector<TokenSequence> kept;
  for (const auto& sentence : split_sentences(text)) {
    TokenSequence tokens = tokenize(sentence);
    if (tokens.empty() || std::ranges::find(kept, tokens) != kept.end()) continue;
    kept.push_back(std::move(tokens));
  }
  std::string out;
  for (const auto& tokens : kept) {
    if (!out.empty()) out += ' ';
    out += tokens.joined();
    out += '.';
  }
  return out;
}

std::string collapse_once(std::string_view text, std::size_t max_block) {
  std::vector<Word> words = sentence_words(text);
  collapse_blocks(words, max_block);
  return drop_repeated_sentences(render(words));
}

}  // namespace

TokenSequence::TokenSequence(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (const auto& token : tokens_) {
    if (token.empty() || !std::ranges::all_of(token, is_token_char)) {
      throw ValidationError(fmt::format("invalid token \"{}\"", token));
    }
  }
}

std::string TokenSequence::joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens_[i];
  }
  return out;
}

TokenSequence tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto lead = static_cast<unsigned char>(text[pos]);
    if (lead < 0x80) {
      const char lower = static_cast<char>(std::tolower(lead));
      if (is_token_char(lower)) {
        current += lower;
      } else {
        flush();
      }
      ++pos;
      continue;
    }
    const std::size_t len = utf8_length(lead);
    const char32_t cp = decode(text, pos, len);
    if (cp == 0) {
      flush();
      ++pos;
      continue;
    }
    // The only non-ASCII code points whose lowercase form contains an ASCII
    // letter: U+0130 -> "i" + U+0307, and the Kelvin sign -> "k".
    if (cp == 0x0130) {
      current += 'i';
      flush();
    } else if (cp == 0x212A) {
      current += 'k';
    } else {
      flush();
    }
    pos += len;
  }
  flush();
  return TokenSequence(std::move(tokens));
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && !is_terminator(text[i])) continue;
    std::string_view segment = text.substr(start, i - start);
    while (!segment.empty() && std::isspace(static_cast<unsigned char>(segment.front()))) {
      segment.remove_prefix(1);
    }
    while (!segment.empty() && std::isspace(static_cast<unsigned char>(segment.back()))) {
      segment.remove_suffix(1);
    }
    if (!segment.empty()) sentences.emplace_back(segment);
    start = i + 1;
  }
  return sentences;
}

std::string collapse_repetitions(std::string_view text, std::size_t max_block) {
  if (max_block == 0) throw ValidationError("max_block must be positive");
  // Dropping a sentence can make two blocks adjacent, so iterate to a fixed
  // point.
  std::string current = collapse_once(text, max_block);
  for (;;) {
    std::string next = collapse_once(current, max_block);
    if (next == current) return current;
    current = std::move(next);
  }
}

}  // namespace medcap::text
