#include "medcap/porter_stemmer.hpp"

#include <array>
#include <utility>

namespace medcap::text {

namespace {

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Within one step only the rule with the longest matching suffix is
// considered; each table is scanned for that rule.
constexpr std::array kStep2 = {
    Rule{"ational", "ate"}, Rule{"tional", "tion"}, Rule{"enci", "ence"},  Rule{"anci", "ance"},
    Rule{"izer", "ize"},    Rule{"abli", "able"},   Rule{"alli", "al"},    Rule{"entli", "ent"},
    Rule{"eli", "e"},       Rule{"ousli", "ous"},   Rule{"ization", "ize"}, Rule{"ation", "ate"},
    Rule{"ator", "ate"},    Rule{"alism", "al"},    Rule{"iveness", "ive"}, Rule{"fulness", "ful"},
    Rule{"ousness", "ous"}, Rule{"aliti", "al"},    Rule{"iviti", "ive"},  Rule{"biliti", "ble"},
};

constexpr std::array kStep3 = {
    Rule{"icate", "ic"}, Rule{"ative", ""}, Rule{"alize", "al"}, Rule{"iciti", "ic"},
    Rule{"ical", "ic"},  Rule{"ful", ""},   Rule{"ness", ""},
};

constexpr std::array<std::string_view, 19> kStep4 = {
    "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
    "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize",
};

class Word {
 public:
  explicit Word(std::string_view w) : b_(w) {}

  std::string take() && { return std::move(b_); }

  void step1a() {
    if (ends("sses")) {
      chop(2);
    } else if (ends("ies")) {
      chop(2);
    } else if (ends("ss")) {
      // unchanged
    } else if (ends("s")) {
      chop(1);
    }
  }

  void step1b() {
    bool cleanup = false;
    if (ends("eed")) {
      if (measure(b_.size() - 3) > 0) chop(1);
    } else if (ends("ed") && has_vowel(b_.size() - 2)) {
      chop(2);
      cleanup = true;
    } else if (ends("ing") && has_vowel(b_.size() - 3)) {
      chop(3);
      cleanup = true;
    }
    if (!cleanup) return;
    if (ends("at") || ends("bl") || ends("iz")) {
      b_ += 'e';
    } else if (double_consonant(b_.size())) {
      const char last = b_.back();
      if (last != 'l' && last != 's' && last != 'z') chop(1);
    } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
      b_ += 'e';
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(b_.size() - 1)) b_.back() = 'i';
  }

  template <std::size_t N>
  void replace_longest(const std::array<Rule, N>& rules) {
    const Rule* best = nullptr;
    for (const auto& rule : rules) {
      if (ends(rule.suffix) && (best == nullptr || rule.suffix.size() > best->suffix.size())) {
        best = &rule;
      }
    }
    if (best == nullptr) return;
    const std::size_t stem = b_.size() - best->suffix.size();
    if (measure(stem) > 0) {
      b_.resize(stem);
      b_ += best->replacement;
    }
  }

  void step4() {
    std::string_view best;
    for (auto suffix : kStep4) {
      if (ends(suffix) && suffix.size() > best.size()) best = suffix;
    }
    if (best.empty()) return;
    const std::size_t stem = b_.size() - best.size();
    if (measure(stem) <= 1) return;
    if (best == "ion" && (stem == 0 || (b_[stem - 1] != 's' && b_[stem - 1] != 't'))) return;
    b_.resize(stem);
  }

  void step5a() {
    if (!ends("e")) return;
    const std::size_t stem = b_.size() - 1;
    const int m = measure(stem);
    if (m > 1 || (m == 1 && !cvc(stem))) chop(1);
  }

  void step5b() {
    if (measure(b_.size()) > 1 && double_consonant(b_.size()) && b_.back() == 'l') chop(1);
  }

 private:
  bool ends(std::string_view suffix) const { return std::string_view(b_).ends_with(suffix); }
  void chop(std::size_t n) { b_.resize(b_.size() - n); }

  bool consonant(std::size_t i) const {
    switch (b_[i]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 || !consonant(i - 1);
      default:
        return true;
    }
  }

  // m in [C](VC)^m[V] over the first `len` letters.
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && consonant(i)) ++i;
    while (i < len) {
      while (i < len && !consonant(i)) ++i;
      if (i >= len) break;
      while (i < len && consonant(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!consonant(i)) return true;
    }
    return false;
  }

  bool double_consonant(std::size_t len) const {
    return len >= 2 && b_[len - 1] == b_[len - 2] && consonant(len - 1);
  }

  // *o: ends consonant-vowel-consonant, the last not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3 || !consonant(len - 3) || consonant(len - 2) || !consonant(len - 1)) return false;
    const char c = b_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  std::string b_;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.size() <= 2) return std::string(word);
  Word w(word);
  w.step1a();
  w.step1b();
  w.step1c();
  w.replace_longest(kStep2);
  w.replace_longest(kStep3);
  w.step4();
  w.step5a();
  w.step5b();
  return std::move(w).take();
}

}  // namespace medcap::text
