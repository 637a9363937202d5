// METEOR alignment.
//
// Stage 1 pairs identical words, stage 2 pairs words sharing a Porter stem
// among the tokens stage 1 left over. Both stages are maximal, so per word w
// exactly min(count_cand(w), count_ref(w)) exact pairs exist, and stem pairs
// join only "surplus" words (more copies on one side than the other). Which
// copies get paired is free, and that choice decides the chunk count.
//
// The search walks candidate positions left to right, choosing for each
// token an exact partner, a stem partner or no partner. A state is
// (position, reference index of the previous candidate token, set of used
// reference positions); the counters that steer feasibility follow from it.
// States reached again with no fewer chunks are pruned, as are branches
// already at the best complete chunk count.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "medcap/caption_metrics.hpp"
#include "medcap/porter_stemmer.hpp"

namespace medcap::metrics {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kNodeBudget = 500'000;

class MeteorSearch {
 public:
  MeteorSearch(const text::TokenSequence& candidate, const text::TokenSequence& reference)
      : n_cand_(candidate.size()), n_ref_(reference.size()) {
    std::unordered_map<std::string, std::size_t> word_ids;
    std::unordered_map<std::string, std::size_t> stem_ids;
    auto word_id = [&](const std::string& w) {
      return word_ids.try_emplace(w, word_ids.size()).first->second;
    };
    auto stem_id = [&](const std::string& w) {
      const std::string stem = text::porter_stem(w);
      return stem_ids.try_emplace(stem, stem_ids.size()).first->second;
    };
    for (const auto& t : candidate) {
      cand_word_.push_back(word_id(t));
      cand_stem_.push_back(stem_id(t));
    }
    for (const auto& t : reference) {
      ref_word_.push_back(word_id(t));
      ref_stem_.push_back(stem_id(t));
    }
    const std::size_t n_words = word_ids.size();
    const std::size_t n_stems = stem_ids.size();

    std::vector<std::size_t> cand_count(n_words, 0);
    std::vector<std::size_t> ref_count(n_words, 0);
    for (auto w : cand_word_) ++cand_count[w];
    for (auto w : ref_word_) ++ref_count[w];

    exact_need_.resize(n_words);
    cand_left_ = cand_count;
    ref_free_ = ref_count;
    refs_by_word_.resize(n_words);
    for (std::size_t w = 0; w < n_words; ++w) exact_need_[w] = std::min(cand_count[w], ref_count[w]);
    for (std::size_t j = 0; j < n_ref_; ++j) refs_by_word_[ref_word_[j]].push_back(j);

    std::vector<std::size_t> cand_surplus(n_stems, 0);
    std::vector<std::size_t> ref_surplus(n_stems, 0);
    std::vector<std::size_t> stem_of_word(n_words, 0);
    for (std::size_t i = 0; i < n_cand_; ++i) stem_of_word[cand_word_[i]] = cand_stem_[i];
    for (std::size_t j = 0; j < n_ref_; ++j) stem_of_word[ref_word_[j]] = ref_stem_[j];
    for (std::size_t w = 0; w < n_words; ++w) {
      if (cand_count[w] > ref_count[w]) cand_surplus[stem_of_word[w]] += cand_count[w] - ref_count[w];
      if (ref_count[w] > cand_count[w]) ref_surplus[stem_of_word[w]] += ref_count[w] - cand_count[w];
    }
    cand_is_surplus_.resize(n_cand_);
    for (std::size_t i = 0; i < n_cand_; ++i) {
      cand_is_surplus_[i] = cand_count[cand_word_[i]] > ref_count[cand_word_[i]];
    }
    stem_refs_.resize(n_stems);
    for (std::size_t j = 0; j < n_ref_; ++j) {
      if (ref_count[ref_word_[j]] > cand_count[ref_word_[j]]) stem_refs_[ref_stem_[j]].push_back(j);
    }

    stem_need_.resize(n_stems);
    skip_left_.resize(n_stems);
    matches_ = 0;
    for (std::size_t w = 0; w < n_words; ++w) matches_ += exact_need_[w];
    for (std::size_t s = 0; s < n_stems; ++s) {
      stem_need_[s] = std::min(cand_surplus[s], ref_surplus[s]);
      skip_left_[s] = cand_surplus[s] - stem_need_[s];
      matches_ += stem_need_[s];
    }
    used_.assign(n_ref_, false);
    used_bits_.assign((n_ref_ + 63) / 64, 0);
  }

  MeteorAlignment run() {
    MeteorAlignment out;
    out.matches = matches_;
    if (matches_ == 0) return out;
    // Beyond the exact limit only the first complete descent is kept; its
    // choice order (continue the previous chunk, else leftmost partner) is
    // the greedy alignment.
    budget_ = matches_ <= kMeteorExactLimit ? kNodeBudget : 0;
    search(0, kNone, 0);
    out.chunks = best_chunks_;
    out.pairs = best_pairs_;
    out.exact = budget_ > 0 && !aborted_;
    return out;
  }

 private:
  struct StateHash {
    std::size_t operator()(const std::vector<std::uint64_t>& key) const noexcept {
      std::size_t h = 0xcbf29ce484222325ULL;
      for (auto k : key) h = (h ^ k) * 0x100000001b3ULL;
      return h;
    }
  };

  std::vector<std::uint64_t> state_key(std::size_t i, std::size_t prev) const {
    std::vector<std::uint64_t> key;
    key.reserve(used_bits_.size() + 2);
    key.push_back(i);
    key.push_back(prev);
    key.insert(key.end(), used_bits_.begin(), used_bits_.end());
    return key;
  }

  void mark(std::size_t j, bool on) {
    used_[j] = on;
    if (on) {
      used_bits_[j / 64] |= std::uint64_t{1} << (j % 64);
    } else {
      used_bits_[j / 64] &= ~(std::uint64_t{1} << (j % 64));
    }
  }

  bool stop() const { return aborted_ || (found_ && budget_ == 0); }

  void search(std::size_t i, std::size_t prev, std::size_t chunks) {
    if (stop()) return;
    if (found_ && chunks >= best_chunks_) return;
    if (i == n_cand_) {
      best_chunks_ = chunks;
      best_pairs_ = pairs_;
      found_ = true;
      return;
    }
    if (budget_ > 0) {
      if (++nodes_ > budget_) {
        aborted_ = found_;
        if (aborted_) return;
      }
      auto [it, inserted] = seen_.try_emplace(state_key(i, prev), chunks);
      if (!inserted) {
        if (it->second <= chunks) return;
        it->second = chunks;
      }
    }

    const std::size_t w = cand_word_[i];
    const std::size_t s = cand_stem_[i];
    --cand_left_[w];

    auto try_pair = [&](std::size_t j, bool exact) {
      const std::size_t ref_w = ref_word_[j];
      mark(j, true);
      --ref_free_[ref_w];
      if (exact) {
        --exact_need_[w];
      } else {
        --stem_need_[s];
      }
      pairs_.emplace_back(i, j);
      const bool continues = prev != kNone && j == prev + 1;
      search(i + 1, j, chunks + (continues ? 0 : 1));
      pairs_.pop_back();
      if (exact) {
        ++exact_need_[w];
      } else {
        ++stem_need_[s];
      }
      ++ref_free_[ref_w];
      mark(j, false);
    };

    // Partners in preference order: the one continuing the current chunk,
    // then left to right.
    auto for_each_partner = [&](const std::vector<std::size_t>& refs, auto&& accept, auto&& body) {
      if (prev != kNone && prev + 1 < n_ref_ && !used_[prev + 1] && accept(prev + 1) &&
          std::ranges::binary_search(refs, prev + 1)) {
        body(prev + 1);
      }
      for (std::size_t j : refs) {
        if (stop()) return;
        if (used_[j] || (prev != kNone && j == prev + 1) || !accept(j)) continue;
        body(j);
      }
    };

    if (exact_need_[w] > 0) {
      for_each_partner(
          refs_by_word_[w], [](std::size_t) { return true; },
          [&](std::size_t j) { try_pair(j, true); });
    }
    if (cand_is_surplus_[i] && cand_left_[w] >= exact_need_[w]) {
      if (stem_need_[s] > 0) {
        for_each_partner(
            stem_refs_[s],
            [&](std::size_t j) {
              const std::size_t ref_w = ref_word_[j];
              return ref_w != w && ref_free_[ref_w] > exact_need_[ref_w];
            },
            [&](std::size_t j) { try_pair(j, false); });
      }
      if (skip_left_[s] > 0 && !stop()) {
        --skip_left_[s];
        search(i + 1, kNone, chunks);
        ++skip_left_[s];
      }
    }

    ++cand_left_[w];
  }

  std::size_t n_cand_;
  std::size_t n_ref_;
  std::vector<std::size_t> cand_word_, cand_stem_, ref_word_, ref_stem_;
  std::vector<bool> cand_is_surplus_;
  std::vector<std::vector<std::size_t>> refs_by_word_;
  std::vector<std::vector<std::size_t>> stem_refs_;

  std::vector<std::size_t> exact_need_, cand_left_, ref_free_, stem_need_, skip_left_;
  std::vector<bool> used_;
  std::vector<std::uint64_t> used_bits_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::unordered_map<std::vector<std::uint64_t>, std::size_t, StateHash> seen_;

  std::size_t matches_ = 0;
  std::size_t budget_ = 0;
  std::size_t nodes_ = 0;
  bool found_ = false;
  bool aborted_ = false;
  std::size_t best_chunks_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> best_pairs_;
};

}  // namespace

MeteorAlignment meteor_align(const text::TokenSequence& candidate,
                             const text::TokenSequence& reference) {
  return MeteorSearch(candidate, reference).run();
}

}  // namespace medcap::metrics
