#pragma once

// Reference implementations written straight from the metric definitions,
// used only to cross-check the library. Slow on purpose: no shared helpers
// with the library code apart from the stemmer.

#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

using Words = std::vector<std::string>;

struct Prf {
  double p = 0.0;
  double r = 0.0;
  double f = 0.0;
};

double bleu(const Words& cand, const Words& ref, int n);
Prf rouge1(const Words& cand, const Words& ref);
Prf rouge_l(const Words& cand, const Words& ref);

/// Enumerates every stage-1 (exact) maximum alignment and, for each, every
/// stage-2 (stem) maximum alignment of the leftovers; returns the minimum
/// chunk count together with the match count.
struct MeteorBrute {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};
MeteorBrute meteor_alignment(const Words& cand, const Words& ref);
double meteor(const Words& cand, const Words& ref);

/// Raw cosine with per-pair norms, clamped to [0,1] after averaging.
Prf bertscore(const std::vector<std::vector<double>>& cand,
              const std::vector<std::vector<double>>& ref);

/// Sample-averaged P/R/F1 and exact-match accuracy over (gold, pred) sets.
struct ConceptScores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};
ConceptScores concept_scores(const std::vector<std::vector<std::string>>& gold,
                             const std::vector<std::vector<std::string>>& pred);

}  // namespace oracle
