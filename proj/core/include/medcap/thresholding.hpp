#pragma once

// Turning concept probabilities into predictions: global thresholding, the
// threshold sweep, probability ensembling, low-frequency vocabulary
// filtering and rendering retained concepts as text.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "medcap/concept_scoring.hpp"
#include "medcap/types.hpp"

namespace medcap::thresholding {

/// Per image, the concepts whose score is strictly greater than tau. Every
/// image appears in the output, possibly with an empty set.
ConceptAnnotationSet apply_threshold(const ProbabilityMatrix& matrix, const ThresholdConfig& config);

struct SweepRange {
  double start = 0.45;
  double stop = 0.50;
  double step = 0.01;
};

struct SweepPoint {
  double tau;
  concepts::ConceptEvalResult result;
};

struct SweepResult {
  std::vector<SweepPoint> grid;
  double best_tau = 0.0;
  double best_f1 = 0.0;
};

/// Grid tau_i = start + i * step for i < N, with the last point snapped to
/// `stop` (N = round((stop - start) / step)). Each tau is rounded to 12
/// decimal places so grid points equal their decimal literals. Throws
/// ValidationError for an empty or out-of-range grid.
std::vector<double> sweep_grid(const SweepRange& range);

/// Evaluates every grid threshold; best_tau is the smallest tau reaching the
/// maximum F1.
SweepResult sweep_thresholds(const ProbabilityMatrix& matrix, const ConceptAnnotationSet& gold,
                             const SweepRange& range = {}, std::size_t threads = 1);

/// Element-wise mean of matrices sharing image ids and vocabulary (same
/// order). Accumulates a running mean in argument order, so k copies of one
/// matrix reproduce it exactly.
ProbabilityMatrix ensemble_mean(std::span<const ProbabilityMatrix> matrices);

/// Concepts annotated on at least `min_count` training images, ordered by
/// descending frequency then CUI.
ConceptVocabulary filter_vocabulary(const ConceptAnnotationSet& training, std::uint64_t min_count);

/// Drops every predicted CUI outside `vocabulary`; the image set is kept.
ConceptAnnotationSet restrict_predictions(const ConceptAnnotationSet& predictions,
                                          const ConceptVocabulary& vocabulary);

/// Display names of concepts scoring above tau, highest score first (ties by
/// CUI), joined with "; ". `scores` is aligned with `vocabulary`.
std::string concepts_to_text(std::span<const double> scores, const ConceptVocabulary& vocabulary,
                             const ThresholdConfig& config);

}  // namespace medcap::thresholding
