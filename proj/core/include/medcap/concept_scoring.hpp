#pragma once

// Concept-detection metrics: exact-set-match accuracy plus sample-averaged
// precision, recall and F1.

#include <cstddef>
#include <vector>

#include "medcap/types.hpp"

namespace medcap::concepts {

struct ConceptEvalResult {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_samples = 0;
  /// Aligned with the gold image order.
  std::vector<SampleScore> per_sample;
  /// Predicted images with no gold counterpart; they do not affect scores.
  std::size_t ignored_predictions = 0;
};

/// Scores one image. An empty gold set predicted as empty counts as a
/// perfect match (precision = recall = f1 = 1).
SampleScore score_concept_sets(const ConceptSet& gold, const ConceptSet& predicted);

/// Scores every gold image against its prediction and averages. Throws
/// ValidationError naming the first gold image without a prediction, or when
/// gold is empty.
ConceptEvalResult evaluate_concepts(const ConceptAnnotationSet& gold,
                                    const ConceptAnnotationSet& predicted,
                                    std::size_t threads = 1);

}  // namespace medcap::concepts
