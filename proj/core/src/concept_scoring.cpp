#include "medcap/concept_scoring.hpp"

#include <fmt/format.h>

#include "medcap/parallel.hpp"

namespace medcap::concepts {

SampleScore score_concept_sets(const ConceptSet& gold, const ConceptSet& predicted) {
  if (gold.empty() && predicted.empty()) return SampleScore(1.0, 1.0, 1.0, true);

  // Both sets are sorted, so a merge walk counts the intersection.
  std::size_t overlap = 0;
  auto g = gold.begin();
  auto p = predicted.begin();
  while (g != gold.end() && p != predicted.end()) {
    if (*g < *p) {
      ++g;
    } else if (*p < *g) {
      ++p;
    } else {
      ++overlap;
      ++g;
      ++p;
    }
  }
  const double intersection = static_cast<double>(overlap);
  const double precision = predicted.empty() ? 0.0 : intersection / predicted.size();
  const double recall = gold.empty() ? 0.0 : intersection / gold.size();
  const double denom = precision + recall;
  const double f1 = denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
  return SampleScore(precision, recall, f1, gold == predicted);
}

ConceptEvalResult evaluate_concepts(const ConceptAnnotationSet& gold,
                                    const ConceptAnnotationSet& predicted, std::size_t threads) {
  if (gold.empty()) throw ValidationError("gold annotation set is empty");

  std::vector<const ConceptSet*> matched(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    matched[i] = predicted.find(gold[i].first);
    if (matched[i] == nullptr) {
      throw ValidationError(fmt::format("no prediction for gold image \"{}\"", gold[i].first));
    }
  }

  ConceptEvalResult result;
  result.n_samples = gold.size();
  std::vector<std::optional<SampleScore>> scores(gold.size());
  parallel_for(gold.size(), threads,
               [&](std::size_t i) { scores[i] = score_concept_sets(gold[i].second, *matched[i]); });

  std::size_t exact = 0;
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  double f1_sum = 0.0;
  result.per_sample.reserve(gold.size());
  for (const auto& score : scores) {
    exact += score->exact_match() ? 1 : 0;
    precision_sum += score->precision();
    recall_sum += score->recall();
    f1_sum += score->f1();
    result.per_sample.push_back(*score);
  }
  const double n = static_cast<double>(gold.size());
  result.accuracy = static_cast<double>(exact) / n;
  result.precision = precision_sum / n;
  result.recall = recall_sum / n;
  result.f1 = f1_sum / n;

  for (const auto& [image_id, concepts] : predicted) {
    if (!gold.contains(image_id)) ++result.ignored_predictions;
  }
  return result;
}

}  // namespace medcap::concepts
