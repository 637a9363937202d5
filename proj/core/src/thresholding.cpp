#include "medcap/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include <fmt/format.h>

#include "medcap/parallel.hpp"

namespace medcap::thresholding {

namespace {

constexpr std::size_t kMaxGridPoints = 100000;

double round_to_12_places(double x) { return std::round(x * 1e12) / 1e12; }

void check_same_layout(const ProbabilityMatrix& first, const ProbabilityMatrix& other,
                       std::size_t index) {
  const auto& ids_a = first.image_ids();
  const auto& ids_b = other.image_ids();
  for (std::size_t r = 0; r < std::max(ids_a.size(), ids_b.size()); ++r) {
    const std::string a = r < ids_a.size() ? ids_a[r] : "<missing>";
    const std::string b = r < ids_b.size() ? ids_b[r] : "<missing>";
    if (a != b) {
      throw ValidationError(fmt::format(
          "image id mismatch between matrix 0 and matrix {} at row {}: \"{}\" vs \"{}\"", index, r,
          a, b));
    }
  }
  const auto& va = first.concepts();
  const auto& vb = other.concepts();
  for (std::size_t c = 0; c < std::max(va.size(), vb.size()); ++c) {
    const std::string a = c < va.size() ? va[c].id.str() : "<missing>";
    const std::string b = c < vb.size() ? vb[c].id.str() : "<missing>";
    if (a != b) {
      throw ValidationError(fmt::format(
          "vocabulary mismatch between matrix 0 and matrix {} at column {}: {} vs {}", index, c, a,
          b));
    }
  }
}

}  // namespace

ConceptAnnotationSet apply_threshold(const ProbabilityMatrix& matrix, const ThresholdConfig& config) {
  std::vector<ConceptAnnotationSet::Entry> entries;
  entries.reserve(matrix.rows());
  const double tau = config.tau();
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    ConceptSet retained;
    const auto scores = matrix.row(r);
    for (std::size_t c = 0; c < scores.size(); ++c) {
      if (scores[c] > tau) retained.insert(matrix.concepts()[c].id);
    }
    entries.emplace_back(matrix.image_ids()[r], std::move(retained));
  }
  return ConceptAnnotationSet(std::move(entries));
}

std::vector<double> sweep_grid(const SweepRange& range) {
  const auto [start, stop, step] = range;
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
    throw ValidationError("sweep bounds must be finite");
  }
  if (!(step > 0.0)) throw ValidationError("sweep step must be positive");
  if (start > stop) throw ValidationError(fmt::format("empty grid: start {} > stop {}", start, stop));
  if (start < 0.0 || stop > 1.0) throw ValidationError("sweep range must lie within [0,1]");

  if (start == stop) return {start};
  const double steps = std::round((stop - start) / step);
  if (steps >= static_cast<double>(kMaxGridPoints)) {
    throw ValidationError(fmt::format("sweep grid exceeds {} points", kMaxGridPoints));
  }
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(steps));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back(round_to_12_places(start + static_cast<double>(i) * step));
  }
  grid.push_back(stop);
  return grid;
}

SweepResult sweep_thresholds(const ProbabilityMatrix& matrix, const ConceptAnnotationSet& gold,
                             const SweepRange& range, std::size_t threads) {
  const std::vector<double> taus = sweep_grid(range);

  std::vector<std::optional<concepts::ConceptEvalResult>> results(taus.size());
  parallel_for(taus.size(), threads, [&](std::size_t i) {
    results[i] = concepts::evaluate_concepts(gold, apply_threshold(matrix, ThresholdConfig(taus[i])));
  });

  SweepResult sweep;
  sweep.grid.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double f1 = results[i]->f1;
    if (i == 0 || f1 > sweep.best_f1) {
      sweep.best_f1 = f1;
      sweep.best_tau = taus[i];
    }
    sweep.grid.push_back({taus[i], std::move(*results[i])});
  }
  return sweep;
}

ProbabilityMatrix ensemble_mean(std::span<const ProbabilityMatrix> matrices) {
  if (matrices.empty()) throw ValidationError("ensemble needs at least one matrix");
  const ProbabilityMatrix& first = matrices.front();
  for (std::size_t k = 1; k < matrices.size(); ++k) check_same_layout(first, matrices[k], k);

  std::vector<double> mean(first.values().begin(), first.values().end());
  for (std::size_t k = 1; k < matrices.size(); ++k) {
    const auto values = matrices[k].values();
    const double count = static_cast<double>(k + 1);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (values[i] - mean[i]) / count;
  }
  return ProbabilityMatrix(first.image_ids(), first.concepts(), std::move(mean));
}

ConceptVocabulary filter_vocabulary(const ConceptAnnotationSet& training, std::uint64_t min_count) {
  if (min_count == 0) throw ValidationError("min_count must be positive");
  std::map<ConceptId, std::uint64_t> counts;
  for (const auto& [image_id, concepts] : training) {
    for (const auto& cui : concepts) ++counts[cui];
  }
  std::vector<VocabularyEntry> kept;
  for (const auto& [cui, count] : counts) {
    if (count >= min_count) kept.push_back({cui, std::nullopt, count});
  }
  // counts is CUI-ordered already; a stable sort keeps CUI order within ties.
  std::ranges::stable_sort(kept, std::ranges::greater{}, &VocabularyEntry::frequency);
  return ConceptVocabulary(std::move(kept));
}

ConceptAnnotationSet restrict_predictions(const ConceptAnnotationSet& predictions,
                                          const ConceptVocabulary& vocabulary) {
  std::vector<ConceptAnnotationSet::Entry> entries;
  entries.reserve(predictions.size());
  for (const auto& [image_id, concepts] : predictions) {
    ConceptSet kept;
    for (const auto& cui : concepts) {
      if (vocabulary.contains(cui)) kept.insert(cui);
    }
    entries.emplace_back(image_id, std::move(kept));
  }
  return ConceptAnnotationSet(std::move(entries));
}

std::string concepts_to_text(std::span<const double> scores, const ConceptVocabulary& vocabulary,
                             const ThresholdConfig& config) {
  if (scores.size() != vocabulary.size()) {
    throw ValidationError(fmt::format("{} scores for a vocabulary of {} concepts", scores.size(),
                                      vocabulary.size()));
  }
  std::vector<std::size_t> retained;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (scores[c] > config.tau()) retained.push_back(c);
  }
  std::ranges::sort(retained, [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return vocabulary[a].id < vocabulary[b].id;
  });
  std::string text;
  for (std::size_t i = 0; i < retained.size(); ++i) {
    if (i > 0) text += "; ";
    text += vocabulary.display_name(vocabulary[retained[i]].id);
  }
  return text;
}

}  // namespace medcap::thresholding
