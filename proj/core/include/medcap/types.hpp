#pragma once

// Shared domain types. Every constructor validates its invariants and
// throws medcap::ValidationError on violation; instances are immutable
// afterwards.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "medcap/errors.hpp"

namespace medcap {

/// A UMLS-style concept identifier such as "C0040405".
class ConceptId {
 public:
  explicit ConceptId(std::string value);

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const ConceptId&, const ConceptId&) = default;
  friend auto operator<=>(const ConceptId&, const ConceptId&) = default;

  /// True when `token` is acceptable as a ConceptId.
  static bool is_valid(std::string_view token) noexcept;

 private:
  std::string value_;
};

using ConceptSet = std::set<ConceptId>;

struct VocabularyEntry {
  ConceptId id;
  std::optional<std::string> name;
  std::uint64_t frequency = 0;

  friend bool operator==(const VocabularyEntry&, const VocabularyEntry&) = default;
};

/// Ordered, duplicate-free list of concepts. Iteration order is insertion
/// order.
class ConceptVocabulary {
 public:
  ConceptVocabulary() = default;
  explicit ConceptVocabulary(std::vector<VocabularyEntry> entries);

  static ConceptVocabulary from_ids(const std::vector<ConceptId>& ids);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<VocabularyEntry>& entries() const noexcept { return entries_; }
  const VocabularyEntry& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  bool contains(const ConceptId& id) const { return index_.contains(id.str()); }
  std::optional<std::size_t> index_of(const ConceptId& id) const;

  /// The display name when one is recorded, otherwise the CUI itself.
  std::string display_name(const ConceptId& id) const;

  friend bool operator==(const ConceptVocabulary& a, const ConceptVocabulary& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<VocabularyEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Dense row-major grid of confidence scores: one row per image, one column
/// per vocabulary concept, every value in [0, 1].
class ProbabilityMatrix {
 public:
  ProbabilityMatrix(std::vector<std::string> image_ids, ConceptVocabulary concepts,
                    std::vector<double> values);

  std::size_t rows() const noexcept { return image_ids_.size(); }
  std::size_t cols() const noexcept { return concepts_.size(); }
  const std::vector<std::string>& image_ids() const noexcept { return image_ids_; }
  const ConceptVocabulary& concepts() const noexcept { return concepts_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols(), cols());
  }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

  friend bool operator==(const ProbabilityMatrix&, const ProbabilityMatrix&) = default;

 private:
  std::vector<std::string> image_ids_;
  ConceptVocabulary concepts_;
  std::vector<double> values_;
};

ProbabilityMatrix build_probability_matrix(std::vector<std::string> image_ids,
                                           ConceptVocabulary vocabulary,
                                           std::vector<double> values);

/// Image-id keyed table preserving input order; image ids are unique and
/// non-empty.
template <typename Value>
class ImageTable {
 public:
  using Entry = std::pair<std::string, Value>;

  ImageTable() = default;
  explicit ImageTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
    index_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const std::string& id = entries_[i].first;
      if (id.empty()) throw ValidationError("empty image id");
      if (!index_.emplace(id, i).second) throw ValidationError("duplicate image id \"" + id + "\"");
    }
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  bool contains(const std::string& image_id) const { return index_.contains(image_id); }
  const Value* find(const std::string& image_id) const {
    auto it = index_.find(image_id);
    return it == index_.end() ? nullptr : &entries_[it->second].second;
  }

  friend bool operator==(const ImageTable& a, const ImageTable& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// image id -> set of CUIs (gold or predicted).
using ConceptAnnotationSet = ImageTable<ConceptSet>;
/// image id -> caption text.
using CaptionCorpus = ImageTable<std::string>;

/// Global decision threshold; a concept is retained when score > tau.
class ThresholdConfig {
 public:
  explicit ThresholdConfig(double tau = 0.5);
  double tau() const noexcept { return tau_; }

 private:
  double tau_;
};

/// Per-image concept-set comparison.
class SampleScore {
 public:
  SampleScore(double precision, double recall, double f1, bool exact_match);

  double precision() const noexcept { return precision_; }
  double recall() const noexcept { return recall_; }
  double f1() const noexcept { return f1_; }
  bool exact_match() const noexcept { return exact_match_; }

  friend bool operator==(const SampleScore&, const SampleScore&) = default;

 private:
  double precision_;
  double recall_;
  double f1_;
  bool exact_match_;
};

struct ReportRow {
  std::string label;
  std::vector<std::pair<std::string, double>> metrics;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// Configurations x metrics table. All rows carry the same metric names in
/// the same order; labels are unique; values lie in [0, 1].
class EvalReport {
 public:
  EvalReport() = default;
  explicit EvalReport(std::vector<ReportRow> rows);

  const std::vector<ReportRow>& rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty(); }
  std::vector<std::string> metric_names() const;
  std::optional<double> value(std::string_view label, std::string_view metric) const;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;

 private:
  std::vector<ReportRow> rows_;
};

}  // namespace medcap

template <>
struct std::hash<medcap::ConceptId> {
  std::size_t operator()(const medcap::ConceptId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
