#include "medcap/types.hpp"

#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

namespace medcap {

FileFormatError::FileFormatError(std::string path, std::size_t line, std::string message)
    : std::runtime_error(fmt::format("{}:{}: {}", path, line, message)),
      path_(std::move(path)),
      line_(line),
      message_(std::move(message)) {}

namespace {

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

bool ConceptId::is_valid(std::string_view token) noexcept {
  if (token.empty()) return false;
  for (char c : token) {
    switch (c) {
      case ';':
      case ',':
      case ' ':
      case '\t':
      case '\n':
      case '\r':
      case '\v':
      case '\f':
        return false;
      default:
        break;
    }
  }
  return true;
}

ConceptId::ConceptId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw ValidationError("empty concept id");
  if (!is_valid(value_)) throw ValidationError(fmt::format("invalid concept id \"{}\"", value_));
}

ConceptVocabulary::ConceptVocabulary(std::vector<VocabularyEntry> entries)
    : entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].id.str(), i).second) {
      throw ValidationError(fmt::format("duplicate concept id \"{}\"", entries_[i].id.str()));
    }
  }
}

ConceptVocabulary ConceptVocabulary::from_ids(const std::vector<ConceptId>& ids) {
  std::vector<VocabularyEntry> entries;
  entries.reserve(ids.size());
  for (const auto& id : ids) entries.push_back({id, std::nullopt, 0});
  return ConceptVocabulary(std::move(entries));
}

std::optional<std::size_t> ConceptVocabulary::index_of(const ConceptId& id) const {
  auto it = index_.find(id.str());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string ConceptVocabulary::display_name(const ConceptId& id) const {
  auto idx = index_of(id);
  if (idx && entries_[*idx].name) return *entries_[*idx].name;
  return id.str();
}

ProbabilityMatrix::ProbabilityMatrix(std::vector<std::string> image_ids,
                                     ConceptVocabulary concepts, std::vector<double> values)
    : image_ids_(std::move(image_ids)), concepts_(std::move(concepts)), values_(std::move(values)) {
  if (values_.size() != image_ids_.size() * concepts_.size()) {
    throw ValidationError(fmt::format("dimension mismatch: {} values for {} images x {} concepts",
                                      values_.size(), image_ids_.size(), concepts_.size()));
  }
  std::unordered_set<std::string> seen;
  seen.reserve(image_ids_.size());
  for (const auto& id : image_ids_) {
    if (id.empty()) throw ValidationError("empty image id");
    if (!seen.insert(id).second) throw ValidationError(fmt::format("duplicate image id \"{}\"", id));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!in_unit_interval(values_[i])) {
      const std::size_t cols = concepts_.size();
      throw ValidationError(fmt::format("value out of range: {} at image \"{}\", concept {}",
                                        values_[i], image_ids_[i / cols],
                                        concepts_[i % cols].id.str()));
    }
  }
}

ProbabilityMatrix build_probability_matrix(std::vector<std::string> image_ids,
                                           ConceptVocabulary vocabulary,
                                           std::vector<double> values) {
  return ProbabilityMatrix(std::move(image_ids), std::move(vocabulary), std::move(values));
}

ThresholdConfig::ThresholdConfig(double tau) : tau_(tau) {
  if (!in_unit_interval(tau)) throw ValidationError("tau must be in [0,1]");
}

SampleScore::SampleScore(double precision, double recall, double f1, bool exact_match)
    : precision_(precision), recall_(recall), f1_(f1), exact_match_(exact_match) {
  if (!in_unit_interval(precision) || !in_unit_interval(recall) || !in_unit_interval(f1)) {
    throw ValidationError("sample score component outside [0,1]");
  }
  const double denom = precision + recall;
  const double expected = denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
  if (std::abs(f1 - expected) > 1e-12) {
    throw ValidationError(fmt::format("f1 {} is not the harmonic mean of {} and {}", f1,
                                      precision, recall));
  }
}

EvalReport::EvalReport(std::vector<ReportRow> rows) : rows_(std::move(rows)) {
  std::unordered_set<std::string> labels;
  for (const auto& row : rows_) {
    if (!labels.insert(row.label).second) {
      throw ValidationError(fmt::format("duplicate configuration label \"{}\"", row.label));
    }
    if (row.metrics.size() != rows_.front().metrics.size()) {
      throw ValidationError(fmt::format("row \"{}\" has {} metrics, expected {}", row.label,
                                        row.metrics.size(), rows_.front().metrics.size()));
    }
    std::unordered_set<std::string> names;
    for (std::size_t i = 0; i < row.metrics.size(); ++i) {
      const auto& [name, value] = row.metrics[i];
      if (name.empty() || name == "Configuration") {
        throw ValidationError(fmt::format("invalid metric name \"{}\"", name));
      }
      if (!names.insert(name).second) {
        throw ValidationError(fmt::format("duplicate metric \"{}\" in row \"{}\"", name, row.label));
      }
      if (name != rows_.front().metrics[i].first) {
        throw ValidationError(fmt::format("row \"{}\" metric {} is \"{}\", expected \"{}\"",
                                          row.label, i, name, rows_.front().metrics[i].first));
      }
      if (!in_unit_interval(value)) {
        throw ValidationError(
            fmt::format("metric \"{}\" of row \"{}\" is {}, outside [0,1]", name, row.label, value));
      }
    }
  }
}

std::vector<std::string> EvalReport::metric_names() const {
  std::vector<std::string> names;
  if (rows_.empty()) return names;
  for (const auto& [name, value] : rows_.front().metrics) names.push_back(name);
  return names;
}

std::optional<double> EvalReport::value(std::string_view label, std::string_view metric) const {
  for (const auto& row : rows_) {
    if (row.label != label) continue;
    for (const auto& [name, value] : row.metrics) {
      if (name == metric) return value;
    }
  }
  return std::nullopt;
}

}  // namespace medcap
