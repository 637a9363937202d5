#include "medcap/ingest.hpp"

#include <charconv>
#include <utility>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "csv.hpp"

namespace medcap::ingest {

using detail::CsvReader;
using detail::iequals;
using detail::trim;
using detail::write_field;

namespace {

using OrderedJson = nlohmann::ordered_json;

std::string src(std::string_view source) { return std::string(source); }

double parse_double(std::string_view text, const CsvReader& reader) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw FileFormatError(reader.source(), reader.line(),
                          fmt::format("unparsable float \"{}\"", text));
  }
  return value;
}

ConceptId parse_cui(std::string_view token, const std::string& source, std::size_t line) {
  const std::string_view t = trim(token);
  if (!ConceptId::is_valid(t)) {
    throw FileFormatError(source, line, fmt::format("invalid CUI token \"{}\"", token));
  }
  return ConceptId(std::string(t));
}

void check_sink(std::ostream& out) {
  out.flush();
  if (!out) throw WriteError("output write failed");
}

bool is_header(const std::vector<std::string>& fields, std::string_view first,
               std::string_view second) {
  return fields.size() == 2 && iequals(trim(fields[0]), first) && iequals(trim(fields[1]), second);
}

}  // namespace

ConceptAnnotationSet parse_concept_annotations(std::istream& in, std::string_view source) {
  CsvReader reader(in, source);
  std::vector<ConceptAnnotationSet::Entry> entries;
  std::unordered_set<std::string> seen;
  std::vector<std::string> fields;
  bool first = true;
  while (reader.next(fields)) {
    if (std::exchange(first, false) && is_header(fields, "ID", "CUIs")) continue;
    if (fields.size() != 2) {
      throw FileFormatError(src(source), reader.line(),
                            fields.size() < 2
                                ? "malformed line: expected <image-id>,<cui>;<cui>..."
                                : fmt::format("malformed line: expected 2 fields, found {}",
                                              fields.size()));
    }
    const std::string& image_id = fields[0];
    if (image_id.empty()) throw FileFormatError(src(source), reader.line(), "empty image id");
    if (!seen.insert(image_id).second) {
      throw FileFormatError(src(source), reader.line(),
                            fmt::format("duplicate image id \"{}\"", image_id));
    }
    ConceptSet concepts;
    const std::string_view cuis = fields[1];
    if (!trim(cuis).empty()) {
      std::size_t start = 0;
      for (;;) {
        const std::size_t semi = cuis.find(';', start);
        const std::size_t end = semi == std::string_view::npos ? cuis.size() : semi;
        concepts.insert(parse_cui(cuis.substr(start, end - start), src(source), reader.line()));
        if (semi == std::string_view::npos) break;
        start = semi + 1;
      }
    }
    entries.emplace_back(image_id, std::move(concepts));
  }
  return ConceptAnnotationSet(std::move(entries));
}

ProbabilityMatrix parse_probability_matrix(std::istream& in, std::string_view source) {
  CsvReader reader(in, source);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw FileFormatError(src(source), 1, "missing header line");

  std::vector<ConceptId> cuis;
  std::unordered_set<std::string> seen_cuis;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    ConceptId cui = parse_cui(fields[i], src(source), reader.line());
    if (!seen_cuis.insert(cui.str()).second) {
      throw FileFormatError(src(source), reader.line(),
                            fmt::format("duplicate CUI in header \"{}\"", cui.str()));
    }
    cuis.push_back(std::move(cui));
  }
  const std::size_t cols = cuis.size();

  std::vector<std::string> image_ids;
  std::unordered_set<std::string> seen_ids;
  std::vector<double> values;
  while (reader.next(fields)) {
    if (fields.size() != cols + 1) {
      throw FileFormatError(src(source), reader.line(),
                            fmt::format("expected {} values, found {}", cols, fields.size() - 1));
    }
    if (fields[0].empty()) throw FileFormatError(src(source), reader.line(), "empty image id");
    if (!seen_ids.insert(fields[0]).second) {
      throw FileFormatError(src(source), reader.line(),
                            fmt::format("duplicate image id \"{}\"", fields[0]));
    }
    for (std::size_t i = 1; i <= cols; ++i) {
      const double v = parse_double(fields[i], reader);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw FileFormatError(src(source), reader.line(),
                              fmt::format("value out of range: {} for {}", fields[i],
                                          cuis[i - 1].str()));
      }
      values.push_back(v);
    }
    image_ids.push_back(fields[0]);
  }
  return ProbabilityMatrix(std::move(image_ids), ConceptVocabulary::from_ids(cuis),
                           std::move(values));
}

CaptionCorpus parse_captions(std::istream& in, std::string_view source) {
  CsvReader reader(in, source);
  std::vector<CaptionCorpus::Entry> entries;
  std::unordered_set<std::string> seen;
  std::vector<std::string> fields;
  bool first = true;
  while (reader.next(fields)) {
    if (std::exchange(first, false) && is_header(fields, "ID", "Caption")) continue;
    if (fields.size() != 2) {
      throw FileFormatError(src(source), reader.line(),
                            fmt::format("expected 2 fields <image-id>,<caption>, found {}",
                                        fields.size()));
    }
    if (fields[0].empty()) throw FileFormatError(src(source), reader.line(), "empty image id");
    if (!seen.insert(fields[0]).second) {
      throw FileFormatError(src(source), reader.line(),
                            fmt::format("duplicate image id \"{}\"", fields[0]));
    }
    entries.emplace_back(std::move(fields[0]), std::move(fields[1]));
  }
  return CaptionCorpus(std::move(entries));
}

EmbeddingSet parse_token_embeddings(std::istream& in, std::string_view source) {
  detail::LineReader reader(in);
  std::vector<EmbeddingSet::Entry> entries;
  std::unordered_set<std::string> seen;
  std::string line;
  while (reader.next(line)) {
    const auto fail = [&](const std::string& message) -> FileFormatError {
      return FileFormatError(src(source), reader.line(), message);
    };
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw fail(fmt::format("malformed JSON: {}", e.what()));
    }
    if (!record.is_object()) throw fail("malformed JSON: record is not an object");
    const auto id_it = record.find("id");
    const auto tokens_it = record.find("tokens");
    const auto vectors_it = record.find("vectors");
    if (id_it == record.end() || !id_it->is_string() || id_it->get_ref<const std::string&>().empty()) {
      throw fail("malformed JSON: \"id\" must be a non-empty string");
    }
    if (tokens_it == record.end() || !tokens_it->is_array()) {
      throw fail("malformed JSON: \"tokens\" must be an array of strings");
    }
    if (vectors_it == record.end() || !vectors_it->is_array()) {
      throw fail("malformed JSON: \"vectors\" must be an array of number arrays");
    }
    std::string id = id_it->get<std::string>();
    if (!seen.insert(id).second) throw fail(fmt::format("duplicate image id \"{}\"", id));

    TokenEmbeddings embeddings;
    for (const auto& token : *tokens_it) {
      if (!token.is_string()) throw fail("malformed JSON: \"tokens\" must be an array of strings");
      embeddings.tokens.push_back(token.get<std::string>());
    }
    for (const auto& vector : *vectors_it) {
      if (!vector.is_array()) throw fail("malformed JSON: \"vectors\" must be an array of number arrays");
      std::vector<double> values;
      values.reserve(vector.size());
      for (const auto& x : vector) {
        if (!x.is_number()) throw fail("malformed JSON: vector component is not a number");
        values.push_back(x.get<double>());
      }
      if (!embeddings.vectors.empty() && values.size() != embeddings.vectors.front().size()) {
        throw fail(fmt::format("inconsistent dimension: {} vs {}", values.size(),
                               embeddings.vectors.front().size()));
      }
      embeddings.vectors.push_back(std::move(values));
    }
    if (embeddings.tokens.size() != embeddings.vectors.size()) {
      throw fail(fmt::format("length mismatch: {} tokens, {} vectors", embeddings.tokens.size(),
                             embeddings.vectors.size()));
    }
    entries.emplace_back(std::move(id), std::move(embeddings));
  }
  return EmbeddingSet(std::move(entries));
}

ConceptVocabulary parse_vocabulary(std::istream& in, std::string_view source) {
  CsvReader reader(in, source);
  std::vector<std::string> fields;
  std::vector<VocabularyEntry> entries;
  std::unordered_set<std::string> seen;
  bool first = true;
  while (reader.next(fields)) {
    if (std::exchange(first, false) && !fields.empty() && iequals(trim(fields[0]), "CUI")) continue;
    if (fields.empty() || fields.size() > 3) {
      throw FileFormatError(src(source), reader.line(),
                            fmt::format("expected CUI[,Name[,Frequency]], found {} fields",
                                        fields.size()));
    }
    VocabularyEntry entry{parse_cui(fields[0], src(source), reader.line()), std::nullopt, 0};
    if (!seen.insert(entry.id.str()).second) {
      throw FileFormatError(src(source), reader.line(),
                            fmt::format("duplicate CUI \"{}\"", entry.id.str()));
    }
    if (fields.size() >= 2 && !fields[1].empty()) entry.name = fields[1];
    if (fields.size() == 3 && !trim(fields[2]).empty()) {
      const std::string_view t = trim(fields[2]);
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), entry.frequency);
      if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw FileFormatError(src(source), reader.line(),
                              fmt::format("invalid frequency \"{}\"", fields[2]));
      }
    }
    entries.push_back(std::move(entry));
  }
  return ConceptVocabulary(std::move(entries));
}

EvalReport parse_report(std::istream& in, ReportFormat format, std::string_view source) {
  std::vector<ReportRow> rows;
  if (format == ReportFormat::Csv) {
    CsvReader reader(in, source);
    std::vector<std::string> header;
    if (!reader.next(header) || header.empty() || header[0] != "Configuration") {
      throw FileFormatError(src(source), 1, "missing \"Configuration,...\" header");
    }
    std::vector<std::string> fields;
    while (reader.next(fields)) {
      if (fields.size() != header.size()) {
        throw FileFormatError(src(source), reader.line(),
                              fmt::format("expected {} fields, found {}", header.size(),
                                          fields.size()));
      }
      ReportRow row{fields[0], {}};
      for (std::size_t i = 1; i < fields.size(); ++i) {
        row.metrics.emplace_back(header[i], parse_double(fields[i], reader));
      }
      rows.push_back(std::move(row));
    }
  } else {
    OrderedJson doc;
    try {
      doc = OrderedJson::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw FileFormatError(src(source), 1, fmt::format("malformed JSON: {}", e.what()));
    }
    if (!doc.is_array()) throw FileFormatError(src(source), 1, "report JSON must be an array");
    for (const auto& object : doc) {
      if (!object.is_object() || !object.contains("Configuration") ||
          !object["Configuration"].is_string()) {
        throw FileFormatError(src(source), 1, "report entry lacks a \"Configuration\" string");
      }
      ReportRow row{object["Configuration"].get<std::string>(), {}};
      for (const auto& [key, value] : object.items()) {
        if (key == "Configuration") continue;
        if (!value.is_number()) {
          throw FileFormatError(src(source), 1, fmt::format("metric \"{}\" is not a number", key));
        }
        row.metrics.emplace_back(key, value.get<double>());
      }
      rows.push_back(std::move(row));
    }
  }
  try {
    return EvalReport(std::move(rows));
  } catch (const ValidationError& e) {
    throw FileFormatError(src(source), 1, e.what());
  }
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_concept_predictions(const ConceptAnnotationSet& predictions, std::ostream& out) {
  for (const auto& [image_id, concepts] : predictions) {
    write_field(out, image_id);
    out << ',';
    bool first = true;
    for (const auto& cui : concepts) {
      if (!std::exchange(first, false)) out << ';';
      out << cui.str();
    }
    out << '\n';
  }
  check_sink(out);
}

void write_probability_matrix(const ProbabilityMatrix& matrix, std::ostream& out) {
  out << "ID";
  for (const auto& entry : matrix.concepts()) out << ',' << entry.id.str();
  out << '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    write_field(out, matrix.image_ids()[r]);
    for (double v : matrix.row(r)) out << ',' << format_double(v);
    out << '\n';
  }
  check_sink(out);
}

void write_captions(const CaptionCorpus& captions, std::ostream& out) {
  for (const auto& [image_id, caption] : captions) {
    write_field(out, image_id);
    out << ',';
    write_field(out, caption);
    out << '\n';
  }
  check_sink(out);
}

void write_token_embeddings(const EmbeddingSet& embeddings, std::ostream& out) {
  for (const auto& [image_id, record] : embeddings) {
    OrderedJson line;
    line["id"] = image_id;
    line["tokens"] = record.tokens;
    line["vectors"] = record.vectors;
    out << line.dump() << '\n';
  }
  check_sink(out);
}

void write_vocabulary(const ConceptVocabulary& vocabulary, std::ostream& out) {
  out << "CUI,Name,Frequency\n";
  for (const auto& entry : vocabulary) {
    out << entry.id.str() << ',';
    if (entry.name) write_field(out, *entry.name);
    out << ',' << entry.frequency << '\n';
  }
  check_sink(out);
}

void write_report(const EvalReport& report, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    out << "Configuration";
    for (const auto& name : report.metric_names()) {
      out << ',';
      write_field(out, name);
    }
    out << '\n';
    for (const auto& row : report.rows()) {
      write_field(out, row.label);
      for (const auto& [name, value] : row.metrics) out << fmt::format(",{:.5f}", value);
      out << '\n';
    }
  } else {
    OrderedJson doc = OrderedJson::array();
    for (const auto& row : report.rows()) {
      OrderedJson object;
      object["Configuration"] = row.label;
      for (const auto& [name, value] : row.metrics) object[name] = value;
      doc.push_back(std::move(object));
    }
    out << doc.dump(2) << '\n';
  }
  check_sink(out);
}

}  // namespace medcap::ingest
