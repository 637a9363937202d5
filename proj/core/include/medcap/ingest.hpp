#pragma once

// On-disk formats.
//
// Inputs
//   concept annotations   <image-id>,<cui1>;<cui2>;...     optional header ID,CUIs
//   probability matrix    ID,<cui1>,<cui2>,...  then  <image-id>,<float>,...
//   captions              <image-id>,<caption>             optional header ID,Caption
//   token embeddings      JSON lines {"id":..,"tokens":[..],"vectors":[[..],..]}
//   vocabulary            CUI,Name,Frequency
//
// Outputs
//   concept predictions   same as annotations, CUIs sorted, no header
//   evaluation report     CSV (5 decimals) or JSON (array of objects)
//
// CSV dialect: ',' separator, '"' quote with '""' escape, LF or CRLF on read,
// LF on write. A leading UTF-8 BOM is skipped. Blank lines are ignored.
// Parsers throw medcap::FileFormatError naming the 1-based line of the first
// bad record and stop reading there.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "medcap/types.hpp"

namespace medcap::ingest {

struct TokenEmbeddings {
  std::vector<std::string> tokens;
  std::vector<std::vector<double>> vectors;

  friend bool operator==(const TokenEmbeddings&, const TokenEmbeddings&) = default;
};

/// image id -> contextual token embeddings (not normalized).
using EmbeddingSet = ImageTable<TokenEmbeddings>;

enum class ReportFormat { Csv, Json };

ConceptAnnotationSet parse_concept_annotations(std::istream& in,
                                               std::string_view source = "<input>");
ProbabilityMatrix parse_probability_matrix(std::istream& in, std::string_view source = "<input>");
CaptionCorpus parse_captions(std::istream& in, std::string_view source = "<input>");
EmbeddingSet parse_token_embeddings(std::istream& in, std::string_view source = "<input>");
ConceptVocabulary parse_vocabulary(std::istream& in, std::string_view source = "<input>");
EvalReport parse_report(std::istream& in, ReportFormat format,
                        std::string_view source = "<input>");

void write_concept_predictions(const ConceptAnnotationSet& predictions, std::ostream& out);
/// Values use the shortest representation that parses back to the same double.
void write_probability_matrix(const ProbabilityMatrix& matrix, std::ostream& out);
void write_captions(const CaptionCorpus& captions, std::ostream& out);
void write_token_embeddings(const EmbeddingSet& embeddings, std::ostream& out);
void write_vocabulary(const ConceptVocabulary& vocabulary, std::ostream& out);
void write_report(const EvalReport& report, std::ostream& out, ReportFormat format);

/// Shortest round-trip decimal form of `value`.
std::string format_double(double value);

}  // namespace medcap::ingest
