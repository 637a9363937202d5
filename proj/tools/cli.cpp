#include "cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "medcap/caption_metrics.hpp"
#include "medcap/caption_text.hpp"
#include "medcap/concept_scoring.hpp"
#include "medcap/errors.hpp"
#include "medcap/ingest.hpp"
#include "medcap/parallel.hpp"
#include "medcap/thresholding.hpp"

namespace medcap::cli {

namespace {

// Argument values that parse but make no sense; reported like CLI11 errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OpenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OpenError(fmt::format("cannot open '{}' for reading", path));
  return in;
}

template <typename Parser>
auto read_file(const std::string& path, Parser parse) {
  std::ifstream in = open_input(path);
  return parse(in, path);
}

// Renders into memory first so a failed run never leaves a half-written file.
template <typename Writer>
void emit(const std::string& out_path, std::ostream& out, Writer write) {
  std::ostringstream buffer;
  write(buffer);
  const std::string text = std::move(buffer).str();
  if (out_path.empty()) {
    out << text;
    out.flush();
    if (!out) throw WriteError("cannot write to output stream");
    return;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw WriteError(fmt::format("cannot open '{}' for writing", out_path));
  file << text;
  file.close();
  if (!file) throw WriteError(fmt::format("error writing '{}'", out_path));
}

ingest::ReportFormat report_format(const std::string& name) {
  return name == "json" ? ingest::ReportFormat::Json : ingest::ReportFormat::Csv;
}

std::vector<std::pair<std::string, double>> concept_metrics(const concepts::ConceptEvalResult& r) {
  return {{"Accuracy", r.accuracy}, {"Precision", r.precision}, {"Recall", r.recall}, {"F1", r.f1}};
}

struct Options {
  std::size_t threads = default_thread_count();
  std::string format = "csv";
  std::string out;
  std::string label;

  std::string gold, pred, probs, train, apply, input;
  std::vector<std::string> probs_list;
  double tau = 0.5;
  thresholding::SweepRange range;
  std::uint64_t min_count = 1;
  bool process = false;
  std::size_t max_block = 4;
  std::string cand_emb, ref_emb;
};

void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
}

int score_concepts(const Options& o, std::ostream& out, std::ostream& err) {
  const auto gold = read_file(o.gold, ingest::parse_concept_annotations);
  const auto pred = read_file(o.pred, ingest::parse_concept_annotations);
  const auto result = concepts::evaluate_concepts(gold, pred, o.threads);
  if (result.ignored_predictions > 0) {
    err << fmt::format("medcap: warning: {} predicted image(s) not in gold were ignored\n",
                       result.ignored_predictions);
  }
  const std::string label =
      o.label.empty() ? std::filesystem::path(o.pred).stem().string() : o.label;
  const EvalReport report({ReportRow{label, concept_metrics(result)}});
  emit(o.out, out, [&](std::ostream& s) { ingest::write_report(report, s, report_format(o.format)); });
  return 0;
}

int apply_threshold(const Options& o, std::ostream& out) {
  if (!(o.tau >= 0.0 && o.tau <= 1.0)) throw UsageError("tau must be in [0,1]");
  const auto matrix = read_file(o.probs, ingest::parse_probability_matrix);
  const auto predictions = thresholding::apply_threshold(matrix, ThresholdConfig(o.tau));
  emit(o.out, out, [&](std::ostream& s) { ingest::write_concept_predictions(predictions, s); });
  return 0;
}

int sweep(const Options& o, std::ostream& out) {
  try {
    thresholding::sweep_grid(o.range);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  const auto matrix = read_file(o.probs, ingest::parse_probability_matrix);
  const auto gold = read_file(o.gold, ingest::parse_concept_annotations);
  const auto result = thresholding::sweep_thresholds(matrix, gold, o.range, o.threads);

  std::vector<ReportRow> rows;
  const concepts::ConceptEvalResult* best = nullptr;
  for (const auto& point : result.grid) {
    auto metrics = concept_metrics(point.result);
    metrics.insert(metrics.begin(), {"Tau", point.tau});
    rows.push_back({"Threshold_" + ingest::format_double(point.tau), std::move(metrics)});
    if (point.tau == result.best_tau) best = &point.result;
  }
  auto best_metrics = concept_metrics(*best);
  best_metrics.insert(best_metrics.begin(), {"Tau", result.best_tau});
  rows.push_back({"Best", std::move(best_metrics)});
  const EvalReport report(std::move(rows));
  emit(o.out, out, [&](std::ostream& s) { ingest::write_report(report, s, report_format(o.format)); });
  return 0;
}

int ensemble(const Options& o, std::ostream& out) {
  std::vector<ProbabilityMatrix> matrices;
  matrices.reserve(o.probs_list.size());
  for (const auto& path : o.probs_list) {
    matrices.push_back(read_file(path, ingest::parse_probability_matrix));
  }
  const auto mean = thresholding::ensemble_mean(matrices);
  emit(o.out, out, [&](std::ostream& s) { ingest::write_probability_matrix(mean, s); });
  return 0;
}

int filter_vocab(const Options& o, std::ostream& out) {
  if (o.min_count == 0) throw UsageError("min-count must be at least 1");
  const auto training = read_file(o.train, ingest::parse_concept_annotations);
  const auto vocabulary = thresholding::filter_vocabulary(training, o.min_count);
  if (o.apply.empty()) {
    emit(o.out, out, [&](std::ostream& s) { ingest::write_vocabulary(vocabulary, s); });
    return 0;
  }
  const auto predictions = read_file(o.apply, ingest::parse_concept_annotations);
  const auto restricted = thresholding::restrict_predictions(predictions, vocabulary);
  emit(o.out, out, [&](std::ostream& s) { ingest::write_concept_predictions(restricted, s); });
  return 0;
}

int score_captions(const Options& o, std::ostream& out) {
  if (o.max_block == 0) throw UsageError("max-block must be at least 1");
  const auto gold = read_file(o.gold, ingest::parse_captions);
  const auto generated = read_file(o.pred, ingest::parse_captions);
  std::optional<metrics::CaptionEmbeddings> embeddings;
  if (!o.cand_emb.empty()) {
    embeddings.emplace();
    embeddings->candidates = read_file(o.cand_emb, ingest::parse_token_embeddings);
    embeddings->references = read_file(o.ref_emb, ingest::parse_token_embeddings);
  }
  metrics::CaptionEvalOptions options;
  options.postprocess = o.process;
  options.max_block = o.max_block;
  options.threads = o.threads;
  const auto result =
      metrics::evaluate_captions(gold, generated, embeddings ? &*embeddings : nullptr, options);

  const auto& c = result.corpus;
  std::vector<std::pair<std::string, double>> columns;
  if (c.bert) columns.emplace_back("BERTScore", c.bert->f1);
  columns.insert(columns.end(), {{"BLEU1", c.bleu1},
                                 {"BLEU2", c.bleu2},
                                 {"BLEU3", c.bleu3},
                                 {"BLEU4", c.bleu4},
                                 {"ROUGE", c.rouge1_f},
                                 {"ROUGE-L", c.rougeL_f},
                                 {"METEOR", c.meteor}});
  const std::string label = !o.label.empty() ? o.label : (o.process ? "Process" : "No-Process");
  const EvalReport report({ReportRow{label, std::move(columns)}});
  emit(o.out, out, [&](std::ostream& s) { ingest::write_report(report, s, report_format(o.format)); });
  return 0;
}

int postprocess(const Options& o, std::ostream& out) {
  if (o.max_block == 0) throw UsageError("max-block must be at least 1");
  const auto captions = read_file(o.input, ingest::parse_captions);
  std::vector<std::pair<std::string, std::string>> rows(captions.size());
  parallel_for(captions.size(), o.threads, [&](std::size_t i) {
    rows[i] = {captions[i].first, text::collapse_repetitions(captions[i].second, o.max_block)};
  });
  const CaptionCorpus collapsed(std::move(rows));
  emit(o.out, out, [&](std::ostream& s) { ingest::write_captions(collapsed, s); });
  return 0;
}

int bertscore(const Options& o, std::ostream& out) {
  const auto candidates = read_file(o.cand_emb, ingest::parse_token_embeddings);
  const auto references = read_file(o.ref_emb, ingest::parse_token_embeddings);
  if (references.empty()) throw ValidationError(fmt::format("{}: no reference embeddings", o.ref_emb));

  std::vector<metrics::PRF> scores(references.size());
  for (const auto& [id, emb] : references) {
    if (!candidates.contains(id)) {
      throw ValidationError(fmt::format("no candidate embeddings for image \"{}\"", id));
    }
  }
  parallel_for(references.size(), o.threads, [&](std::size_t i) {
    const auto& [id, ref] = references[i];
    try {
      scores[i] = metrics::bertscore_aggregate(candidates.find(id)->vectors, ref.vectors);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("image \"{}\": {}", id, e.what()));
    }
  });

  std::vector<ReportRow> rows;
  metrics::PRF sum;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto& s = scores[i];
    rows.push_back({references[i].first, {{"Precision", s.precision}, {"Recall", s.recall}, {"F1", s.f1}}});
    sum.precision += s.precision;
    sum.recall += s.recall;
    sum.f1 += s.f1;
  }
  const double n = static_cast<double>(scores.size());
  rows.push_back({"Mean", {{"Precision", sum.precision / n}, {"Recall", sum.recall / n}, {"F1", sum.f1 / n}}});
  const EvalReport report(std::move(rows));
  emit(o.out, out, [&](std::ostream& s) { ingest::write_report(report, s, report_format(o.format)); });
  return 0;
}

}  // namespace

ExitStatus run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Evaluation toolkit for medical image concept detection and caption prediction",
               "medcap"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", o.threads, "Worker threads (results do not depend on this)")
      ->check(CLI::PositiveNumber);

  auto* sc = app.add_subcommand("score-concepts", "Score predicted concept sets against gold");
  sc->add_option("--gold", o.gold, "Gold concept annotations")->required();
  sc->add_option("--pred", o.pred, "Predicted concepts")->required();
  sc->add_option("--out", o.out, "Report file (default: stdout)");
  sc->add_option("--label", o.label, "Report row label (default: prediction file name)");
  add_format(sc, o);

  auto* at = app.add_subcommand("apply-threshold", "Keep concepts scoring strictly above tau");
  at->add_option("--probs", o.probs, "Probability matrix")->required();
  at->add_option("--tau", o.tau, "Threshold in [0,1]")->required();
  at->add_option("--out", o.out, "Predictions file")->required();

  auto* sw = app.add_subcommand("sweep", "Evaluate a grid of thresholds and pick the best by F1");
  sw->add_option("--probs", o.probs, "Probability matrix")->required();
  sw->add_option("--gold", o.gold, "Gold concept annotations")->required();
  sw->add_option("--start", o.range.start, "First threshold");
  sw->add_option("--stop", o.range.stop, "Last threshold");
  sw->add_option("--step", o.range.step, "Grid spacing");
  sw->add_option("--out", o.out, "Report file (default: stdout)");
  add_format(sw, o);

  auto* en = app.add_subcommand("ensemble", "Average probability matrices");
  en->add_option("--probs", o.probs_list, "Probability matrices")->required()->expected(1, -1);
  en->add_option("--out", o.out, "Mean matrix file")->required();

  auto* fv = app.add_subcommand("filter-vocab", "Drop concepts rare in the training annotations");
  fv->add_option("--train", o.train, "Training concept annotations")->required();
  fv->add_option("--min-count", o.min_count, "Minimum number of annotated images")->required();
  fv->add_option("--apply", o.apply, "Predictions to restrict to the kept vocabulary");
  fv->add_option("--out", o.out, "Output file (default: stdout)");

  auto* cap = app.add_subcommand("score-captions", "Score generated captions against gold");
  cap->add_option("--gold", o.gold, "Gold captions")->required();
  cap->add_option("--pred", o.pred, "Generated captions")->required();
  cap->add_flag("--process", o.process, "Collapse repetitions before scoring");
  cap->add_option("--max-block", o.max_block, "Longest repeated block removed by --process");
  auto* cand = cap->add_option("--embeddings", o.cand_emb,
                               "Token embeddings of the captions as scored (enables BERTScore)");
  auto* ref = cap->add_option("--ref-embeddings", o.ref_emb, "Token embeddings of the gold captions");
  cand->needs(ref);
  ref->needs(cand);
  cap->add_option("--out", o.out, "Report file (default: stdout)");
  cap->add_option("--label", o.label, "Report row label (default: Process or No-Process)");
  add_format(cap, o);

  auto* pp = app.add_subcommand("postprocess", "Remove repeated token blocks and sentences");
  pp->add_option("--in", o.input, "Captions file")->required();
  pp->add_option("--out", o.out, "Output captions file")->required();
  pp->add_option("--max-block", o.max_block, "Longest repeated block removed");

  auto* bs = app.add_subcommand("bertscore", "BERTScore from precomputed token embeddings");
  bs->add_option("--cand-emb", o.cand_emb, "Candidate token embeddings")->required();
  bs->add_option("--ref-emb", o.ref_emb, "Reference token embeddings")->required();
  bs->add_option("--out", o.out, "Report file (default: stdout)");
  add_format(bs, o);

  auto usage = [&]() -> std::string {
    const auto chosen = app.get_subcommands();
    return chosen.empty() ? app.help() : chosen.front()->help();
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return ExitStatus::Success;
    }
    err << "medcap: error: " << e.what() << "\n\n" << usage();
    return ExitStatus::Usage;
  }

  try {
    if (sc->parsed()) return static_cast<ExitStatus>(score_concepts(o, out, err));
    if (at->parsed()) return static_cast<ExitStatus>(apply_threshold(o, out));
    if (sw->parsed()) return static_cast<ExitStatus>(sweep(o, out));
    if (en->parsed()) return static_cast<ExitStatus>(ensemble(o, out));
    if (fv->parsed()) return static_cast<ExitStatus>(filter_vocab(o, out));
    if (cap->parsed()) return static_cast<ExitStatus>(score_captions(o, out));
    if (pp->parsed()) return static_cast<ExitStatus>(postprocess(o, out));
    return static_cast<ExitStatus>(bertscore(o, out));
  } catch (const UsageError& e) {
    err << "medcap: error: " << e.what() << "\n\n" << usage();
    return ExitStatus::Usage;
  } catch (const std::exception& e) {
    // FileFormatError messages already carry path:line.
    err << "medcap: error: " << e.what() << '\n';
    return ExitStatus::Failure;
  }
}

}  // namespace medcap::cli
