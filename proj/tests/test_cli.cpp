#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"
#include "medcap/ingest.hpp"
#include "support.hpp"

using medcap::cli::ExitStatus;

namespace {

struct Result {
  ExitStatus status;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const ExitStatus status = medcap::cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  testsupport::TempDir dir;
  std::string gold = dir.write("g.csv", "ID,CUIs\nim1,C1;C2\nim2,C3\nim3,\n");
  std::string probs = dir.write("p.csv", "ID,C1,C2,C3\nim1,0.9,0.46,0.1\nim2,0.2,0.3,0.7\nim3,0.1,0.2,0.3\n");
};

}  // namespace

TEST_F(Cli, SelfScoringIsPerfect) {
  const auto r = invoke({"score-concepts", "--gold", gold, "--pred", gold});
  EXPECT_EQ(r.status, ExitStatus::Success);
  EXPECT_EQ(r.out, "Configuration,Accuracy,Precision,Recall,F1\ng,1.00000,1.00000,1.00000,1.00000\n");
}

TEST_F(Cli, JsonReportReparses) {
  const auto out = dir.file("r.json");
  const auto r = invoke({"score-concepts", "--gold", gold, "--pred", gold, "--format", "json", "--out", out,
                         "--label", "self"});
  ASSERT_EQ(r.status, ExitStatus::Success) << r.err;
  std::istringstream in(dir.read("r.json"));
  const auto report = medcap::ingest::parse_report(in, medcap::ingest::ReportFormat::Json);
  EXPECT_EQ(report, medcap::EvalReport({{"self", {{"Accuracy", 1.0}, {"Precision", 1.0}, {"Recall", 1.0}, {"F1", 1.0}}}}));
}

TEST_F(Cli, SweepDefaultGridRows) {
  const auto r = invoke({"sweep", "--probs", probs, "--gold", gold});
  ASSERT_EQ(r.status, ExitStatus::Success) << r.err;
  for (const char* label : {"Threshold_0.45,", "Threshold_0.46,", "Threshold_0.47,", "Threshold_0.48,",
                            "Threshold_0.49,", "Threshold_0.5,", "Best,0.45000,"}) {
    EXPECT_NE(r.out.find(label), std::string::npos) << label;
  }
}

TEST_F(Cli, TauOutOfRangeIsUsageError) {
  const auto r = invoke({"apply-threshold", "--probs", probs, "--tau", "1.5", "--out", dir.file("x.csv")});
  EXPECT_EQ(r.status, ExitStatus::Usage);
  EXPECT_NE(r.err.find("tau must be in [0,1]"), std::string::npos);
  EXPECT_NE(r.err.find("Usage:"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).status, ExitStatus::Usage);
  EXPECT_EQ(invoke({"frobnicate"}).status, ExitStatus::Usage);
  EXPECT_EQ(invoke({"score-concepts", "--gold", gold}).status, ExitStatus::Usage);
  EXPECT_EQ(invoke({"score-concepts", "--gold", gold, "--pred", gold, "--bogus"}).status, ExitStatus::Usage);
  EXPECT_EQ(invoke({"score-concepts", "--gold", gold, "--pred", gold, "--format", "xml"}).status,
            ExitStatus::Usage);
  EXPECT_EQ(invoke({"--threads", "0", "score-concepts", "--gold", gold, "--pred", gold}).status,
            ExitStatus::Usage);
  EXPECT_EQ(invoke({"sweep", "--probs", probs, "--gold", gold, "--start", "0.6"}).status, ExitStatus::Usage);
  EXPECT_EQ(invoke({"postprocess", "--in", gold, "--out", dir.file("o"), "--max-block", "0"}).status,
            ExitStatus::Usage);
}

TEST_F(Cli, HelpShowsDefaults) {
  const auto r = invoke({"sweep", "--help"});
  EXPECT_EQ(r.status, ExitStatus::Success);
  EXPECT_NE(r.out.find("[0.45]"), std::string::npos);
  EXPECT_NE(r.out.find("[0.01]"), std::string::npos);
  EXPECT_NE(invoke({"postprocess", "--help"}).out.find("[4]"), std::string::npos);
}

TEST_F(Cli, FileErrorsCarryLocation) {
  const auto bad = dir.write("bad.csv", "ID,CUIs\nim1,C1\nim2,C1,C2\n");
  auto r = invoke({"score-concepts", "--gold", bad, "--pred", gold});
  EXPECT_EQ(r.status, ExitStatus::Failure);
  EXPECT_NE(r.err.find(bad + ":3:"), std::string::npos) << r.err;

  r = invoke({"score-concepts", "--gold", dir.file("missing.csv"), "--pred", gold});
  EXPECT_EQ(r.status, ExitStatus::Failure);
  EXPECT_NE(r.err.find("missing.csv"), std::string::npos);

  const auto partial = dir.write("partial.csv", "im1,C1\n");
  r = invoke({"score-concepts", "--gold", gold, "--pred", partial});
  EXPECT_EQ(r.status, ExitStatus::Failure);
  EXPECT_NE(r.err.find("im2"), std::string::npos);
}

TEST_F(Cli, ThresholdEnsembleFilterPipeline) {
  ASSERT_EQ(invoke({"ensemble", "--probs", probs, probs, "--out", dir.file("e.csv")}).status, ExitStatus::Success);
  EXPECT_EQ(dir.read("e.csv"), dir.read("p.csv"));
  ASSERT_EQ(invoke({"apply-threshold", "--probs", dir.file("e.csv"), "--tau", "0.45", "--out", dir.file("t.csv")}).status,
            ExitStatus::Success);
  EXPECT_EQ(dir.read("t.csv"), "im1,C1;C2\nim2,C3\nim3,\n");

  const auto train = dir.write("train.csv", "a,C1;C2\nb,C1\nc,C3\n");
  auto r = invoke({"filter-vocab", "--train", train, "--min-count", "2"});
  ASSERT_EQ(r.status, ExitStatus::Success) << r.err;
  EXPECT_EQ(r.out, "CUI,Name,Frequency\nC1,,2\n");
  r = invoke({"filter-vocab", "--train", train, "--min-count", "2", "--apply", dir.file("t.csv")});
  EXPECT_EQ(r.out, "im1,C1\nim2,\nim3,\n");
}

TEST_F(Cli, CaptionCommands) {
  const auto gen = dir.write("gen.csv", "im1,ct scan showing ct scan showing mass\n");
  const auto ref = dir.write("ref.csv", "im1,CT scan showing mass.\n");
  ASSERT_EQ(invoke({"postprocess", "--in", gen, "--out", dir.file("pp.csv")}).status, ExitStatus::Success);
  EXPECT_EQ(dir.read("pp.csv"), "im1,ct scan showing mass.\n");

  auto r = invoke({"score-captions", "--gold", ref, "--pred", gen, "--process"});
  ASSERT_EQ(r.status, ExitStatus::Success) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "Configuration,BLEU1,BLEU2,BLEU3,BLEU4,ROUGE,ROUGE-L,METEOR");
  EXPECT_NE(r.out.find("Process,1.00000,1.00000,1.00000,1.00000,1.00000,1.00000,"), std::string::npos);

  const auto cand = dir.write("c.jsonl", R"({"id":"im1","tokens":["a"],"vectors":[[1,0]]})" "\n");
  const auto refe = dir.write("r.jsonl", R"({"id":"im1","tokens":["a","b"],"vectors":[[1,0],[0,1]]})" "\n");
  r = invoke({"score-captions", "--gold", ref, "--pred", gen, "--embeddings", cand, "--ref-embeddings", refe});
  ASSERT_EQ(r.status, ExitStatus::Success) << r.err;
  EXPECT_EQ(r.out.rfind("Configuration,BERTScore,BLEU1", 0), 0u);
  EXPECT_NE(r.out.find("No-Process,0.66667,"), std::string::npos);
  EXPECT_EQ(invoke({"score-captions", "--gold", ref, "--pred", gen, "--embeddings", cand}).status,
            ExitStatus::Usage);

  r = invoke({"bertscore", "--cand-emb", cand, "--ref-emb", refe});
  ASSERT_EQ(r.status, ExitStatus::Success) << r.err;
  EXPECT_EQ(r.out, "Configuration,Precision,Recall,F1\nim1,1.00000,0.50000,0.66667\nMean,1.00000,0.50000,0.66667\n");
}
