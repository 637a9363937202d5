#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "medcap/caption_metrics.hpp"
#include "medcap/caption_text.hpp"

namespace {

const std::vector<std::string> kWords = {
    "ct", "scan", "shows", "showing", "mass", "masses", "left", "right", "lung", "lungs", "nodule",
    "nodules", "the", "of", "with", "a", "arrow", "contrast", "enhancing", "enhancement", "lesion",
    "lesions", "pleural", "effusion", "axial", "image", "images", "bone", "fracture", "fractures"};

medcap::text::TokenSequence random_sequence(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick(0, kWords.size() - 1);
  std::vector<std::string> w(n);
  for (auto& t : w) t = kWords[pick(rng)];
  return medcap::text::TokenSequence(std::move(w));
}

void BM_Bleu4(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto c = random_sequence(rng, static_cast<std::size_t>(state.range(0)));
  const auto r = random_sequence(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(medcap::metrics::bleu(c, r, 4));
}
BENCHMARK(BM_Bleu4)->Arg(10)->Arg(30)->Arg(100);

void BM_RougeL(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto c = random_sequence(rng, static_cast<std::size_t>(state.range(0)));
  const auto r = random_sequence(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(medcap::metrics::rouge(c, r, medcap::metrics::RougeVariant::RougeL));
}
BENCHMARK(BM_RougeL)->Arg(10)->Arg(30)->Arg(100);

void BM_Meteor(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto c = random_sequence(rng, static_cast<std::size_t>(state.range(0)));
  const auto r = random_sequence(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(medcap::metrics::meteor(c, r));
}
BENCHMARK(BM_Meteor)->Arg(10)->Arg(30)->Arg(60)->Arg(120);

void BM_BertScore(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::vector<double>> a(n, std::vector<double>(768));
  std::vector<std::vector<double>> b(n, std::vector<double>(768));
  for (auto* m : {&a, &b}) {
    for (auto& v : *m) {
      for (auto& x : v) x = g(rng);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(medcap::metrics::bertscore_aggregate(a, b));
}
BENCHMARK(BM_BertScore)->Arg(16)->Arg(64);

void BM_Collapse(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::string caption;
  const auto s = random_sequence(rng, 12).joined();
  for (int i = 0; i < state.range(0); ++i) caption += s + (i % 2 ? ". " : " ");
  for (auto _ : state) benchmark::DoNotOptimize(medcap::text::collapse_repetitions(caption));
}
BENCHMARK(BM_Collapse)->Arg(2)->Arg(8)->Arg(32);

}  // namespace
