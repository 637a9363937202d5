#include <benchmark/benchmark.h>

#include <random>

#include "medcap/thresholding.hpp"

namespace {

struct Fixture {
  medcap::ProbabilityMatrix matrix;
  medcap::ConceptAnnotationSet gold;
};

Fixture make_fixture(std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<medcap::ConceptId> ids;
  for (std::size_t c = 0; c < cols; ++c) ids.emplace_back("C" + std::to_string(c));
  std::vector<std::string> images;
  std::vector<double> values;
  std::vector<std::pair<std::string, medcap::ConceptSet>> gold;
  for (std::size_t r = 0; r < rows; ++r) {
    images.push_back("img" + std::to_string(r));
    medcap::ConceptSet g;
    for (std::size_t c = 0; c < cols; ++c) {
      values.push_back(u(rng));
      if (u(rng) < 0.01) g.insert(ids[c]);
    }
    gold.emplace_back(images.back(), std::move(g));
  }
  return {medcap::ProbabilityMatrix(images, medcap::ConceptVocabulary::from_ids(ids), values),
          medcap::ConceptAnnotationSet(gold)};
}

void BM_Sweep(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), 500);
  for (auto _ : state) {
    benchmark::DoNotOptimize(medcap::thresholding::sweep_thresholds(f.matrix, f.gold, {}, 1));
  }
}
BENCHMARK(BM_Sweep)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Ensemble(benchmark::State& state) {
  const auto f = make_fixture(1000, 500);
  const std::vector<medcap::ProbabilityMatrix> models(static_cast<std::size_t>(state.range(0)), f.matrix);
  for (auto _ : state) benchmark::DoNotOptimize(medcap::thresholding::ensemble_mean(models));
}
BENCHMARK(BM_Ensemble)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
