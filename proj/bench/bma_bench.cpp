// Serial reference path vs OpenMP path for the corpus-level kernels.

#include "bma/pipeline.hpp"
#include "bma/prior_fit.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace bma;

namespace {

std::vector<Comparison> make_corpus(int n, int k) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> se_d(0.1, 0.4);
  std::vector<Comparison> corpus;
  for (int i = 0; i < n; ++i) {
    const double delta = std::normal_distribution<double>(0.0, 0.5)(rng);
    const double tau = std::gamma_distribution<double>(1.59, 0.26)(rng);
    Comparison c{"c" + std::to_string(i), {}, std::nullopt};
    for (int j = 0; j < k; ++j) {
      const double se = se_d(rng);
      c.studies.push_back({std::normal_distribution<double>(delta, std::sqrt(se * se + tau * tau))(rng), se, "s", {}});
    }
    corpus.push_back(std::move(c));
  }
  return corpus;
}

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_PrepareTraining(benchmark::State& state) {
  const auto corpus = make_corpus(400, 15);
  for (auto _ : state) benchmark::DoNotOptimize(prepare_training(corpus, 10, 0.01, mode(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_EvaluateCorpus(benchmark::State& state) {
  const auto corpus = make_corpus(8, 6);
  PipelineOptions opts;
  opts.execution = mode(state);
  const auto candidates = reference_candidates();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_corpus(corpus, candidates, opts));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_PrepareTraining)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateCorpus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
