// Serial reference vs OpenMP kernels on the shapes the pipeline produces:
// 40-dimensional document vectors and flagged-event attribute rows.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "holmes/kernels.hpp"
#include "holmes/novelty.hpp"

using namespace holmes;

namespace {

PointMatrix points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  PointMatrix m(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : m.row(i)) x = g(rng);
  }
  return m;
}

kernels::Execution mode(const benchmark::State& state) {
  return state.range(1) == 0 ? kernels::Execution::serial : kernels::Execution::parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(1) == 0 ? "serial" : "omp");
}

void BM_KnnSelf(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)), 40, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::knn_self(pts, 20, mode(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  label(state);
}

void BM_KnnQuery(benchmark::State& state) {
  const auto train = points(static_cast<std::size_t>(state.range(0)), 40, 2);
  const auto queries = points(static_cast<std::size_t>(state.range(0)), 40, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::knn_query(train, queries, 20, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  label(state);
}

void BM_FitAndScore(benchmark::State& state) {
  const auto train = points(static_cast<std::size_t>(state.range(0)), 40, 4);
  const auto queries = points(static_cast<std::size_t>(state.range(0)), 40, 5);
  NoveltyParams p;
  for (auto _ : state) {
    const auto model = fit_novelty(train, p, mode(state));
    benchmark::DoNotOptimize(model.decision_function(queries, mode(state)));
  }
  label(state);
}

void BM_AttributeMatches(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(6);
  std::vector<std::string> ips, senders, subjects;
  for (std::size_t i = 0; i < n; ++i) {
    ips.push_back("10.0." + std::to_string(rng() % 40) + "." + std::to_string(rng() % 250));
    senders.push_back("user" + std::to_string(rng() % (n / 2 + 1)) + "@example.com");
    subjects.push_back("subject " + std::to_string(rng() % (n / 3 + 1)));
  }
  std::vector<AttributeRow> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back({ips[i], senders[i], subjects[i]});
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::attribute_matches(rows, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) / 2);
  label(state);
}

}  // namespace

BENCHMARK(BM_KnnSelf)->ArgsProduct({{1000, 5000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnQuery)->ArgsProduct({{1000, 5000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitAndScore)->ArgsProduct({{2000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AttributeMatches)->ArgsProduct({{500, 2000}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
