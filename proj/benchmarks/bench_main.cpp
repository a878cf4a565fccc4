#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "dsirs/errors.hpp"
#include "dsirs/exact.hpp"
#include "dsirs/fptas.hpp"
#include "dsirs/knapsack.hpp"
#include "dsirs/simulation.hpp"

namespace {

std::vector<std::int64_t> composition(std::mt19937_64& rng, std::int64_t total, std::size_t parts) {
  std::vector<std::int64_t> cuts{0, total};
  for (std::size_t k = 1; k < parts; ++k) cuts.push_back(static_cast<std::int64_t>(rng() % (total + 1)));
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::int64_t> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) out.push_back(cuts[k + 1] - cuts[k]);
  return out;
}

dsirs::Instance random_instance(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto u1 = composition(rng, 1000, n), u2 = composition(rng, 1000, n);
  dsirs::Instance inst;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t cap = std::max(u1[i], u2[i]);
    inst.resources.push_back({"r" + std::to_string(i + 1), u1[i], u2[i], static_cast<std::int64_t>(rng() % (cap + 1)),
                              dsirs::Cost(static_cast<std::int64_t>(rng() % 4))});
  }
  inst.budget = dsirs::Budget(static_cast<std::int64_t>(n / 2));
  return inst;
}

// Arguments: resources, 1/eps.
void BM_Fptas(benchmark::State& state) {
  const auto inst = random_instance(static_cast<std::size_t>(state.range(0)), 7);
  const dsirs::Rational eps(1, static_cast<unsigned long>(state.range(1)));
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(dsirs::fptas_awns_rho(inst, eps));
    } catch (const dsirs::Error&) {
    }
  }
}
BENCHMARK(BM_Fptas)->ArgsProduct({{4, 6, 8, 12, 16}, {2, 4, 8}})->Unit(benchmark::kMillisecond);

void BM_ExactAwns(benchmark::State& state) {
  const auto inst = random_instance(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(dsirs::solve_awns_exact(inst, dsirs::Objective::min_rho()));
    } catch (const dsirs::Error&) {
    }
  }
}
BENCHMARK(BM_ExactAwns)->DenseRange(8, 20, 4)->Unit(benchmark::kMillisecond);

// Arguments: items, 1/eps.
void BM_Knapsack(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::vector<dsirs::KnapsackItem> items;
  for (std::int64_t i = 0; i < state.range(0); ++i)
    items.push_back({static_cast<std::int64_t>(rng() % 100000), static_cast<std::int64_t>(1 + rng() % 100)});
  const dsirs::Rational eps(1, static_cast<unsigned long>(state.range(1)));
  const std::int64_t cap = 25 * state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(dsirs::knapsack_fptas(items, cap, eps));
}
BENCHMARK(BM_Knapsack)->ArgsProduct({{16, 64, 256}, {2, 10, 50}})->Unit(benchmark::kMicrosecond);

void BM_SweepInstance(benchmark::State& state) {
  const auto corpus = dsirs::synthesize_matrices(1, static_cast<std::uint64_t>(state.range(0)));
  const dsirs::SweepConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(dsirs::run_sweep(corpus, config));
}
BENCHMARK(BM_SweepInstance)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
