#include <benchmark/benchmark.h>

#include <random>

#include "structsel/controllability.hpp"
#include "structsel/graph.hpp"
#include "structsel/ilp.hpp"
#include "structsel/incidence.hpp"
#include "structsel/selection.hpp"

using namespace structsel;

namespace {

// Chain x1 -> x2 -> ... -> xn with self-loops; input j actuates the source
// state and a few random states, so w is a single all-ones row.
StructuredSystem chain_system(int n, int m, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<Entry> a;
  for (int i = 0; i < n; ++i) {
    a.push_back({i, i});
    if (i > 0) a.push_back({i, i - 1});
  }
  std::vector<Entry> b;
  for (int j = 0; j < m; ++j) {
    b.push_back({0, j});
    for (int i = 1; i < n; ++i) {
      if (rng() % 5 == 0) b.push_back({i, j});
    }
  }
  std::vector<Rational> costs;
  for (int j = 0; j < m; ++j) costs.emplace_back(static_cast<int>(1 + rng() % 9));
  return StructuredSystem(SparsityPattern(n, n, a), SparsityPattern(n, m, b), costs);
}

void BM_MaxMatching(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  BipartiteGraph g{n, n, std::vector<std::vector<int>>(static_cast<std::size_t>(n))};
  for (auto& row : g.adj) {
    for (int r = 0; r < n; ++r) {
      if (rng() % 50 == 0) row.push_back(r);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(max_matching(g).size);
}
BENCHMARK(BM_MaxMatching)->Arg(100)->Arg(1000)->Arg(4000);

void BM_ControllabilityCheck(benchmark::State& state) {
  const auto sys = chain_system(static_cast<int>(state.range(0)), 8, 2);
  const auto all = all_inputs(sys.m());
  for (auto _ : state) benchmark::DoNotOptimize(is_structurally_controllable(sys, all).controllable);
}
BENCHMARK(BM_ControllabilityCheck)->Arg(100)->Arg(1000);

void BM_TotallyUnimodular(benchmark::State& state) {
  const int rows = static_cast<int>(state.range(0));
  // Interval matrix (consecutive ones): TU, so the search cannot stop early.
  IntMatrix m(static_cast<std::size_t>(rows), std::vector<int>(12, 0));
  for (int i = 0; i < rows; ++i) {
    for (int j = i % 12; j < std::min(12, i % 12 + 4); ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
  }
  for (auto _ : state) benchmark::DoNotOptimize(is_totally_unimodular(m).verdict);
}
BENCHMARK(BM_TotallyUnimodular)->Arg(6)->Arg(10)->Arg(14);

void BM_SimplexP1(benchmark::State& state) {
  const auto sys = chain_system(static_cast<int>(state.range(0)), 6, 3);
  const IlpModel model = build_p1(sys);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(model.lp).objective);
  state.counters["rows"] = model.num_rows();
  state.counters["cols"] = model.lp.num_vars;
}
BENCHMARK(BM_SimplexP1)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const auto sys = chain_system(12, static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force(sys).cost);
}
BENCHMARK(BM_BruteForce)->Arg(8)->Arg(14)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
