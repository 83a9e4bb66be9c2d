// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "tg/eigen_sym.hpp"
#include "tg/group.hpp"
#include "tg/kernels.hpp"
#include "tg/schreier.hpp"
#include "tg/spectrum.hpp"

namespace {

using namespace tg;

const Group& gg() {
  static const Group g = builtin("Gg");
  return g;
}

const Group& fgg() {
  static const Group g = builtin("FGg");
  return g;
}

void BM_level_perm_serial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  StateId f = gg().eval(gg().parse("abcadacab"));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::level_permutation_serial(gg().pool(), f, n));
}

void BM_level_perm_parallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  StateId f = gg().eval(gg().parse("abcadacab"));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::level_permutation_parallel(gg().pool(), f, n));
}

void BM_diameter_serial(benchmark::State& st) {
  auto adj = kernels::adjacency_from_tables(schreier_graph(fgg(), static_cast<std::size_t>(st.range(0))).perms);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::diameter_serial(adj));
}

void BM_diameter_parallel(benchmark::State& st) {
  auto adj = kernels::adjacency_from_tables(schreier_graph(fgg(), static_cast<std::size_t>(st.range(0))).perms);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::diameter_parallel(adj));
}

void BM_eigen_serial(benchmark::State& st) {
  auto g = schreier_graph(gg(), static_cast<std::size_t>(st.range(0)));
  auto m = laplace_matrix(g);
  for (auto _ : st) benchmark::DoNotOptimize(symmetric_eigenvalues_serial(m, g.vertex_count()));
}

void BM_eigen_parallel(benchmark::State& st) {
  auto g = schreier_graph(gg(), static_cast<std::size_t>(st.range(0)));
  auto m = laplace_matrix(g);
  for (auto _ : st) benchmark::DoNotOptimize(symmetric_eigenvalues_parallel(m, g.vertex_count()));
}

}  // namespace

BENCHMARK(BM_level_perm_serial)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_level_perm_parallel)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_diameter_serial)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_diameter_parallel)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eigen_serial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eigen_parallel)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
