#include <benchmark/benchmark.h>

#include "fountain/minimax.hpp"
#include "fountain/schrodinger.hpp"

using namespace fountain;

namespace {

const ProblemModel& model() {
  static const ProblemModel m = schrodinger::PeriodicProblem::build({}).model();
  return m;
}

void BM_Beta(benchmark::State& st) {
  const int k = static_cast<int>(st.range(0));
  for (auto _ : st) {
    benchmark::DoNotOptimize(compute_beta_k(model().phi().space(), k, model().lp).value);
  }
}
BENCHMARK(BM_Beta)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Geometry(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(compute_geometry(model(), 2).b_k);
}
BENCHMARK(BM_Geometry)->Unit(benchmark::kMillisecond);

void BM_MinimaxShort(benchmark::State& st) {
  const GeometryReport g = compute_geometry(model(), 2);
  MinimaxOptions o;
  o.mesh_n = static_cast<int>(st.range(0));
  o.axis_samples = 16;
  o.max_rounds = 4;
  for (auto _ : st) benchmark::DoNotOptimize(minimax_descend(model().phi(), g, o).c_k_estimate);
}
BENCHMARK(BM_MinimaxShort)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_Polish(benchmark::State& st) {
  const GeometryReport g = compute_geometry(model(), 2);
  for (auto _ : st) benchmark::DoNotOptimize(polish(model().phi(), g.d_argmax, 1e-6).grad_norm);
}
BENCHMARK(BM_Polish)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
