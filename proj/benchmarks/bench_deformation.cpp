#include <benchmark/benchmark.h>

#include "fountain/deformation.hpp"

using namespace fountain;

namespace {

// Quadratic model with S a sphere in Y_2, the standard deformation setting.
struct Setup {
  GalerkinSpace space{3, 5};
  IndefiniteFunctional phi = IndefiniteFunctional::quadratic(space);
  deform::DeformationParams params{
      phi, 0.1, 0.01, 0.2, deform::InvariantSet::sphere(space.filtration(2).yk_indices(), 1.0, space.dim())};
};

void BM_FlowEndpoint(benchmark::State& st) {
  const Setup s;
  Vector u = s.space.zero();
  u[s.space.e_index(0)] = std::sqrt(0.5 + 0.1);
  u[s.space.theta_index(0)] = std::sqrt(0.5 - 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(deform::deform(s.params, u));
}
BENCHMARK(BM_FlowEndpoint)->Unit(benchmark::kMicrosecond);

void BM_PropertySuite(benchmark::State& st) {
  const Setup s;
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        deform::verify_deformation_properties(s.params, static_cast<int>(st.range(0)), 7).all_passed());
  }
}
BENCHMARK(BM_PropertySuite)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
