#include <benchmark/benchmark.h>

#include <random>

#include "fountain/elliptic.hpp"
#include "fountain/schrodinger.hpp"

using namespace fountain;

namespace {

Vector random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

void BM_SchrodingerEnergy(benchmark::State& st) {
  schrodinger::Config c;
  c.modes = static_cast<int>(st.range(0));
  const auto prob = schrodinger::PeriodicProblem::build(c);
  const Vector u = random_vector(prob.space().dim(), 1);
  for (auto _ : st) benchmark::DoNotOptimize(prob.energy(u));
}
BENCHMARK(BM_SchrodingerEnergy)->Arg(16)->Arg(32)->Arg(64);

void BM_SchrodingerGradient(benchmark::State& st) {
  schrodinger::Config c;
  c.modes = static_cast<int>(st.range(0));
  const auto prob = schrodinger::PeriodicProblem::build(c);
  const Vector u = random_vector(prob.space().dim(), 2);
  for (auto _ : st) benchmark::DoNotOptimize(prob.gradient(u));
}
BENCHMARK(BM_SchrodingerGradient)->Arg(16)->Arg(32)->Arg(64);

void BM_SchrodingerHessian(benchmark::State& st) {
  const auto prob = schrodinger::PeriodicProblem::build({});
  const Vector u = random_vector(prob.space().dim(), 3);
  for (auto _ : st) benchmark::DoNotOptimize(prob.functional()->hessian(u));
}
BENCHMARK(BM_SchrodingerHessian);

void BM_EllipticGradient(benchmark::State& st) {
  elliptic::Config c;
  c.n_modes = static_cast<int>(st.range(0));
  c.h_model = st.range(1) ? elliptic::HModel::coupled : elliptic::HModel::decoupled;
  const auto prob = elliptic::DirichletProblem::build(c);
  const Vector w = random_vector(prob.space().dim(), 4);
  for (auto _ : st) benchmark::DoNotOptimize(prob.gradient(w));
}
BENCHMARK(BM_EllipticGradient)->Args({12, 0})->Args({12, 1})->Args({24, 0})->Args({24, 1});

}  // namespace

BENCHMARK_MAIN();
