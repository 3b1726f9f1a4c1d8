#include <benchmark/benchmark.h>

#include "fountain/degree.hpp"

using namespace fountain;

namespace {

void BM_AntipodalDegree(benchmark::State& st) {
  const int m = static_cast<int>(st.range(0));
  const degree::FiniteMap f{[](const Vector& x) { return Vector(-x); },
                            [m](const Vector&) { return Matrix(-Matrix::Identity(m, m)); }, true};
  const auto ball = degree::Region::ball(Vector::Zero(m), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(degree::brouwer_degree(f, ball).degree);
}
BENCHMARK(BM_AntipodalDegree)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

degree::FiniteMap cubic() {
  return {[](const Vector& x) {
            Vector r(2);
            // z^3 - z/4 in complex form
            const double a = x[0], b = x[1];
            r << a * a * a - 3 * a * b * b - 0.25 * a, 3 * a * a * b - b * b * b - 0.25 * b;
            return r;
          },
          nullptr, true};
}

void BM_SignCount2d(benchmark::State& st) {
  const auto f = cubic();
  const auto disc = degree::Region::ball(Vector::Zero(2), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(degree::brouwer_degree(f, disc).degree);
}
BENCHMARK(BM_SignCount2d)->Unit(benchmark::kMillisecond);

void BM_Winding2d(benchmark::State& st) {
  const auto f = cubic();
  const auto disc = degree::Region::ball(Vector::Zero(2), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(degree::winding_degree_2d(f, disc).degree);
}
BENCHMARK(BM_Winding2d)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
