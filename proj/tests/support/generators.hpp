#pragma once

#include <cmath>
#include <random>

#include "fountain/spaces.hpp"

namespace fountain::testing {

// Deterministic generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return norm_(rng_); }

  Vector gaussian(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }
  Vector unit(int n) {
    Vector v = gaussian(n);
    return v / v.norm();
  }
  // Random scale spread over several decades, so norms of all sizes appear.
  Vector vector(int n) { return gaussian(n) * std::pow(10.0, uniform(-3.0, 3.0)); }
  Vector in_ball(int n, double radius) { return unit(n) * radius * std::pow(uniform(0.0, 1.0), 1.0 / n); }

  Vector in_yk(const GalerkinSpace& space, int k) {
    const Filtration f = space.filtration(k);
    Vector u = space.zero();
    u.head(f.dim_yk()) = vector(f.dim_yk());
    return u;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace fountain::testing
