#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fountain/geometry.hpp"

namespace fountain::schrodinger {

// c0 + c1 cos(freq x) on the periodic cell [0, 2 pi).
struct Profile {
  enum class Kind { constant, cosine };
  Kind kind = Kind::constant;
  double c0 = 0.0;
  double c1 = 0.0;
  int freq = 1;

  static Profile constant(double v) { return {Kind::constant, v, 0.0, 1}; }
  static Profile cosine(double c0, double c1, int freq) { return {Kind::cosine, c0, c1, freq}; }
  double operator()(double x) const;
  double max_value() const;
  double min_value() const;
};

struct Config {
  int dim = 1;
  int modes = 16;
  Profile potential = Profile::constant(-1.5);
  double p = 4.0;
  Profile amplitude = Profile::constant(1.0);
  double gap_tol = 1e-3;
  double alias_tol = 1e-10;
  std::vector<int> k_range{2, 3, 4};
  std::uint64_t seed = 1;
};

class GapViolation : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

struct GrowthReport {
  double eps = 0.0;
  double c_eps_required = 0.0;  // smallest constant the samples need
  double c_eps_used = 0.0;      // max of the amplitude
  bool bound_holds = false;
  double f4_max_violation = 0.0;  // max of p F - u f over samples
  bool f4_holds = false;
  int samples = 0;
};

struct Data;  // immutable tables shared by the closures

class PeriodicProblem {
 public:
  static PeriodicProblem build(const Config& cfg);

  const Config& config() const;
  const GalerkinSpace& space() const;
  std::shared_ptr<const IndefiniteFunctional> functional() const { return functional_; }
  ProblemModel model() const;

  // Eigenvalues of -d^2/dx^2 + V in coordinate order (Y block, then Z block).
  const Vector& eigenvalues() const;
  // Fourier index (0 = constant, 2j-1 = cos jx, 2j = sin jx) dominating each coordinate.
  const std::vector<int>& dominant_modes() const;
  int quadrature_points() const;

  double energy(const Vector& u) const { return functional_->eval(u); }
  Vector gradient(const Vector& u) const { return functional_->grad(u); }

  // Residual of (-d^2/dx^2 + V) u - f(x, u), assembled on the Fourier basis and
  // mapped to coordinates; returns its Euclidean norm.
  double el_residual(const Vector& u) const;
  // Integrals of u f(x,u) and F(x,u) by quadrature.
  double integral_uf(const Vector& u) const;
  double integral_F(const Vector& u) const;

  // L2-normalized Fourier coefficients of the function with these coordinates.
  Vector fourier_coefficients(const Vector& u) const;
  // u(x) at `points` equispaced nodes of [0, 2 pi).
  std::vector<std::pair<double, double>> sample(const Vector& u, int points) const;

  GrowthReport growth_bound_check(int samples, double eps, std::uint64_t seed) const;

 private:
  std::shared_ptr<const Data> data_;
  std::shared_ptr<const IndefiniteFunctional> functional_;
};

}  // namespace fountain::schrodinger
