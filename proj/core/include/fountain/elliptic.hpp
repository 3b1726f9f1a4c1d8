#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

#include "fountain/geometry.hpp"

namespace fountain::elliptic {

enum class HModel { decoupled, coupled, zero };

struct Config {
  double L = std::numbers::pi;
  int n_modes = 12;
  double p = 4.0;
  HModel h_model = HModel::decoupled;
  std::vector<int> k_range{2, 3, 4};
  std::uint64_t seed = 1;
};

// Coordinates are (u_1..u_n, v_1..v_n); u spans Y, v spans Z.
struct PairVector {
  Vector u;
  Vector v;
  static PairVector split(const Vector& w);
  Vector join() const;
  double norm() const { return std::sqrt(u.squaredNorm() + v.squaredNorm()); }
};

struct CoercivityReport {
  double a1 = 0.0;  // fitted H >= a1 (|u|^p + |v|^p) - a2
  double a2 = 0.0;
  bool bound_holds = false;
  bool rays_decrease = false;  // Phi(t w) -> -infinity along sampled Y_k rays
  int rays = 0;
};

struct PsReport {
  bool gated = false;  // true when the sequence is not a PS-type sequence
  double c1 = 0.0, c2 = 0.0, d1 = 0.0, d2 = 0.0;
  bool lp_bound_holds = false;
  bool norm_bound_holds = false;
  double max_gradient = 0.0;
};

struct Data;

class DirichletProblem {
 public:
  static DirichletProblem build(const Config& cfg);

  const Config& config() const;
  const GalerkinSpace& space() const;
  std::shared_ptr<const IndefiniteFunctional> functional() const { return functional_; }
  ProblemModel model() const;
  int quadrature_points() const;

  double energy(const Vector& w) const { return functional_->eval(w); }
  Vector gradient(const Vector& w) const { return functional_->grad(w); }

  // Norm of the residuals (Delta u - H_u, -Delta v - H_v) tested against the
  // basis, computed pointwise at the quadrature nodes.
  double el_residual(const Vector& w) const;

  // Max over samples of |p H - (u H_u + v H_v)| (zero for both models).
  double homogeneity_defect(int samples, std::uint64_t seed) const;

  CoercivityReport coercivity_check(int samples, std::uint64_t seed) const;
  PsReport ps_boundedness_check(const std::vector<Vector>& sequence,
                                double gradient_gate = 1e-2) const;

  // (x, u(x), v(x)) at `points` equispaced interior nodes.
  std::vector<std::array<double, 3>> sample(const Vector& w, int points) const;

 private:
  std::shared_ptr<const Data> data_;
  std::shared_ptr<const IndefiniteFunctional> functional_;
};

}  // namespace fountain::elliptic
