#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "fountain/spaces.hpp"
#include "fountain/types.hpp"

namespace fountain {

// phi(u) = 1/2 |Qu|^2 - 1/2 |Pu|^2 - psi(u) on a Galerkin space.
class IndefiniteFunctional {
 public:
  IndefiniteFunctional(GalerkinSpace space, ScalarField psi, VectorField psi_grad, bool even,
                       std::string name = {});

  // Optional analytic Hessian of psi; without it hessian() differences the gradient.
  IndefiniteFunctional& with_psi_hessian(MatrixField h);

  const GalerkinSpace& space() const { return space_; }
  bool even() const { return even_; }
  const std::string& name() const { return name_; }

  double quadratic_part(const Vector& u) const;
  double psi(const Vector& u) const { return psi_(u); }
  Vector psi_grad(const Vector& u) const { return psi_grad_(u); }

  double eval(const Vector& u) const;
  Vector grad(const Vector& u) const;
  Matrix hessian(const Vector& u) const;
  bool has_analytic_hessian() const { return static_cast<bool>(psi_hess_); }

  // Functional with psi == 0.
  static IndefiniteFunctional quadratic(const GalerkinSpace& space);

 private:
  GalerkinSpace space_;
  ScalarField psi_;
  VectorField psi_grad_;
  MatrixField psi_hess_;
  bool even_;
  std::string name_;
};

// Max over random samples of |grad - g_fd| / max(|grad|, 1), with g_fd the
// central-difference gradient at the given step.
double grad_check(const IndefiniteFunctional& phi, int samples, double step,
                  std::uint64_t seed = 7, double sample_radius = 1.0);

struct EvennessReport {
  double max_value_gap = 0.0;
  double max_grad_gap = 0.0;
  bool passed = false;
};

EvennessReport check_evenness(const IndefiniteFunctional& phi, int samples, std::uint64_t seed,
                              double tol = 1e-12, double sample_radius = 1.0);

}  // namespace fountain
