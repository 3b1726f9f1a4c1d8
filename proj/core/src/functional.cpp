#include "fountain/functional.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace fountain {

namespace {

Vector sample_point(int n, std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = g(rng);
  return x * (radius * u(rng) / x.norm());
}

}  // namespace

IndefiniteFunctional::IndefiniteFunctional(GalerkinSpace space, ScalarField psi,
                                           VectorField psi_grad, bool even, std::string name)
    : space_(space),
      psi_(std::move(psi)),
      psi_grad_(std::move(psi_grad)),
      even_(even),
      name_(std::move(name)) {
  if (!psi_ || !psi_grad_) throw std::invalid_argument("IndefiniteFunctional: psi closures required");
}

IndefiniteFunctional& IndefiniteFunctional::with_psi_hessian(MatrixField h) {
  psi_hess_ = std::move(h);
  return *this;
}

double IndefiniteFunctional::quadratic_part(const Vector& u) const {
  const int ny = space_.dim_y();
  return 0.5 * u.tail(space_.dim_z()).squaredNorm() - 0.5 * u.head(ny).squaredNorm();
}

double IndefiniteFunctional::eval(const Vector& u) const {
  space_.check_vector(u);
  return quadratic_part(u) - psi_(u);
}

Vector IndefiniteFunctional::grad(const Vector& u) const {
  space_.check_vector(u);
  Vector g = -psi_grad_(u);
  g.head(space_.dim_y()) -= u.head(space_.dim_y());
  g.tail(space_.dim_z()) += u.tail(space_.dim_z());
  return g;
}

Matrix IndefiniteFunctional::hessian(const Vector& u) const {
  const int n = space_.dim();
  Matrix H(n, n);
  if (psi_hess_) {
    H = -psi_hess_(u);
  } else {
    Vector up = u;
    for (int i = 0; i < n; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(u[i]));
      up[i] = u[i] + h;
      const Vector gp = psi_grad_(up);
      up[i] = u[i] - h;
      const Vector gm = psi_grad_(up);
      up[i] = u[i];
      H.col(i) = -(gp - gm) / (2.0 * h);
    }
    H = 0.5 * (H + H.transpose()).eval();
  }
  for (int i = 0; i < space_.dim_y(); ++i) H(i, i) -= 1.0;
  for (int i = space_.dim_y(); i < n; ++i) H(i, i) += 1.0;
  return H;
}

IndefiniteFunctional IndefiniteFunctional::quadratic(const GalerkinSpace& space) {
  const int n = space.dim();
  return IndefiniteFunctional(
             space, [](const Vector&) { return 0.0; },
             [n](const Vector&) { return Vector(Vector::Zero(n)); }, true, "quadratic")
      .with_psi_hessian([n](const Vector&) { return Matrix(Matrix::Zero(n, n)); });
}

double grad_check(const IndefiniteFunctional& phi, int samples, double step, std::uint64_t seed,
                  double sample_radius) {
  if (step < 1e-8 || step > 1e-4) throw std::invalid_argument("grad_check: step outside [1e-8, 1e-4]");
  const int n = phi.space().dim();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector u = sample_point(n, rng, sample_radius);
    const Vector g = phi.grad(u);
    Vector fd(n);
    for (int i = 0; i < n; ++i) {
      const double ui = u[i];
      u[i] = ui + step;
      const double fp = phi.eval(u);
      u[i] = ui - step;
      const double fm = phi.eval(u);
      u[i] = ui;
      fd[i] = (fp - fm) / (2.0 * step);
    }
    worst = std::max(worst, (g - fd).norm() / std::max(g.norm(), 1.0));
  }
  return worst;
}

EvennessReport check_evenness(const IndefiniteFunctional& phi, int samples, std::uint64_t seed,
                              double tol, double sample_radius) {
  const int n = phi.space().dim();
  std::mt19937_64 rng(seed);
  EvennessReport rep;
  for (int s = 0; s < samples; ++s) {
    const Vector u = sample_point(n, rng, sample_radius);
    const double v = phi.eval(u);
    const Vector g = phi.grad(u);
    rep.max_value_gap = std::max(rep.max_value_gap, std::abs(v - phi.eval(-u)) / std::max(1.0, std::abs(v)));
    rep.max_grad_gap = std::max(rep.max_grad_gap, (g + phi.grad(-u)).norm() / std::max(1.0, g.norm()));
  }
  rep.passed = rep.max_value_gap <= tol && rep.max_grad_gap <= tol;
  return rep;
}

}  // namespace fountain
