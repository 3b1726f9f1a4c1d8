#include "fountain/synthetic.hpp"

#include <cmath>

namespace fountain::synthetic {

namespace {

double power_sum(const Vector& u, double p) {
  double s = 0.0;
  for (double x : u) s += std::pow(std::abs(x), p);
  return s;
}

Vector power_grad(const Vector& u, double p) {
  Vector g(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) g[i] = p * std::pow(std::abs(u[i]), p - 2.0) * u[i];
  return g;
}

}  // namespace

CoordinateProblem CoordinateProblem::build(const Config& cfg) {
  if (!(cfg.p > 2.0)) throw ConfigError("synthetic: p must exceed 2");
  CoordinateProblem out;
  out.cfg_ = cfg;
  const GalerkinSpace space(cfg.dim_y, cfg.dim_z);
  const double p = cfg.p;
  auto phi = std::make_shared<IndefiniteFunctional>(
      space, [p](const Vector& u) { return power_sum(u, p) / p; },
      [p](const Vector& u) { return Vector(power_grad(u, p) / p); }, true, "synthetic");
  phi->with_psi_hessian([p](const Vector& u) {
    Vector d(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) d[i] = (p - 1.0) * std::pow(std::abs(u[i]), p - 2.0);
    return Matrix(d.asDiagonal());
  });
  out.functional_ = std::move(phi);
  return out;
}

ProblemModel CoordinateProblem::model() const {
  ProblemModel m;
  m.functional = functional_;
  const double p = cfg_.p;
  m.lp.p = p;
  m.lp.power = [p](const Vector& u) { return power_sum(u, p); };
  m.lp.power_grad = [p](const Vector& u) { return power_grad(u, p); };
  m.growth_c = 1.0 / p;
  const double c = m.growth_c;
  m.b_lower_bound = [p, c](double beta) {
    return (0.5 - 1.0 / p) * std::pow(c * p * std::pow(beta, p), 2.0 / (2.0 - p));
  };
  // Coordinates are the function values here, so the residual is the gradient itself.
  auto phi = functional_;
  m.el_residual = [phi](const Vector& u) { return phi->grad(u).norm(); };
  m.name = "synthetic";
  return m;
}

}  // namespace fountain::synthetic
