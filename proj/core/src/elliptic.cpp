#include "fountain/elliptic.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace fountain::elliptic {

struct Data {
  Config cfg;
  GalerkinSpace space{1, 3};
  int n = 0;
  int nq = 0;
  Vector weights;
  Vector kappa2;  // Dirichlet eigenvalues (j pi / L)^2
  Matrix basis;   // nq x n: unit-H01 sine modes at the nodes

  struct HVal {
    double h, hu, hv, huu, huv, hvv;
  };

  HVal eval_h(double u, double v) const {
    const double p = cfg.p;
    switch (cfg.h_model) {
      case HModel::zero:
        return {0, 0, 0, 0, 0, 0};
      case HModel::decoupled: {
        const double au = std::abs(u), av = std::abs(v);
        const double pu = std::pow(au, p - 2.0), pv = std::pow(av, p - 2.0);
        return {(pu * au * au + pv * av * av) / p, pu * u, pv * v, (p - 1.0) * pu, 0.0,
                (p - 1.0) * pv};
      }
      case HModel::coupled: {
        const double s = u * u + v * v;
        if (s == 0.0) return {0, 0, 0, 0, 0, 0};
        const double s1 = std::pow(s, 0.5 * p - 1.0);
        const double s2 = s1 / s;
        return {s1 * s / p, s1 * u, s1 * v, s1 + (p - 2.0) * s2 * u * u, (p - 2.0) * s2 * u * v,
                s1 + (p - 2.0) * s2 * v * v};
      }
    }
    return {0, 0, 0, 0, 0, 0};
  }

  double psi(const Vector& w) const {
    const Vector u = basis * w.head(n);
    const Vector v = basis * w.tail(n);
    double s = 0.0;
    for (int q = 0; q < nq; ++q) s += weights[q] * eval_h(u[q], v[q]).h;
    return s;
  }
  Vector psi_grad(const Vector& w) const {
    const Vector u = basis * w.head(n);
    const Vector v = basis * w.tail(n);
    Vector fu(nq), fv(nq);
    for (int q = 0; q < nq; ++q) {
      const HVal h = eval_h(u[q], v[q]);
      fu[q] = weights[q] * h.hu;
      fv[q] = weights[q] * h.hv;
    }
    Vector g(2 * n);
    g.head(n) = basis.transpose() * fu;
    g.tail(n) = basis.transpose() * fv;
    return g;
  }
  Matrix psi_hessian(const Vector& w) const {
    const Vector u = basis * w.head(n);
    const Vector v = basis * w.tail(n);
    Vector duu(nq), duv(nq), dvv(nq);
    for (int q = 0; q < nq; ++q) {
      const HVal h = eval_h(u[q], v[q]);
      duu[q] = weights[q] * h.huu;
      duv[q] = weights[q] * h.huv;
      dvv[q] = weights[q] * h.hvv;
    }
    Matrix H(2 * n, 2 * n);
    H.topLeftCorner(n, n) = basis.transpose() * duu.asDiagonal() * basis;
    H.topRightCorner(n, n) = basis.transpose() * duv.asDiagonal() * basis;
    H.bottomLeftCorner(n, n) = H.topRightCorner(n, n).transpose();
    H.bottomRightCorner(n, n) = basis.transpose() * dvv.asDiagonal() * basis;
    return H;
  }
  double lp_power(const Vector& w) const {
    const Vector u = basis * w.head(n);
    const Vector v = basis * w.tail(n);
    double s = 0.0;
    for (int q = 0; q < nq; ++q) {
      s += weights[q] * (std::pow(std::abs(u[q]), cfg.p) + std::pow(std::abs(v[q]), cfg.p));
    }
    return s;
  }
  Vector lp_power_grad(const Vector& w) const {
    const Vector u = basis * w.head(n);
    const Vector v = basis * w.tail(n);
    Vector fu(nq), fv(nq);
    for (int q = 0; q < nq; ++q) {
      fu[q] = weights[q] * cfg.p * std::pow(std::abs(u[q]), cfg.p - 2.0) * u[q];
      fv[q] = weights[q] * cfg.p * std::pow(std::abs(v[q]), cfg.p - 2.0) * v[q];
    }
    Vector g(2 * n);
    g.head(n) = basis.transpose() * fu;
    g.tail(n) = basis.transpose() * fv;
    return g;
  }
};

namespace {

Matrix sine_modes(const Config& cfg, const Vector& x) {
  Matrix S(x.size(), cfg.n_modes);
  const double norm = std::sqrt(cfg.L / 2.0);
  for (int j = 1; j <= cfg.n_modes; ++j) {
    const double kj = j * std::numbers::pi / cfg.L;
    for (Eigen::Index q = 0; q < x.size(); ++q) S(q, j - 1) = std::sin(kj * x[q]) / (kj * norm);
  }
  return S;
}

}  // namespace

PairVector PairVector::split(const Vector& w) {
  const Eigen::Index n = w.size() / 2;
  return {w.head(n), w.tail(n)};
}

Vector PairVector::join() const {
  Vector w(u.size() + v.size());
  w << u, v;
  return w;
}

const Config& DirichletProblem::config() const { return data_->cfg; }
const GalerkinSpace& DirichletProblem::space() const { return data_->space; }
int DirichletProblem::quadrature_points() const { return data_->nq; }

DirichletProblem DirichletProblem::build(const Config& cfg) {
  if (!(cfg.L > 0.0)) throw ConfigError("domain length L must be positive");
  if (cfg.n_modes < 3) throw ConfigError("n_modes must be >= 3");
  if (!(cfg.p > 2.0)) throw ConfigError("p must exceed 2");
  auto d = std::make_shared<Data>();
  d->cfg = cfg;
  d->n = cfg.n_modes;
  d->nq = 4 * cfg.n_modes;
  d->space = GalerkinSpace(cfg.n_modes, cfg.n_modes);
  d->weights.resize(d->nq);
  Vector x(d->nq);
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(d->nq);
  if (table == nullptr) throw InternalError("Gauss-Legendre table allocation failed");
  for (int q = 0; q < d->nq; ++q) {
    double xi = 0.0, wi = 0.0;
    gsl_integration_glfixed_point(0.0, cfg.L, static_cast<size_t>(q), &xi, &wi, table);
    x[q] = xi;
    d->weights[q] = wi;
  }
  gsl_integration_glfixed_table_free(table);
  d->basis = sine_modes(cfg, x);
  d->kappa2.resize(d->n);
  for (int j = 1; j <= d->n; ++j) {
    const double kj = j * std::numbers::pi / cfg.L;
    d->kappa2[j - 1] = kj * kj;
  }
  DirichletProblem prob;
  prob.data_ = d;
  std::shared_ptr<const Data> cd = d;
  auto phi = std::make_shared<IndefiniteFunctional>(
      d->space, [cd](const Vector& w) { return cd->psi(w); },
      [cd](const Vector& w) { return cd->psi_grad(w); }, true, "elliptic");
  phi->with_psi_hessian([cd](const Vector& w) { return cd->psi_hessian(w); });
  prob.functional_ = phi;
  return prob;
}

ProblemModel DirichletProblem::model() const {
  ProblemModel m;
  m.functional = functional_;
  std::shared_ptr<const Data> cd = data_;
  const double p = data_->cfg.p;
  m.lp.p = p;
  m.lp.power = [cd](const Vector& w) { return cd->lp_power(w); };
  m.lp.power_grad = [cd](const Vector& w) { return cd->lp_power_grad(w); };
  // On Z the model H is |v|^p / p, i.e. c |v|^p with c = 1/p.
  m.growth_c = 1.0 / p;
  const double c = m.growth_c;
  const double area = data_->cfg.L;
  m.b_lower_bound = [p, c, area](double beta) {
    return (0.5 - 1.0 / p) * std::pow(c * p * std::pow(beta, p), 2.0 / (2.0 - p)) - c * area;
  };
  const DirichletProblem self = *this;
  m.el_residual = [self](const Vector& w) { return self.el_residual(w); };
  m.name = "elliptic";
  return m;
}

double DirichletProblem::el_residual(const Vector& w) const {
  const Data& d = *data_;
  const Vector a = w.head(d.n);
  const Vector b = w.tail(d.n);
  const Vector u = d.basis * a;
  const Vector v = d.basis * b;
  // Laplacians at the nodes from the sine expansion.
  const Vector lap_u = -(d.basis * d.kappa2.cwiseProduct(a));
  const Vector lap_v = -(d.basis * d.kappa2.cwiseProduct(b));
  Vector ru(d.nq), rv(d.nq);
  for (int q = 0; q < d.nq; ++q) {
    const Data::HVal h = d.eval_h(u[q], v[q]);
    ru[q] = d.weights[q] * (lap_u[q] - h.hu);
    rv[q] = d.weights[q] * (-lap_v[q] - h.hv);
  }
  const Vector pu = d.basis.transpose() * ru;
  const Vector pv = d.basis.transpose() * rv;
  return std::sqrt(pu.squaredNorm() + pv.squaredNorm());
}

double DirichletProblem::homogeneity_defect(int samples, std::uint64_t seed) const {
  const Data& d = *data_;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double u = uni(rng), v = uni(rng);
    const Data::HVal h = d.eval_h(u, v);
    worst = std::max(worst, std::abs(d.cfg.p * h.h - (u * h.hu + v * h.hv)));
  }
  return worst;
}

CoercivityReport DirichletProblem::coercivity_check(int samples, std::uint64_t seed) const {
  const Data& d = *data_;
  const double p = d.cfg.p;
  CoercivityReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  rep.a1 = std::numeric_limits<double>::infinity();
  std::vector<std::array<double, 2>> pts;
  for (int s = 0; s < samples; ++s) {
    const double u = uni(rng), v = uni(rng);
    const double lp = std::pow(std::abs(u), p) + std::pow(std::abs(v), p);
    if (lp > 0.0) rep.a1 = std::min(rep.a1, d.eval_h(u, v).h / lp);
    pts.push_back({u, v});
  }
  rep.a2 = 0.0;
  for (const auto& pt : pts) {
    const double lp = std::pow(std::abs(pt[0]), p) + std::pow(std::abs(pt[1]), p);
    rep.a2 = std::max(rep.a2, rep.a1 * lp - d.eval_h(pt[0], pt[1]).h);
  }
  rep.bound_holds = rep.a1 > 0.0;

  // Rays in Y_k for each configured level.
  std::normal_distribution<double> g(0.0, 1.0);
  rep.rays_decrease = true;
  const IndefiniteFunctional& phi = *functional_;
  for (int k : d.cfg.k_range) {
    const Filtration f = d.space.filtration(k);
    for (int r = 0; r < 8; ++r) {
      Vector w = Vector::Zero(d.space.dim());
      for (int i = 0; i < f.dim_yk(); ++i) w[i] = g(rng);
      w.normalize();
      const double base = phi.eval(w);
      bool dropped = false;
      for (double t = 2.0; t <= 1e6; t *= 2.0) {
        if (phi.eval(t * w) < base - 1.0) {
          dropped = true;
          break;
        }
      }
      ++rep.rays;
      rep.rays_decrease = rep.rays_decrease && dropped;
    }
  }
  return rep;
}

PsReport DirichletProblem::ps_boundedness_check(const std::vector<Vector>& sequence,
                                                double gradient_gate) const {
  PsReport rep;
  if (sequence.empty()) return rep;
  const IndefiniteFunctional& phi = *functional_;
  std::vector<double> norms, lps;
  for (const Vector& w : sequence) {
    rep.max_gradient = std::max(rep.max_gradient, phi.grad(w).norm());
    norms.push_back(w.norm());
    lps.push_back(data_->lp_power(w));
  }
  if (rep.max_gradient > gradient_gate) {
    rep.gated = true;
    return rep;
  }
  // Least-squares slope, then the smallest intercept making every row hold.
  auto fit = [&](const std::vector<double>& y, double& slope, double& icpt) {
    const double n = static_cast<double>(norms.size());
    const double mx = std::accumulate(norms.begin(), norms.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < norms.size(); ++i) {
      sxy += (norms[i] - mx) * (y[i] - my);
      sxx += (norms[i] - mx) * (norms[i] - mx);
    }
    slope = sxx > 0.0 ? std::max(0.0, sxy / sxx) : 0.0;
    icpt = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < norms.size(); ++i) icpt = std::max(icpt, y[i] - slope * norms[i]);
  };
  fit(lps, rep.c1, rep.c2);
  std::vector<double> sq;
  for (double n : norms) sq.push_back(n * n);
  fit(sq, rep.d1, rep.d2);
  rep.lp_bound_holds = std::isfinite(rep.c1) && std::isfinite(rep.c2);
  rep.norm_bound_holds = std::isfinite(rep.d1) && std::isfinite(rep.d2);
  return rep;
}

std::vector<std::array<double, 3>> DirichletProblem::sample(const Vector& w, int points) const {
  const Data& d = *data_;
  Vector x(points);
  for (int i = 0; i < points; ++i) x[i] = d.cfg.L * (i + 1) / (points + 1);
  const Matrix S = sine_modes(d.cfg, x);
  const Vector u = S * w.head(d.n);
  const Vector v = S * w.tail(d.n);
  std::vector<std::array<double, 3>> out(points);
  for (int i = 0; i < points; ++i) out[i] = {x[i], u[i], v[i]};
  return out;
}

}  // namespace fountain::elliptic
