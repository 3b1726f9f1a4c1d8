#include "fountain/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace fountain::schrodinger {

double Profile::operator()(double x) const {
  return kind == Kind::constant ? c0 : c0 + c1 * std::cos(freq * x);
}
double Profile::max_value() const { return kind == Kind::constant ? c0 : c0 + std::abs(c1); }
double Profile::min_value() const { return kind == Kind::constant ? c0 : c0 - std::abs(c1); }

struct Data {
  Config cfg;
  GalerkinSpace space{1, 3};
  int nf = 0;       // Fourier basis size 2M+1
  int nq = 0;       // quadrature nodes
  double w = 0.0;   // quadrature weight 2 pi / nq
  Matrix fourier;   // nq x nf: L2-normalized Fourier basis at the nodes
  Vector stiffness;  // j^2 per Fourier index
  Vector potential;  // V at the nodes
  Vector amplitude;  // a at the nodes
  Matrix transform;  // nf x n: Fourier coefficients of the scaled eigenbasis
  Matrix basis;      // nq x n: scaled eigenbasis at the nodes
  Vector eigenvalues;
  std::vector<int> dominant;

  Vector values(const Vector& c) const { return basis * c; }
  double psi(const Vector& c) const {
    const Vector u = values(c);
    const double p = cfg.p;
    double s = 0.0;
    for (int q = 0; q < nq; ++q) s += amplitude[q] * std::pow(std::abs(u[q]), p);
    return w * s / p;
  }
  Vector psi_grad(const Vector& c) const {
    const Vector u = values(c);
    Vector f(nq);
    for (int q = 0; q < nq; ++q) f[q] = w * amplitude[q] * std::pow(std::abs(u[q]), cfg.p - 2.0) * u[q];
    return basis.transpose() * f;
  }
  Matrix psi_hessian(const Vector& c) const {
    const Vector u = values(c);
    Vector d(nq);
    for (int q = 0; q < nq; ++q) {
      d[q] = w * amplitude[q] * (cfg.p - 1.0) * std::pow(std::abs(u[q]), cfg.p - 2.0);
    }
    return basis.transpose() * d.asDiagonal() * basis;
  }
  double lp_power(const Vector& c) const {
    const Vector u = values(c);
    double s = 0.0;
    for (int q = 0; q < nq; ++q) s += std::pow(std::abs(u[q]), cfg.p);
    return w * s;
  }
  Vector lp_power_grad(const Vector& c) const {
    const Vector u = values(c);
    Vector f(nq);
    for (int q = 0; q < nq; ++q) f[q] = w * cfg.p * std::pow(std::abs(u[q]), cfg.p - 2.0) * u[q];
    return basis.transpose() * f;
  }
};

namespace {

Matrix fourier_at(int M, const Vector& x) {
  const int nf = 2 * M + 1;
  Matrix F(x.size(), nf);
  const double c0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double c1 = 1.0 / std::sqrt(std::numbers::pi);
  for (Eigen::Index q = 0; q < x.size(); ++q) {
    F(q, 0) = c0;
    for (int j = 1; j <= M; ++j) {
      F(q, 2 * j - 1) = c1 * std::cos(j * x[q]);
      F(q, 2 * j) = c1 * std::sin(j * x[q]);
    }
  }
  return F;
}

Vector nodes(int nq) {
  Vector x(nq);
  for (int q = 0; q < nq; ++q) x[q] = 2.0 * std::numbers::pi * q / nq;
  return x;
}

void validate(const Config& cfg) {
  if (cfg.dim != 1) {
    throw ConfigError("only the one-dimensional periodic cell is implemented (dim = 1)");
  }
  if (cfg.modes < 2) throw ConfigError("modes must be >= 2");
  if (!(cfg.p > 2.0)) throw ConfigError("p must exceed 2");
  if (!(cfg.amplitude.min_value() > 0.0)) throw ConfigError("amplitude a(x) must be positive");
  if (!(cfg.gap_tol > 0.0)) throw ConfigError("gap_tol must be positive");
}

}  // namespace

const Config& PeriodicProblem::config() const { return data_->cfg; }
const GalerkinSpace& PeriodicProblem::space() const { return data_->space; }
const Vector& PeriodicProblem::eigenvalues() const { return data_->eigenvalues; }
const std::vector<int>& PeriodicProblem::dominant_modes() const { return data_->dominant; }
int PeriodicProblem::quadrature_points() const { return data_->nq; }

PeriodicProblem PeriodicProblem::build(const Config& cfg) {
  validate(cfg);
  auto d = std::make_shared<Data>();
  d->cfg = cfg;
  const int M = cfg.modes;
  d->nf = 2 * M + 1;
  // 2 p M nodes resolve |u|^p for integer p; never fewer than needed for V.
  d->nq = std::max<int>(static_cast<int>(std::ceil(2.0 * cfg.p * M)),
                        2 * M + std::max(cfg.potential.freq, cfg.amplitude.freq) + 2);
  d->w = 2.0 * std::numbers::pi / d->nq;
  const Vector x = nodes(d->nq);
  d->fourier = fourier_at(M, x);
  d->stiffness.resize(d->nf);
  d->stiffness[0] = 0.0;
  for (int j = 1; j <= M; ++j) d->stiffness[2 * j - 1] = d->stiffness[2 * j] = double(j) * j;
  d->potential.resize(d->nq);
  d->amplitude.resize(d->nq);
  for (int q = 0; q < d->nq; ++q) {
    d->potential[q] = cfg.potential(x[q]);
    d->amplitude[q] = cfg.amplitude(x[q]);
  }

  // Operator -d^2/dx^2 + V on the Fourier basis.
  Vector lambda;
  Matrix vecs;
  if (cfg.potential.kind == Profile::Kind::constant) {
    // Diagonal exactly; skipping the eigensolver keeps degenerate pairs unmixed.
    lambda = d->stiffness.array() + cfg.potential.c0;
    vecs = Matrix::Identity(d->nf, d->nf);
  } else {
    Matrix A = d->fourier.transpose() * (d->w * d->potential).asDiagonal() * d->fourier;
    A.diagonal() += d->stiffness;
    A = 0.5 * (A + A.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    lambda = es.eigenvalues();
    vecs = es.eigenvectors();
  }
  std::vector<int> dom(d->nf);
  for (int i = 0; i < d->nf; ++i) {
    Eigen::Index arg;
    vecs.col(i).cwiseAbs().maxCoeff(&arg);
    dom[i] = static_cast<int>(arg);
    if (vecs(arg, i) < 0.0) vecs.col(i) *= -1.0;
  }
  for (int i = 0; i < d->nf; ++i) {
    if (std::abs(lambda[i]) < cfg.gap_tol) {
      std::ostringstream os;
      os << "spectral gap violated: eigenvalue " << lambda[i] << " within gap_tol " << cfg.gap_tol
         << " of zero";
      throw GapViolation(os.str());
    }
  }
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  auto order_key = [&](int a, int b) {
    const double la = std::abs(lambda[a]);
    const double lb = std::abs(lambda[b]);
    if (std::abs(la - lb) > 1e-12 * scale) return la < lb;
    return dom[a] < dom[b];
  };
  std::vector<int> neg;
  std::vector<int> pos;
  for (int i = 0; i < d->nf; ++i) (lambda[i] < 0.0 ? neg : pos).push_back(i);
  std::sort(neg.begin(), neg.end(), order_key);
  std::sort(pos.begin(), pos.end(), order_key);
  if (neg.empty()) throw HypothesisViolation("no negative eigenvalue: the Y part is trivial");
  if (pos.size() < 3) throw HypothesisViolation("fewer than three positive eigenvalues");
  d->space = GalerkinSpace(static_cast<int>(neg.size()), static_cast<int>(pos.size()));

  const int n = d->nf;
  d->transform.resize(d->nf, n);
  d->eigenvalues.resize(n);
  d->dominant.resize(n);
  int col = 0;
  for (const auto* group : {&neg, &pos}) {
    for (int i : *group) {
      d->transform.col(col) = vecs.col(i) / std::sqrt(std::abs(lambda[i]));
      d->eigenvalues[col] = lambda[i];
      d->dominant[col] = dom[i];
      ++col;
    }
  }
  d->basis = d->fourier * d->transform;

  // Aliasing guard: psi on a doubled grid must agree.
  {
    auto fine = std::make_shared<Data>(*d);
    fine->nq = 2 * d->nq;
    fine->w = 2.0 * std::numbers::pi / fine->nq;
    const Vector xf = nodes(fine->nq);
    fine->fourier = fourier_at(M, xf);
    fine->amplitude.resize(fine->nq);
    for (int q = 0; q < fine->nq; ++q) fine->amplitude[q] = cfg.amplitude(xf[q]);
    fine->basis = fine->fourier * fine->transform;
    std::mt19937_64 rng(cfg.seed ^ 0xa11a5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int s = 0; s < 4; ++s) {
      Vector c(n);
      for (int i = 0; i < n; ++i) c[i] = g(rng);
      const double a = d->psi(c);
      const double b = fine->psi(c);
      if (std::abs(a - b) > cfg.alias_tol * std::max(1.0, std::abs(b))) {
        std::ostringstream os;
        os << "quadrature under-resolved: energy drift " << std::abs(a - b) << " on grid doubling";
        throw ConfigError(os.str());
      }
    }
  }

  PeriodicProblem prob;
  prob.data_ = d;
  std::shared_ptr<const Data> cd = d;
  auto phi = std::make_shared<IndefiniteFunctional>(
      d->space, [cd](const Vector& c) { return cd->psi(c); },
      [cd](const Vector& c) { return cd->psi_grad(c); }, true, "schrodinger");
  phi->with_psi_hessian([cd](const Vector& c) { return cd->psi_hessian(c); });
  prob.functional_ = phi;
  return prob;
}

ProblemModel PeriodicProblem::model() const {
  ProblemModel m;
  m.functional = functional_;
  std::shared_ptr<const Data> cd = data_;
  m.lp.p = data_->cfg.p;
  m.lp.power = [cd](const Vector& c) { return cd->lp_power(c); };
  m.lp.power_grad = [cd](const Vector& c) { return cd->lp_power_grad(c); };
  m.growth_c = data_->cfg.amplitude.max_value();
  const double p = data_->cfg.p;
  const double c = m.growth_c;
  m.b_lower_bound = [p, c](double beta) {
    return 0.5 * (0.5 - 1.0 / p) * std::pow(c * p * std::pow(beta, p), 2.0 / (2.0 - p));
  };
  const PeriodicProblem self = *this;
  m.el_residual = [self](const Vector& u) { return self.el_residual(u); };
  m.name = "schrodinger";
  return m;
}

double PeriodicProblem::el_residual(const Vector& c) const {
  const Data& d = *data_;
  const Vector fh = d.transform * c;  // Fourier coefficients of u
  const Vector u = d.fourier * fh;    // u at the nodes
  Vector pointwise(d.nq);
  for (int q = 0; q < d.nq; ++q) {
    const double f = d.amplitude[q] * std::pow(std::abs(u[q]), d.cfg.p - 2.0) * u[q];
    pointwise[q] = d.potential[q] * u[q] - f;
  }
  Vector r = d.fourier.transpose() * (d.w * pointwise);
  r += d.stiffness.cwiseProduct(fh);
  return (d.transform.transpose() * r).norm();
}

double PeriodicProblem::integral_uf(const Vector& c) const {
  const Data& d = *data_;
  const Vector u = d.values(c);
  double s = 0.0;
  for (int q = 0; q < d.nq; ++q) {
    s += u[q] * d.amplitude[q] * std::pow(std::abs(u[q]), d.cfg.p - 2.0) * u[q];
  }
  return d.w * s;
}

double PeriodicProblem::integral_F(const Vector& c) const { return data_->psi(c); }

Vector PeriodicProblem::fourier_coefficients(const Vector& c) const { return data_->transform * c; }

std::vector<std::pair<double, double>> PeriodicProblem::sample(const Vector& c, int points) const {
  const Vector x = nodes(points);
  const Vector u = fourier_at(data_->cfg.modes, x) * (data_->transform * c);
  std::vector<std::pair<double, double>> out(points);
  for (int i = 0; i < points; ++i) out[i] = {x[i], u[i]};
  return out;
}

GrowthReport PeriodicProblem::growth_bound_check(int samples, double eps,
                                                 std::uint64_t seed) const {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const Data& d = *data_;
  const double p = d.cfg.p;
  GrowthReport rep;
  rep.eps = eps;
  rep.samples = samples;
  rep.c_eps_used = d.cfg.amplitude.max_value();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> uu(-10.0, 10.0);
  rep.bound_holds = true;
  rep.f4_holds = true;
  for (int s = 0; s < samples; ++s) {
    const double xs = ux(rng);
    const double u = s == 0 ? 0.0 : uu(rng);
    const double a = d.cfg.amplitude(xs);
    const double f = a * std::pow(std::abs(u), p - 2.0) * u;
    const double F = a * std::pow(std::abs(u), p) / p;
    if (u != 0.0) {
      const double need = (std::abs(f) - eps * std::abs(u)) / std::pow(std::abs(u), p - 1.0);
      rep.c_eps_required = std::max(rep.c_eps_required, need);
    }
    if (std::abs(f) > eps * std::abs(u) + rep.c_eps_used * std::pow(std::abs(u), p - 1.0)) {
      rep.bound_holds = false;
    }
    const double viol = p * F - u * f;
    rep.f4_max_violation = std::max(rep.f4_max_violation, viol);
    if (viol > 1e-12 * std::max(1.0, std::abs(u * f))) rep.f4_holds = false;
  }
  return rep;
}

}  // namespace fountain::schrodinger
