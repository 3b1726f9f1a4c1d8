#include "fountain/deformation.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <cmath>
#include <limits>

namespace fountain::deform {

namespace odeint = boost::numeric::odeint;

namespace {

Vector gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = g(rng);
  return x;
}

Vector ball_perturbation(int n, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector d = gaussian(n, rng);
  d.normalize();
  return d * (radius * std::pow(u(rng), 1.0 / n));
}

}  // namespace

InvariantSet InvariantSet::whole_space() { return InvariantSet{}; }

InvariantSet InvariantSet::point_cloud(std::vector<Vector> points, bool symmetrize) {
  if (points.empty()) throw std::invalid_argument("point cloud must not be empty");
  InvariantSet s;
  s.kind_ = Kind::point_cloud;
  s.dim_ = static_cast<int>(points.front().size());
  if (symmetrize) {
    const size_t n = points.size();
    for (size_t i = 0; i < n; ++i) points.push_back(-points[i]);
  }
  s.cloud_ = std::move(points);
  return s;
}

InvariantSet InvariantSet::sphere(std::vector<int> coords, double radius, int dim) {
  if (coords.empty() || !(radius > 0.0)) throw std::invalid_argument("bad sphere");
  InvariantSet s;
  s.kind_ = Kind::sphere;
  s.coords_ = std::move(coords);
  s.radius_ = radius;
  s.dim_ = dim;
  return s;
}

double InvariantSet::distance(const Vector& u) const {
  switch (kind_) {
    case Kind::whole_space:
      return 0.0;
    case Kind::point_cloud: {
      double best = std::numeric_limits<double>::infinity();
      for (const Vector& p : cloud_) best = std::min(best, (u - p).squaredNorm());
      return std::sqrt(best);
    }
    case Kind::sphere: {
      // Distance to {x in span(coords) : |x| = R}: split u into the in-span
      // part a and the orthogonal rest b; then dist^2 = (|a| - R)^2 + |b|^2.
      double a2 = 0.0;
      for (int c : coords_) a2 += u[c] * u[c];
      const double b2 = std::max(0.0, u.squaredNorm() - a2);
      const double da = std::sqrt(a2) - radius_;
      return std::sqrt(da * da + b2);
    }
  }
  return 0.0;
}

bool InvariantSet::symmetric() const {
  if (kind_ != Kind::point_cloud) return true;
  for (const Vector& p : cloud_) {
    bool found = false;
    for (const Vector& q : cloud_) {
      if ((p + q).cwiseAbs().maxCoeff() == 0.0) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

Vector InvariantSet::sample(std::mt19937_64& rng) const {
  switch (kind_) {
    case Kind::whole_space:
      throw std::logic_error("the whole space has no finite sampler");
    case Kind::point_cloud: {
      std::uniform_int_distribution<size_t> pick(0, cloud_.size() - 1);
      return cloud_[pick(rng)];
    }
    case Kind::sphere: {
      Vector x = Vector::Zero(dim_);
      Vector d = gaussian(static_cast<int>(coords_.size()), rng);
      d.normalize();
      for (size_t i = 0; i < coords_.size(); ++i) x[coords_[i]] = radius_ * d[static_cast<Eigen::Index>(i)];
      return x;
    }
  }
  return {};
}

DeformationParams::DeformationParams(const IndefiniteFunctional& phi, double c_, double eps_,
                                     double delta_, InvariantSet S_)
    : functional(&phi), c(c_), eps(eps_), delta(delta_), S(std::move(S_)) {
  if (!(eps > 0.0) || !(delta > 0.0)) throw std::invalid_argument("eps and delta must be positive");
  if (phi.even() && !S.symmetric()) throw std::invalid_argument("S must be symmetric for even phi");
}

double cutoff(const DeformationParams& params, const Vector& u) {
  if (params.cutoff_override) return params.cutoff_override(u);
  const double eps = params.eps;
  const double delta = params.delta;
  const double level = std::abs(params.functional->eval(u) - params.c);
  const double dist = params.S.distance(u);
  // Normalized distances to the complement of A and to B.
  const double out = std::min((2.0 * eps - level) / eps, (2.0 * delta - dist) / delta);
  if (out <= 0.0) return 0.0;
  const double in = std::max({(level - eps) / eps, (dist - delta) / delta, 0.0});
  return out / (out + in);
}

FieldEval pseudo_gradient_field(const DeformationParams& params, const Vector& u) {
  FieldEval fe;
  fe.cutoff = cutoff(params, u);
  fe.value = Vector::Zero(u.size());
  if (fe.cutoff <= 0.0) return fe;
  const IndefiniteFunctional& phi = *params.functional;
  const Vector g = phi.grad(u);
  const double g2 = g.squaredNorm();
  if (std::sqrt(g2) <= params.critical_tol) {
    fe.critical_hit = true;
    return fe;
  }
  // For even phi the Z2 average (w(u) - w(-u)) / 2 equals w; without the
  // symmetry there is nothing to average over, so w is used as is.
  const Vector w = (2.0 / g2) * g;
  fe.value = fe.cutoff * w;
  return fe;
}

FlowResult flow(const DeformationParams& params, const Vector& u0, double t_end, bool record) {
  if (t_end < 0.0 || t_end > 1.0) throw std::invalid_argument("t_end must lie in [0, 1]");
  const IndefiniteFunctional& phi = *params.functional;
  FlowResult res;
  res.endpoint = u0;
  const double phi0 = phi.eval(u0);
  if (record) {
    res.trajectory.push_back({0.0, u0, phi0});
    res.energy_profile.push_back(phi0);
  }
  const double s_end = 2.0 * params.eps * t_end;
  if (s_end == 0.0 || cutoff(params, u0) <= 0.0) return res;

  bool hit = false;
  Vector hit_point;
  auto rhs = [&](const Vector& x, Vector& dx, double) {
    const FieldEval fe = pseudo_gradient_field(params, x);
    if (fe.critical_hit && !hit) {
      hit = true;
      hit_point = x;
    }
    dx = -fe.value;
  };
  using Stepper = odeint::runge_kutta_dopri5<Vector, double, Vector, double,
                                             odeint::vector_space_algebra>;
  auto ctl = odeint::make_controlled<Stepper>(params.int_tol, 0.0);
  Vector x = u0;
  double s = 0.0;
  double ds = s_end / 16.0;
  const double ds_min = 1e-14 * s_end;
  int attempts = 0;
  while (s < s_end) {
    if (++attempts > params.max_steps) {
      res.endpoint = x;
      throw IntegrationError("deformation flow exceeded max_steps", res);
    }
    ds = std::min(ds, s_end - s);
    const auto outcome = ctl.try_step(rhs, x, s, ds);
    if (hit) break;
    if (outcome != odeint::success) {
      if (ds < ds_min) {
        res.endpoint = x;
        throw IntegrationError("deformation flow step size collapsed", res);
      }
      continue;
    }
    ++res.steps;
    if (s_end - s < 1e-15 * s_end) s = s_end;
    if (record) {
      const double v = phi.eval(x);
      res.trajectory.push_back({s / (2.0 * params.eps), x, v});
      res.energy_profile.push_back(v);
    }
  }
  res.endpoint = x;
  if (hit) res.critical_point = hit_point;
  res.displacement = (x - u0).norm();
  return res;
}

Vector deform(const DeformationParams& params, const Vector& u0) {
  return flow(params, u0, 1.0, false).endpoint;
}

GradientBound gradient_bound_check(const DeformationParams& params, int samples,
                                   std::uint64_t seed) {
  const IndefiniteFunctional& phi = *params.functional;
  GradientBound gb;
  gb.required = 8.0 * params.eps / params.delta;
  gb.min_gradient = std::numeric_limits<double>::infinity();
  if (!params.S.samplable()) throw std::invalid_argument("gradient bound check needs a samplable S");
  std::mt19937_64 rng(seed);
  const int n = phi.space().dim();
  const long max_tries = 200L * std::max(samples, 1);
  for (long tries = 0; tries < max_tries && gb.samples < samples; ++tries) {
    const Vector u = params.S.sample(rng) + ball_perturbation(n, 2.0 * params.delta, rng);
    const double v = phi.eval(u);
    if (std::abs(v - params.c) > 2.0 * params.eps) continue;
    if (params.S.distance(u) > 2.0 * params.delta) continue;
    ++gb.samples;
    gb.min_gradient = std::min(gb.min_gradient, phi.grad(u).norm());
  }
  gb.holds = gb.samples == 0 || gb.min_gradient >= gb.required;
  return gb;
}

bool DeformationReport::all_passed() const {
  for (const PropertyCheck* p : {&identity, &sublevel, &displacement, &monotone, &oddness, &continuity}) {
    if (p->asserted && !p->passed) return false;
  }
  return true;
}

DeformationReport verify_deformation_properties(const DeformationParams& params,
                                                int sample_count, std::uint64_t seed,
                                                const ReportTolerances& tol) {
  const IndefiniteFunctional& phi = *params.functional;
  const int n = phi.space().dim();
  DeformationReport rep;
  rep.hypothesis = gradient_bound_check(params, std::max(sample_count, 200), seed ^ 0x3a3);
  rep.sublevel.asserted = rep.hypothesis.holds;
  if (!rep.hypothesis.holds) rep.sublevel.note = "gradient bound violated; sublevel capture not asserted";
  rep.continuity.note = "finite dimension: range and continuity automatic; spot-checked";

  std::mt19937_64 rng(seed);
  int made = 0;
  for (long tries = 0; made < sample_count && tries < 100L * sample_count; ++tries) {
    // Alternate between points of S and points of its delta-neighbourhood.
    Vector u = params.S.sample(rng);
    if (tries % 2 == 1) u += ball_perturbation(n, params.delta, rng);
    const double v0 = phi.eval(u);
    if (v0 > params.c + 2.0 * params.eps) continue;
    ++made;

    // (i) identity at t = 0
    const FlowResult at0 = flow(params, u, 0.0);
    rep.identity.checked++;
    const double id_gap = (at0.endpoint - u).cwiseAbs().maxCoeff();
    rep.identity.worst = std::max(rep.identity.worst, id_gap);
    if (id_gap != 0.0) rep.identity.passed = false;

    const FlowResult fr = flow(params, u, 1.0);
    if (cutoff(params, u) <= 0.0) {
      rep.identity.checked++;
      if (!(fr.endpoint.array() == u.array()).all()) rep.identity.passed = false;
    }

    // (iii) displacement along the whole path
    double disp = 0.0;
    for (const TrajectorySample& ts : fr.trajectory) disp = std::max(disp, (ts.u - u).norm());
    rep.displacement.checked++;
    rep.displacement.worst = std::max(rep.displacement.worst, disp);
    if (disp > params.delta / 2.0 + tol.displacement) rep.displacement.passed = false;

    // (iv) monotone energy
    double rise = 0.0;
    for (size_t i = 1; i < fr.energy_profile.size(); ++i) {
      rise = std::max(rise, fr.energy_profile[i] - fr.energy_profile[i - 1]);
    }
    rep.monotone.checked++;
    rep.monotone.worst = std::max(rep.monotone.worst, rise);
    if (rise > tol.monotone) rep.monotone.passed = false;

    // (vii) oddness
    if (phi.even()) {
      const Vector em = deform(params, -u);
      const double odd_gap = (em + fr.endpoint).norm();
      rep.oddness.checked++;
      rep.oddness.worst = std::max(rep.oddness.worst, odd_gap);
      if (odd_gap > tol.oddness) rep.oddness.passed = false;
    }

    // (ii) sublevel capture for starts in phi^{c+eps} intersected with S
    if (tries % 2 == 0 && v0 <= params.c + params.eps) {
      const double v1 = phi.eval(fr.endpoint);
      const double excess = v1 - (params.c - params.eps);
      rep.sublevel.checked++;
      rep.sublevel.worst = std::max(rep.sublevel.worst, excess);
      if (excess > tol.sublevel) rep.sublevel.passed = false;
    }

    // continuity spot check: nearby starts stay nearby
    if (made % 10 == 0) {
      const Vector h = ball_perturbation(n, 1e-7, rng);
      const double gap = (deform(params, u + h) - fr.endpoint).norm();
      rep.continuity.checked++;
      rep.continuity.worst = std::max(rep.continuity.worst, gap);
      if (gap > 1e-3) rep.continuity.passed = false;
    }
  }
  if (!phi.even()) {
    rep.oddness.asserted = false;
    rep.oddness.note = "functional not declared even";
  }
  return rep;
}

}  // namespace fountain::deform
