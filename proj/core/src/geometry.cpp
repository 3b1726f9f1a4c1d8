#include "fountain/geometry.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace fountain {

namespace {

Vector gaussian_on(const std::vector<int>& coords, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector x = Vector::Zero(n);
  for (int c : coords) x[c] = g(rng);
  return x;
}

Vector restrict_to(const Vector& v, const std::vector<int>& coords) {
  Vector out = Vector::Zero(v.size());
  for (int c : coords) out[c] = v[c];
  return out;
}

int count_agreeing(const std::vector<double>& values, double best, double tol) {
  int n = 0;
  for (double v : values) n += std::abs(v - best) <= tol * std::max(1.0, std::abs(best));
  return n;
}

}  // namespace

double LpPower::norm(const Vector& u) const { return std::pow(power(u), 1.0 / p); }

BetaResult compute_beta_k(const GalerkinSpace& space, int k, const LpPower& lp,
                          const BetaOptions& opt) {
  if (!(lp.p > 2.0)) throw std::invalid_argument("compute_beta_k: need p > 2");
  const Filtration f = space.filtration(k);
  const std::vector<int> coords = f.zk_indices();
  const int n = space.dim();
  BetaResult res;
  if (coords.size() == 1) {
    res.maximizer = Vector::Unit(n, coords.front());
    res.value = lp.norm(res.maximizer);
    res.agreeing_restarts = 1;
    return res;
  }
  std::vector<Vector> starts;
  for (size_t i = 0; i < std::min<size_t>(coords.size(), 4); ++i) {
    starts.push_back(Vector::Unit(n, coords[i]));
  }
  std::mt19937_64 rng(opt.seed);
  for (int i = 0; i < opt.restarts; ++i) starts.push_back(gaussian_on(coords, n, rng));

  std::vector<double> values;
  res.value = -1.0;
  for (Vector v : starts) {
    v.normalize();
    double val = lp.power(v);
    // Fixed point of v -> normalize(P grad |v|_p^p); the power functional is
    // convex, so every step is an ascent step on the sphere.
    for (int it = 0; it < opt.max_iter; ++it) {
      Vector g = restrict_to(lp.power_grad(v), coords);
      const double gn = g.norm();
      if (gn == 0.0) break;
      g /= gn;
      const double nv = lp.power(g);
      const double step = (g - v).norm();
      v = g;
      const bool flat = nv - val <= opt.tol * std::max(1.0, val);
      val = std::max(val, nv);
      if (step < 1e-12 || (flat && step < 1e-9)) break;
    }
    const double beta = std::pow(val, 1.0 / lp.p);
    values.push_back(beta);
    if (beta > res.value) {
      res.value = beta;
      res.maximizer = v;
    }
  }
  res.agreeing_restarts = count_agreeing(values, res.value, opt.beta_tol);
  res.low_confidence = res.agreeing_restarts < 2;
  return res;
}

double compute_r_k(double c, double p, double beta) {
  if (!(c > 0.0) || !(p > 2.0) || !(beta > 0.0)) {
    throw std::invalid_argument("compute_r_k: need c > 0, p > 2, beta > 0");
  }
  return std::pow(c * p * std::pow(beta, p), 1.0 / (2.0 - p));
}

ExtremumResult estimate_sphere_extremum(const IndefiniteFunctional& phi,
                                        const std::vector<int>& coords, double radius,
                                        Extremum mode, const ExtremumOptions& opt) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  const int n = phi.space().dim();
  const double sgn = mode == Extremum::sup ? 1.0 : -1.0;
  const double r2 = radius * radius;
  auto F = [&](const Vector& x) { return sgn * phi.eval(x); };
  auto rgrad = [&](const Vector& x) {
    Vector g = restrict_to(phi.grad(x), coords) * sgn;
    g -= (g.dot(x) / r2) * x;
    return g;
  };
  auto onto_sphere = [&](const Vector& x) { return Vector(x * (radius / x.norm())); };

  std::vector<Vector> starts;
  for (const Vector& s : opt.extra_starts) {
    const Vector p = restrict_to(s, coords);
    if (p.norm() > 0.0) starts.push_back(onto_sphere(p));
  }
  std::mt19937_64 rng(opt.seed);
  for (size_t i = 0; i < std::min<size_t>(coords.size(), 3); ++i) {
    starts.push_back(radius * Vector::Unit(n, coords[i]));
  }
  for (int i = 0; i < opt.restarts; ++i) starts.push_back(onto_sphere(gaussian_on(coords, n, rng)));

  ExtremumResult res;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> values;
  for (Vector x : starts) {
    double fx = F(x);
    Vector g = rgrad(x);
    double alpha = 1.0 / std::max(1.0, g.norm());
    for (int it = 0; it < opt.max_iter; ++it) {
      const double gn = g.norm();
      if (gn <= opt.grad_tol * std::max(1.0, std::abs(fx))) break;
      bool accepted = false;
      Vector xt;
      double ft = 0.0;
      for (int ls = 0; ls < 50; ++ls) {
        xt = onto_sphere(x + alpha * g);
        ft = F(xt);
        if (ft >= fx + 1e-4 * alpha * gn * gn) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
      const Vector gt = rgrad(xt);
      const Vector s = xt - x;
      const Vector y = gt - g;
      const double sy = std::abs(s.dot(y));
      alpha = sy > 0.0 ? s.squaredNorm() / sy : 2.0 * alpha;
      alpha = std::clamp(alpha, 1e-12, 1e6);
      x = xt;
      fx = ft;
      g = gt;
    }
    values.push_back(fx);
    if (fx > best) {
      best = fx;
      res.argbest = x;
    }
  }
  res.value = sgn * best;
  for (double& v : values) v *= sgn;
  res.agreeing_restarts = count_agreeing(values, res.value, opt.extremum_tol);
  res.low_confidence = res.agreeing_restarts < 2;
  return res;
}

ExtremumResult estimate_ball_sup(const IndefiniteFunctional& phi, const std::vector<int>& coords,
                                 double radius, const ExtremumOptions& opt) {
  const int n = phi.space().dim();
  auto project_ball = [&](const Vector& x) {
    const double nx = x.norm();
    return nx > radius ? Vector(x * (radius / nx)) : x;
  };
  std::vector<Vector> starts;
  for (const Vector& s : opt.extra_starts) starts.push_back(project_ball(restrict_to(s, coords)));
  std::mt19937_64 rng(opt.seed ^ 0xba11);
  const double fracs[] = {0.25, 0.5, 0.75, 1.0};
  for (int i = 0; i < opt.restarts; ++i) {
    Vector d = gaussian_on(coords, n, rng);
    starts.push_back(d * (fracs[i % 4] * radius / d.norm()));
  }
  ExtremumResult res;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> values;
  for (Vector x : starts) {
    double fx = phi.eval(x);
    double alpha = 1.0;
    for (int it = 0; it < opt.max_iter; ++it) {
      const Vector g = restrict_to(phi.grad(x), coords);
      bool accepted = false;
      Vector xt;
      double ft = 0.0;
      for (int ls = 0; ls < 50; ++ls) {
        xt = project_ball(x + alpha * g);
        ft = phi.eval(xt);
        if (ft >= fx + 1e-4 * (xt - x).squaredNorm() / alpha) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
      const double moved = (xt - x).norm();
      x = xt;
      fx = ft;
      alpha = std::min(alpha * 2.0, 1e6);
      if (moved <= opt.grad_tol * std::max(1.0, x.norm())) break;
    }
    values.push_back(fx);
    if (fx > best) {
      best = fx;
      res.argbest = x;
    }
  }
  res.value = best;
  res.agreeing_restarts = count_agreeing(values, best, opt.extremum_tol);
  res.low_confidence = res.agreeing_restarts < 2;
  return res;
}

RhoResult choose_rho_k(const IndefiniteFunctional& phi, int k, double a_target,
                       const RhoOptions& opt) {
  const Filtration f = phi.space().filtration(k);
  const std::vector<int> coords = f.yk_indices();
  RhoResult res;
  double rho = opt.rho_start;
  for (int i = 0; i <= opt.max_doublings; ++i) {
    const ExtremumResult a = estimate_sphere_extremum(phi, coords, rho, Extremum::sup, opt.extremum);
    if (a.value <= a_target) {
      res.rho = rho;
      res.a_value = a.value;
      res.doublings = i;
      return res;
    }
    rho *= 2.0;
  }
  std::ostringstream os;
  os << "coercivity not observed on Y_" << k << ": sup over the sphere stays above " << a_target
     << " up to radius " << rho / 2.0;
  throw CoercivityError(os.str());
}

GeometryReport compute_geometry(const ProblemModel& model, int k, const GeometryOptions& opt) {
  const IndefiniteFunctional& phi = model.phi();
  const Filtration f = phi.space().filtration(k);
  GeometryReport rep;
  rep.k = k;
  const BetaResult beta = compute_beta_k(phi.space(), k, model.lp, opt.beta);
  rep.beta_k = beta.value;
  rep.r_k = compute_r_k(model.growth_c, model.lp.p, beta.value);

  ExtremumOptions bopt = opt.extremum;
  bopt.extra_starts.push_back(beta.maximizer);
  const ExtremumResult b = estimate_sphere_extremum(phi, f.zk_indices(), rep.r_k, Extremum::inf, bopt);
  rep.b_k = b.value;
  rep.b_argmin = b.argbest;

  RhoOptions ropt;
  ropt.rho_start = opt.rho_start_factor * rep.r_k;
  ropt.max_doublings = opt.max_doublings;
  ropt.extremum = opt.extremum;
  const RhoResult rho = choose_rho_k(phi, k, opt.a_target, ropt);
  rep.rho_k = rho.rho;
  rep.a_k = rho.a_value;

  bool low = beta.low_confidence || b.low_confidence;
  if (opt.compute_d) {
    const ExtremumResult d = estimate_ball_sup(phi, f.yk_indices(), rep.rho_k, opt.extremum);
    rep.d_k = std::max(d.value, rep.a_k);
    rep.d_argmax = d.argbest;
  }
  rep.low_confidence = low;
  rep.b_lower_bound = model.b_lower_bound ? model.b_lower_bound(beta.value)
                                          : -std::numeric_limits<double>::infinity();
  rep.feasible = rep.a_k <= 0.0 && rep.b_k > 0.0 && rep.r_k < rep.rho_k;
  return rep;
}

LinkingResult verify_linking(const SurfaceMap& gamma, const LinkingSets& link,
                             const LinkingOptions& opt) {
  const Filtration& f = link.filtration();
  const int m = f.dim_yk();
  const double rho = link.rho();
  const double r = link.r();
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto unit = [&]() {
    Vector d(m);
    for (int i = 0; i < m; ++i) d[i] = g(rng);
    return Vector(d / d.norm());
  };
  for (int i = 0; i < opt.boundary_checks; ++i) {
    const Vector x = rho * unit();
    const double gap = (gamma(x) - link.embed(x)).norm();
    if (gap > opt.identity_tol * rho) {
      std::ostringstream os;
      os << "gamma moves a point of the boundary of B_" << f.k << " by " << gap;
      throw LinkingError(os.str());
    }
    const Vector xi = 0.5 * x;
    const Vector a = gamma(xi);
    if ((a + gamma(-xi)).norm() > 1e-9 * std::max(1.0, a.norm())) {
      throw LinkingError("gamma is not odd on samples");
    }
  }

  // Distance from the origin to the boundary of U = {|gamma| < r_k} along d.
  auto radial = [&](const Vector& d) {
    auto h = [&](double t) { return gamma(Vector(t * d)).norm() - r; };
    double t_prev = 0.0;
    double h_prev = -r;
    for (int i = 1; i <= opt.scan_steps; ++i) {
      const double t = rho * i / opt.scan_steps;
      const double ht = h(t);
      if (ht >= 0.0) {
        if (ht == 0.0) return t;
        std::uintmax_t iters = 200;
        const auto br = boost::math::tools::toms748_solve(
            h, t_prev, t, h_prev, ht, boost::math::tools::eps_tolerance<double>(50), iters);
        return 0.5 * (br.first + br.second);
      }
      t_prev = t;
      h_prev = ht;
    }
    return rho;
  };
  const degree::Region U = degree::Region::star(m, radial, rho);

  // P_{k-1} gamma in Y_k coordinates: the last coordinate (e_k) is dropped.
  degree::FiniteMap pk;
  pk.odd = true;
  pk.eval = [&](const Vector& x) {
    Vector y = gamma(x).head(m);
    y[m - 1] = 0.0;
    return y;
  };
  std::vector<int> range(m - 1);
  for (int i = 0; i < m - 1; ++i) range[i] = i;

  degree::BorsukOptions bopt = opt.borsuk;
  bopt.initial_directions.insert(bopt.initial_directions.begin(), Vector::Unit(m, m - 1));
  Vector x0;
  try {
    x0 = degree::borsuk_ulam_zero(pk, U, range, bopt);
  } catch (const degree::BorsukUlamSearchError& e) {
    std::ostringstream os;
    os << "linking search failed on level " << f.k << ": " << e.what();
    throw LinkingError(os.str());
  }
  LinkingResult res;
  res.u0 = link.embed(x0);
  res.image = gamma(x0);
  res.sphere_gap = std::abs(res.image.norm() - r);
  res.projection_norm = res.image.head(f.dim_y + f.k).norm();
  if (res.sphere_gap > opt.tol || res.projection_norm > opt.tol) {
    std::ostringstream os;
    os << "linking point misses N_" << f.k << ": sphere gap " << res.sphere_gap
       << ", projection " << res.projection_norm;
    throw LinkingError(os.str());
  }
  return res;
}

}  // namespace fountain
