#include "fountain/minimax.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

namespace fountain {

namespace {

constexpr int kPrimes[] = {2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,
                           47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107,
                           109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

// Halton point of B(0, radius) in R^d: inverse-normal direction, radius * h^{1/d}.
Vector halton_ball_point(std::uint64_t index, int d, double radius) {
  if (d + 1 > static_cast<int>(std::size(kPrimes))) {
    throw ConfigError("mesh dimension exceeds the Halton prime table");
  }
  Vector dir(d);
  for (int j = 0; j < d; ++j) {
    const double h = radical_inverse(index, kPrimes[j]);
    dir[j] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * h - 1.0);
  }
  const double n = dir.norm();
  if (n == 0.0) dir.setZero(), dir[0] = 1.0;
  else dir /= n;
  const double h = radical_inverse(index, kPrimes[d]);
  return dir * (radius * std::pow(h, 1.0 / d));
}

Vector replay(const IndefiniteFunctional& phi, const std::vector<DeformationStep>& log, Vector u,
              double int_tol) {
  for (const DeformationStep& s : log) {
    const double v = phi.eval(u);
    if (std::abs(v - s.c) >= 2.0 * s.eps) continue;  // cutoff vanishes, eta is the identity
    deform::DeformationParams p(phi, s.c, s.eps, s.delta,
                                s.S ? *s.S : deform::InvariantSet::whole_space());
    p.int_tol = int_tol;
    try {
      u = deform::deform(p, u);
    } catch (const deform::IntegrationError& e) {
      u = e.partial().endpoint;
    }
  }
  return u;
}

struct Surface {
  const IndefiniteFunctional* phi;
  const LinkingSets* link;
  const std::vector<DeformationStep>* log;
  double int_tol;
  std::vector<Vector> pre;  // Y_k coordinates, antipodal pairs adjacent
  std::vector<Vector> img;
  std::vector<double> val;

  Vector image_of(const Vector& y) const {
    return replay(*phi, *log, link->embed(y), int_tol);
  }
  void add_pair(const Vector& y, const Vector& image) {
    const double v = phi->eval(image);
    pre.push_back(y);
    img.push_back(image);
    val.push_back(v);
    pre.push_back(-y);
    img.push_back(-image);
    val.push_back(v);
  }
  size_t argmax() const {
    size_t best = 0;
    for (size_t i = 1; i < val.size(); ++i) {
      if (val[i] > val[best]) best = i;
    }
    return best;
  }
};

Vector project_ball(Vector y, double rho) {
  const double n = y.norm();
  if (n > rho) y *= rho / n;
  return y;
}

// Adaptive resampling of phi o gamma around y0: Gaussian probes at shrinking
// scales, keeping every probe that beats the running best.
Vector refine_sup(Surface& s, const Vector& y0, double rho, int stages, int probes,
                  std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector y = y0;
  double fy = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < s.pre.size(); ++i) {
    if (s.pre[i] == y0) fy = s.val[i];
  }
  double scale = 0.05 * rho / std::sqrt(static_cast<double>(y0.size()));
  for (int st = 0; st < stages; ++st, scale *= 0.25) {
    for (int p = 0; p < probes; ++p) {
      Vector d(y.size());
      for (Eigen::Index j = 0; j < d.size(); ++j) d[j] = g(rng);
      const Vector cand = project_ball(y + scale * d, rho);
      const Vector image = s.image_of(cand);
      s.add_pair(cand, image);
      if (s.val.back() > fy) {
        fy = s.val.back();
        y = cand;
      }
    }
  }
  return y;
}


// Broyden solve of gamma(y) in N_k: the first proj_dim coordinates of gamma(y)
// vanish and |gamma(y)| = r. Warm-started from the previous round's solution.
std::optional<Vector> track_crossing(const std::function<Vector(const Vector&)>& gamma, Vector y,
                                     int proj_dim, double r, double rho, double tol,
                                     int max_calls) {
  int calls = 0;
  auto residual = [&](const Vector& x) {
    ++calls;
    const Vector g = gamma(x);
    Vector F(proj_dim + 1);
    F.head(proj_dim) = g.head(proj_dim);
    F[proj_dim] = g.norm() - r;
    return F;
  };
  const Eigen::Index m = y.size();
  // First a bracketed radial solve along the current direction: exact when the
  // crossing stays on a line kept invariant by the symmetry, and indifferent
  // to kinks of gamma.
  if (y.norm() > 0.0) {
    const Vector dir = y / y.norm();
    auto h = [&](double t) {
      ++calls;
      return gamma(Vector(t * dir)).norm() - r;
    };
    const double t0 = y.norm(), h0 = h(t0);
    const double step = 0.05 * rho;
    double lo = t0, hlo = h0, hi = t0, hhi = h0;
    if (h0 > 0.0) {
      while (hlo > 0.0 && lo > 0.0 && calls < max_calls / 2) {
        hi = lo, hhi = hlo;
        lo = std::max(0.0, lo - step);
        hlo = lo > 0.0 ? h(lo) : -r;
      }
    } else if (h0 < 0.0) {
      while (hhi < 0.0 && hi < rho && calls < max_calls / 2) {
        lo = hi, hlo = hhi;
        hi = std::min(rho, hi + step);
        hhi = h(hi);
      }
    }
    std::optional<double> root;
    if (hlo == 0.0) root = lo;
    else if (hhi == 0.0) root = hi;
    else if (hlo < 0.0 && hhi > 0.0) {
      std::uintmax_t iters = 100;
      const auto br = boost::math::tools::toms748_solve(
          h, lo, hi, hlo, hhi, boost::math::tools::eps_tolerance<double>(52), iters);
      root = 0.5 * (br.first + br.second);
    }
    if (root) {
      const Vector yr = *root * dir;
      if (residual(yr).norm() <= tol) return yr;
      y = yr;
    }
  }
  auto jacobian = [&](const Vector& x, const Vector& F) {
    Matrix J(m, m);
    const double h = 1e-6 * std::max(1.0, x.norm());
    for (Eigen::Index j = 0; j < m; ++j) {
      Vector xp = x;
      xp[j] += h;
      J.col(j) = (residual(xp) - F) / h;
    }
    return J;
  };
  Vector F = residual(y);
  Matrix J = jacobian(y, F);
  bool fresh = true;
  while (calls < max_calls) {
    const double fn = F.norm();
    if (fn <= tol) return y;
    const Vector step = J.colPivHouseholderQr().solve(-F);
    bool accepted = false;
    double lambda = 1.0;
    for (int t = 0; t < 8 && calls < max_calls; ++t, lambda *= 0.5) {
      const Vector yn = project_ball(y + lambda * step, rho);
      const Vector Fn = residual(yn);
      if (Fn.norm() < (1.0 - 1e-4 * lambda) * fn) {
        const Vector sd = yn - y;
        const double s2 = sd.squaredNorm();
        if (s2 > 0.0) J += ((Fn - F) - J * sd) * sd.transpose() / s2;
        y = yn;
        F = Fn;
        fresh = false;
        accepted = true;
        break;
      }
    }
    if (accepted) continue;
    if (fresh || calls + m > max_calls) return std::nullopt;
    J = jacobian(y, F);
    fresh = true;
  }
  return F.norm() <= tol ? std::optional<Vector>(y) : std::nullopt;
}

}  // namespace

const char* to_string(MinimaxStatus s) {
  switch (s) {
    case MinimaxStatus::converged:
      return "converged";
    case MinimaxStatus::eps_exhausted:
      return "eps_exhausted";
    case MinimaxStatus::max_rounds:
      return "max_rounds";
    case MinimaxStatus::stalled:
      return "stalled";
  }
  return "unknown";
}

SurfaceMap surface_map(const IndefiniteFunctional& phi, const LinkingSets& link,
                       const std::vector<DeformationStep>& log, double int_tol) {
  const IndefiniteFunctional* p = &phi;
  return [p, link, log, int_tol](const Vector& y) {
    return replay(*p, log, link.embed(y), int_tol);
  };
}

MinimaxResult minimax_descend(const IndefiniteFunctional& phi, const GeometryReport& geo,
                              const MinimaxOptions& opt) {
  if (!geo.feasible) throw HypothesisViolation("fountain geometry is not feasible at this level");
  if (opt.max_rounds < 0 || opt.mesh_n < 2) throw ConfigError("bad minimax options");
  const GalerkinSpace& space = phi.space();
  const LinkingSets link(space, geo.k, geo.rho_k, geo.r_k);
  const int d = link.filtration().dim_yk();

  MinimaxResult res;
  res.k = geo.k;
  Surface surf{&phi, &link, &res.surface_log, opt.int_tol, {}, {}, {}};
  std::mt19937_64 rng(opt.seed);

  // Seeds: Halton mesh plus the two geometric landmarks, all as antipodal pairs.
  for (int i = 1; i <= opt.mesh_n / 2; ++i) {
    const Vector y = halton_ball_point(static_cast<std::uint64_t>(i), d, geo.rho_k);
    surf.add_pair(y, link.embed(y));
  }
  // The segment through e_k, where the identity surface meets N_k.
  for (int i = 1; i <= opt.axis_samples; ++i) {
    Vector y = Vector::Zero(d);
    y[d - 1] = geo.rho_k * i / (opt.axis_samples + 1);
    surf.add_pair(y, link.embed(y));
  }
  if (geo.d_argmax.size() == space.dim()) {
    const Vector y = project_ball(link.restrict_to_yk(geo.d_argmax), geo.rho_k);
    surf.add_pair(y, link.embed(y));
  }
  // The crossing with N_k, followed from r_k e_k through every deformation.
  Vector crossing = Vector::Zero(d);
  crossing[d - 1] = geo.r_k;
  const size_t crossing_idx = surf.pre.size();
  surf.add_pair(crossing, link.embed(crossing));
  bool tracking = opt.verify_linking;
  const int proj_dim = link.filtration().dim_y + geo.k;
  auto exact_image = [&](const Vector& y) {
    return replay(phi, res.surface_log, link.embed(y), opt.linking_int_tol);
  };

  const double delta = opt.delta_frac * geo.r_k;
  double eps_state = 0.0;
  double prev_sup = std::numeric_limits<double>::infinity();
  double prev_eps = 0.0;
  int stalled = 0;

  for (int round = 0;; ++round) {
    // Local refinement around the best few samples.
    std::vector<size_t> order(surf.val.size());
    std::iota(order.begin(), order.end(), 0);
    const size_t top = std::min<size_t>(static_cast<size_t>(2 * opt.refine_candidates), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(top), order.end(),
                      [&](size_t a, size_t b) {
                        return surf.val[a] != surf.val[b] ? surf.val[a] > surf.val[b] : a < b;
                      });
    int refined = 0;
    std::vector<Vector> seeds;
    for (size_t i = 0; i < top && refined < opt.refine_candidates; ++i) {
      const Vector& y = surf.pre[order[i]];
      bool twin = false;
      for (const Vector& s : seeds) twin = twin || same_orbit(s, y, 1e-12);
      if (twin) continue;
      seeds.push_back(y);
      ++refined;
    }
    for (const Vector& y0 : seeds) refine_sup(surf, y0, geo.rho_k, opt.refine_stages, opt.refine_probes, rng);

    const size_t w = surf.argmax();
    const double sup = surf.val[w];
    const Vector witness = surf.img[w];
    const double gnorm = phi.grad(witness).norm();
    if (round == 0) res.initial_sup = sup;
    res.ps_points.push_back({witness, sup, gnorm, round});
    RoundRecord rec{round, sup, gnorm, 0.0, 0};

    if (gnorm <= opt.crit_tol) {
      res.status = MinimaxStatus::converged;
      res.rounds.push_back(rec);
      break;
    }
    if (round >= opt.max_rounds) {
      res.status = MinimaxStatus::max_rounds;
      res.rounds.push_back(rec);
      break;
    }
    if (sup >= prev_sup - 1e-12) {
      if (++stalled >= opt.stall_rounds) {
        res.status = MinimaxStatus::stalled;
        res.rounds.push_back(rec);
        res.c_k_estimate = sup;
        if (opt.throw_on_stall) throw StallError("minimax sup stopped decreasing", res);
        break;
      }
    } else {
      stalled = 0;
    }

    // Step size inside the window (0, (c - a_k)/2).
    const double cap = 0.25 * (sup - geo.a_k);
    if (round == 0) {
      eps_state = cap;
      if (sup > geo.b_k) eps_state = std::min(eps_state, std::max(0.125 * (sup - geo.b_k), opt.eps_min));
    } else if (prev_sup - sup < 0.5 * prev_eps) {
      eps_state *= 0.5;
    }
    double eps = std::min(eps_state, cap);
    // Keep |grad phi| >= 8 eps / delta on the sampled band so each step moves
    // points by at most delta / 2.
    double band_grad = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < surf.img.size(); i += 2) {
      if (surf.val[i] >= sup - 2.0 * eps) band_grad = std::min(band_grad, phi.grad(surf.img[i]).norm());
    }
    eps = std::min(eps, delta * band_grad / 8.0);
    if (eps < opt.eps_min) {
      res.status = MinimaxStatus::eps_exhausted;
      res.rounds.push_back(rec);
      break;
    }
    // Flow the band. If a trajectory meets |grad phi| < 8 eps / delta inside the
    // active region, the step would tear the surface near an almost critical
    // point: keep that point as a candidate and retry with half the step.
    PsPoint best_band{Vector(), 0.0, std::numeric_limits<double>::infinity(), round};
    std::vector<std::pair<size_t, Vector>> moved;
    DeformationStep step;
    std::optional<Vector> next_crossing;
    bool accepted = false;
    while (!accepted && eps >= opt.eps_min) {
      std::vector<Vector> band;
      for (size_t i = 0; i < surf.img.size(); i += 2) {
        if (surf.val[i] >= sup - 2.0 * eps) band.push_back(surf.img[i]);
      }
      step = DeformationStep{
          sup, eps, delta,
          std::make_shared<const deform::InvariantSet>(deform::InvariantSet::point_cloud(band))};
      deform::DeformationParams params(phi, step.c, step.eps, step.delta, *step.S);
      params.int_tol = opt.int_tol;
      const double required = 8.0 * eps / delta;
      moved.clear();
      accepted = true;
      for (size_t i = 0; i < surf.img.size() && accepted; i += 2) {
        if (surf.val[i] < sup - 2.0 * eps) continue;
        deform::FlowResult fr;
        try {
          fr = deform::flow(params, surf.img[i], 1.0, true);
        } catch (const deform::IntegrationError& e) {
          fr = e.partial();
        }
        for (const deform::TrajectorySample& ts : fr.trajectory) {
          if (std::abs(ts.phi - sup) > 2.0 * eps) continue;
          const double g = phi.grad(ts.u).norm();
          if (g < best_band.grad_norm) best_band = {ts.u, ts.phi, g, round};
          if (g < required) accepted = false;
        }
        if (fr.critical_point) {
          const double g = phi.grad(*fr.critical_point).norm();
          if (g < best_band.grad_norm) {
            best_band = {*fr.critical_point, phi.eval(*fr.critical_point), g, round};
          }
          accepted = false;
        }
        moved.emplace_back(i, fr.endpoint);
      }
      // The crossing with N_k must survive the step. Losing it means the step
      // tore the surface where it meets N_k, which is again a failure of the
      // gradient bound somewhere between the samples.
      if (accepted && tracking) {
        res.surface_log.push_back(step);
        next_crossing = track_crossing(exact_image, crossing, proj_dim, geo.r_k, geo.rho_k,
                                       opt.linking_zero_tol, opt.linking_max_calls);
        res.surface_log.pop_back();
        if (!next_crossing) accepted = false;
      }
      if (!accepted) {
        eps *= 0.5;
        eps_state = eps;
      }
    }
    if (std::isfinite(best_band.grad_norm)) res.flow_candidates.push_back(best_band);
    if (!accepted) {
      res.status = MinimaxStatus::eps_exhausted;
      res.rounds.push_back(rec);
      break;
    }
    rec.eps = eps;
    prev_sup = sup;
    prev_eps = eps;
    for (const auto& [i, end] : moved) {
      surf.img[i] = end;
      surf.img[i + 1] = -end;
      surf.val[i] = surf.val[i + 1] = phi.eval(end);
      ++rec.moved;
    }
    res.surface_log.push_back(step);
    if (tracking) {
      crossing = *next_crossing;
      const Vector image = exact_image(crossing);
      surf.pre[crossing_idx] = crossing;
      surf.pre[crossing_idx + 1] = -crossing;
      surf.img[crossing_idx] = image;
      surf.img[crossing_idx + 1] = -image;
      surf.val[crossing_idx] = surf.val[crossing_idx + 1] = phi.eval(image);
    }
    res.rounds.push_back(rec);
    if (opt.on_round) opt.on_round(rec);
  }

  res.c_k_estimate = res.ps_points.back().energy;
  if (tracking) {
    LinkingResult lr;
    lr.u0 = link.embed(crossing);
    lr.image = exact_image(crossing);
    lr.sphere_gap = std::abs(lr.image.norm() - geo.r_k);
    lr.projection_norm = lr.image.head(proj_dim).norm();
    res.c_k_estimate = std::max(res.c_k_estimate, phi.eval(lr.image));
    res.linking = lr;
  }
  return res;
}

PolishResult polish(const IndefiniteFunctional& phi, const Vector& start, double crit_tol,
                    const PolishOptions& opt) {
  PolishResult pr;
  pr.u = start;
  Vector g = phi.grad(pr.u);
  double gn = g.norm();
  double lambda = -1.0;
  const Eigen::Index n = start.size();
  for (int it = 0; it < opt.max_iter && gn > opt.target; ++it) {
    const Matrix H = phi.hessian(pr.u);
    const Matrix HtH = H.transpose() * H;
    if (lambda < 0.0) lambda = opt.lambda0 * std::max(HtH.diagonal().maxCoeff(), 1e-12);
    const Vector rhs = -H.transpose() * g;
    bool accepted = false;
    for (int tries = 0; tries < 40; ++tries) {
      const Matrix A = HtH + lambda * Matrix::Identity(n, n);
      const Vector s = A.ldlt().solve(rhs);
      const Vector cand = pr.u + s;
      const Vector gc = phi.grad(cand);
      const double gcn = gc.norm();
      if (gcn < gn) {
        pr.u = cand;
        g = gc;
        gn = gcn;
        lambda = std::max(lambda / 5.0, 1e-18);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    pr.iterations = it + 1;
    if (!accepted) break;
  }
  pr.grad_norm = gn;
  pr.converged = gn <= crit_tol;
  return pr;
}

bool same_orbit(const Vector& a, const Vector& b, double tol) {
  if (a.size() != b.size()) return false;
  return (a - b).norm() <= tol || (a + b).norm() <= tol;
}

namespace {

CriticalPoint describe(const ProblemModel& model, const Vector& u, int k) {
  const IndefiniteFunctional& phi = model.phi();
  CriticalPoint cp;
  cp.coords = u;
  cp.energy = phi.eval(u);
  cp.grad_norm = phi.grad(u).norm();
  cp.level_k = k;
  const Matrix H = phi.hessian(u);
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (H + H.transpose()),
                                                          Eigen::EigenvaluesOnly)
                        .eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1.0);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= 1e-8 * scale) ++cp.nullity;
    else if (ev[i] < 0.0) ++cp.morse_index;
  }
  cp.el_residual = model.el_residual ? model.el_residual(u) : cp.grad_norm;
  return cp;
}

}  // namespace

CriticalSequence find_critical_sequence(const ProblemModel& model, const std::vector<int>& k_range,
                                        const GeometryOptions& gopt, const MinimaxOptions& mopt) {
  CriticalSequence out;
  const IndefiniteFunctional& phi = model.phi();
  std::vector<CriticalPoint> found;
  for (int k : k_range) {
    LevelOutcome lv;
    lv.k = k;
    try {
      lv.geometry = compute_geometry(model, k, gopt);
      if (!lv.geometry.feasible) {
        lv.failure = "geometry infeasible";
        out.levels.push_back(std::move(lv));
        continue;
      }
      MinimaxResult mm = minimax_descend(phi, lv.geometry, mopt);

      std::vector<PsPoint> cands = mm.ps_points;
      cands.insert(cands.end(), mm.flow_candidates.begin(), mm.flow_candidates.end());
      std::stable_sort(cands.begin(), cands.end(), [](const PsPoint& a, const PsPoint& b) {
        return a.grad_norm < b.grad_norm;
      });
      std::optional<CriticalPoint> dup;
      for (const PsPoint& c : cands) {
        const PolishResult pr = polish(phi, c.u, mopt.crit_tol);
        if (!pr.converged) continue;
        const double e = phi.eval(pr.u);
        if (e < lv.geometry.b_k - mopt.minimax_tol || e <= 0.0) continue;
        CriticalPoint cp = describe(model, pr.u, k);
        bool seen = false;
        for (const CriticalPoint& f : found) seen = seen || same_orbit(f.coords, cp.coords, mopt.dedup_tol);
        if (!seen) {
          lv.point = cp;
          break;
        }
        if (!dup) dup = cp;
      }
      if (!lv.point && dup) {
        lv.point = dup;
        lv.duplicate = true;
      }
      if (!lv.point) lv.failure = "polish did not reach a critical point above b_k";
      else if (!lv.duplicate) found.push_back(*lv.point);
      lv.minimax = std::move(mm);
    } catch (const Error& e) {
      lv.failure = e.what();
    }
    out.levels.push_back(std::move(lv));
  }
  out.points = found;
  std::stable_sort(out.points.begin(), out.points.end(),
                   [](const CriticalPoint& a, const CriticalPoint& b) { return a.energy < b.energy; });
  return out;
}

}  // namespace fountain
