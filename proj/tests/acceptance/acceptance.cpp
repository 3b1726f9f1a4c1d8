// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.
// Usage: fountain_acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fountain/deformation.hpp"
#include "fountain/degree.hpp"
#include "fountain/elliptic.hpp"
#include "fountain/geometry.hpp"
#include "fountain/minimax.hpp"
#include "fountain/schrodinger.hpp"
#include "fountain/spaces.hpp"
#include "fountain/synthetic.hpp"
#include "generators.hpp"

using namespace fountain;
using fountain::testing::Gen;

namespace {

// Pinned tolerances.
constexpr double kNormTol = 1e-12;
constexpr double kLinkTol = 1e-6;
constexpr double kDisplacementTol = 1e-6;
constexpr double kMonotoneTol = 1e-8;
constexpr double kOddTol = 1e-8;
constexpr double kSublevelTol = 1e-6;
constexpr double kBetaGridTol = 1e-3;
constexpr double kBoundTol = 1e-3;
constexpr double kGradTol = 1e-6;
constexpr double kResidualTol = 1e-5;
constexpr double kMinimaxTol = 1e-4;
constexpr double kIdentityTol = 1e-6;
constexpr double kRefineTol = 1e-3;
constexpr double kGradCheckTol = 1e-5;
constexpr double kGradCheckStep = 1e-6;
// Two level values closer than this are not resolved by the sphere/ball
// extremum solvers (their agreement tolerance), so "strictly increasing"
// needs a step of at least this size and "nonincreasing" allows this slack.
constexpr double kResolution = 1e-6;

// Runtime limits in seconds.
constexpr double kNormSeconds = 1.0;
constexpr double kDegreeSeconds = 30.0;
constexpr double kDeformSeconds = 60.0;
constexpr double kGeometrySeconds = 300.0;
constexpr double kMultiplicitySeconds = 900.0;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
  void info(const std::string& what) { notes.push_back(what); }
};

std::string fmt(double x, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------- shared models

const schrodinger::PeriodicProblem& schrodinger_default() {
  static const auto p = schrodinger::PeriodicProblem::build({});
  return p;
}

const elliptic::DirichletProblem& elliptic_default() {
  static const auto p = elliptic::DirichletProblem::build({});
  return p;
}

struct ApplicationRun {
  std::string name;
  CriticalSequence seq;
  double seconds = 0.0;
};

// Both the multiplicity and the refinement criteria use these runs.
const ApplicationRun& application_run(const std::string& name) {
  static std::map<std::string, ApplicationRun> cache;
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  ApplicationRun run;
  run.name = name;
  const ProblemModel model =
      name == "schrodinger" ? schrodinger_default().model() : elliptic_default().model();
  Stopwatch sw;
  run.seq = find_critical_sequence(model, {2, 3, 4});
  run.seconds = sw.seconds();
  return cache.emplace(name, std::move(run)).first->second;
}

// ---------------------------------------------------------------- 1. norms

Outcome norm_suite() {
  Outcome o;
  Stopwatch sw;
  const GalerkinSpace space(5, 10);
  Gen g(101);
  int bad_sandwich = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vector u = g.vector(space.dim());
    const double t = tau_norm(space, u);
    const double q = project(space, u, Target::Z).norm();
    const double tol = kNormTol * std::max(1.0, u.norm());
    if (q > t + tol || t > u.norm() + tol) ++bad_sandwich;
  }
  o.require(bad_sandwich == 0, std::to_string(bad_sandwich) + " vectors break |Qu| <= tau <= |u|");
  int bad_equiv = 0;
  for (int k = 2; k <= 6; ++k) {
    for (int i = 0; i < 1000; ++i) {
      const Vector u = g.in_yk(space, k);
      const double tk = tau_norm_k(space, u, k);
      const double t = tau_norm(space, u);
      const double tol = kNormTol * std::max(1.0, u.norm());
      if (tk > 1.5 * t + tol || t > std::ldexp(1.0, k + 1) * tk + tol) ++bad_equiv;
    }
  }
  o.require(bad_equiv == 0, std::to_string(bad_equiv) + " Y_k vectors break the equivalence bounds");
  const double s = sw.seconds();
  o.require(s < kNormSeconds, "runtime " + fmt(s) + " s");
  o.info("6000 samples, " + fmt(s, 3) + " s");
  return o;
}

// ---------------------------------------------------------------- 2. degree

degree::FiniteMap translate(const Vector& y) {
  const int m = static_cast<int>(y.size());
  return {[y](const Vector& x) { return Vector(x - y); },
          [m](const Vector&) { return Matrix(Matrix::Identity(m, m)); }};
}

degree::FiniteMap random_odd_map(Gen& g, int m) {
  Matrix A(m, m), B(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      A(i, j) = g.uniform(-1.0, 1.0);
      B(i, j) = g.uniform(-1.0, 1.0);
    }
  }
  degree::FiniteMap f;
  f.odd = true;
  f.eval = [A, B](const Vector& x) { return Vector(A * x + (B * x).array().cube().matrix()); };
  f.jacobian = [A, B](const Vector& x) {
    const Vector s = (B * x).array().square().matrix();
    return Matrix(A + 3.0 * s.asDiagonal() * B);
  };
  return f;
}

// Planar polynomial map of degree <= 3 with random coefficients.
degree::FiniteMap random_poly(Gen& g) {
  Matrix a(2, 10);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 10; ++j) a(i, j) = g.uniform(-1.0, 1.0);
  }
  degree::FiniteMap f;
  f.eval = [a](const Vector& x) {
    const double u = x[0], v = x[1];
    Vector m(10);
    m << 1, u, v, u * u, u * v, v * v, u * u * u, u * u * v, u * v * v, v * v * v;
    return Vector(a * m);
  };
  return f;
}

double boundary_min(const degree::FiniteMap& f, const degree::Region& U, Gen& g, int samples) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) m = std::min(m, f(U.boundary_point(g.unit(U.dim()))).norm());
  return m;
}

Outcome degree_suite() {
  using namespace degree;
  Outcome o;
  Stopwatch sw;
  Gen g(202);

  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const int m = g.integer(1, 4);
    const Vector y = g.in_ball(m, 0.95);
    if (brouwer_degree(translate(y), Region::ball(Vector::Zero(m), 1.0)).degree != 1) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + "/100 translations with degree != 1");

  for (int m = 1; m <= 4; ++m) {
    const FiniteMap minus{[](const Vector& x) { return Vector(-x); },
                          [m](const Vector&) { return Matrix(-Matrix::Identity(m, m)); }, true};
    const int d = brouwer_degree(minus, Region::ball(Vector::Zero(m), 1.0)).degree;
    // determinant-sign oracle
    const int expected = Matrix(-Matrix::Identity(m, m)).determinant() > 0 ? 1 : -1;
    o.require(d == expected, "deg(-id) in R^" + std::to_string(m) + " = " + std::to_string(d));
  }

  const Region disc = Region::ball(Vector::Zero(2), 1.0);
  int compared = 0, mismatched = 0;
  while (compared < 50) {
    const FiniteMap f = random_poly(g);
    if (boundary_min(f, disc, g, 720) < 1e-2) continue;
    if (brouwer_degree(f, disc).degree != winding_degree_2d(f, disc).degree) ++mismatched;
    ++compared;
  }
  o.require(mismatched == 0, std::to_string(mismatched) + "/50 sign counts differ from winding");

  int odd_checked = 0, even_found = 0;
  while (odd_checked < 20) {
    const int m = g.integer(1, 4);
    const FiniteMap f = random_odd_map(g, m);
    try {
      if (brouwer_degree(f, Region::ball(Vector::Zero(m), 1.0)).degree % 2 == 0) ++even_found;
      ++odd_checked;
    } catch (const BoundaryZeroError&) {
    } catch (const DegeneracyError&) {
    }
  }
  o.require(even_found == 0, std::to_string(even_found) + " odd maps with even degree");

  int families = 0, jumps = 0;
  while (families < 20) {
    const int m = g.integer(1, 3);
    const FiniteMap f = random_odd_map(g, m);
    const Region U = Region::ball(Vector::Zero(m), 1.0);
    // admissible: the translate stays below min |f| on the boundary
    const double fmin = boundary_min(f, U, g, 4000);
    if (fmin < 0.05) continue;
    const Vector z = g.unit(m) * g.uniform(0.0, 0.5 * fmin);
    const MapFamily h = [f, z](double t) {
      FiniteMap ft;
      ft.eval = [f, z, t](const Vector& x) { return Vector(f(x) - t * z); };
      return ft;
    };
    try {
      const std::vector<int> degs = homotopy_degree_constancy(h, U, 5);
      if (std::any_of(degs.begin(), degs.end(), [&](int d) { return d != degs.front(); })) ++jumps;
      ++families;
    } catch (const HomotopyBoundaryZero&) {
    } catch (const DegeneracyError&) {
    }
  }
  o.require(jumps == 0, std::to_string(jumps) + "/20 homotopies change degree");

  const double s = sw.seconds();
  o.require(s < kDegreeSeconds, "runtime " + fmt(s) + " s");
  o.info(fmt(s, 3) + " s");
  return o;
}

// ---------------------------------------------------------------- 3. deformation

Outcome deformation_suite() {
  Outcome o;
  Stopwatch sw;
  const GalerkinSpace space(3, 5);
  const IndefiniteFunctional phi = IndefiniteFunctional::quadratic(space);
  const deform::DeformationParams params(
      phi, 0.1, 0.01, 0.2, deform::InvariantSet::sphere(space.filtration(2).yk_indices(), 1.0, space.dim()));
  deform::ReportTolerances tol;
  tol.displacement = kDisplacementTol;
  tol.monotone = kMonotoneTol;
  tol.oddness = kOddTol;
  tol.sublevel = kSublevelTol;
  const deform::DeformationReport r = deform::verify_deformation_properties(params, 200, 303, tol);
  o.require(r.hypothesis.holds, "gradient hypothesis fails: min |grad| " + fmt(r.hypothesis.min_gradient) +
                                    " < " + fmt(r.hypothesis.required));
  auto check = [&](const char* name, const deform::PropertyCheck& p) {
    o.require(p.passed && p.asserted, std::string(name) + " failed (worst " + fmt(p.worst) + ") " + p.note);
    o.info(std::string(name) + " " + std::to_string(p.checked) + " checked, worst " + fmt(p.worst, 3));
  };
  check("identity", r.identity);
  check("displacement", r.displacement);
  check("monotone", r.monotone);
  check("oddness", r.oddness);
  check("sublevel", r.sublevel);
  o.require(r.sublevel.checked > 0, "no start fell in the sublevel set");
  const double s = sw.seconds();
  o.require(s < kDeformSeconds, "runtime " + fmt(s) + " s");
  o.info(fmt(s, 3) + " s");
  return o;
}

// ---------------------------------------------------------------- 4. linking

Outcome linking_suite() {
  Outcome o;
  const GalerkinSpace space(3, 5);
  const LinkingSets link(space, 2, 4.0, 1.5);
  const int proj = link.filtration().dim_y + link.filtration().k;
  double worst_gap = 0.0, worst_proj = 0.0;
  int solved = 0;
  auto run = [&](const SurfaceMap& g, const std::string& label) {
    try {
      const LinkingResult r = verify_linking(g, link);
      const double gap = std::abs(r.image.norm() - link.r());
      const double pn = r.image.head(proj).norm();
      worst_gap = std::max(worst_gap, gap);
      worst_proj = std::max(worst_proj, pn);
      o.require(gap <= kLinkTol && pn <= kLinkTol, label + ": gap " + fmt(gap) + ", |P gamma| " + fmt(pn));
      ++solved;
    } catch (const std::exception& e) {
      o.require(false, label + ": " + e.what());
    }
  };
  run([&](const Vector& y) { return link.embed(y); }, "identity");
  Gen gen(404);
  const int n = space.dim();
  const double rho = link.rho();
  for (int trial = 0; trial < 20; ++trial) {
    Matrix A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = gen.normal();
    A *= 0.3 / A.norm();
    run(
        [&link, A, rho](const Vector& y) {
          const Vector u = link.embed(y);
          // vanishes on the boundary sphere of B_k; odd in y
          const double bump = std::max(0.0, 1.0 - y.squaredNorm() / (rho * rho));
          return Vector(u + bump * (A * u + 0.2 * u.array().cube().matrix() / (rho * rho)));
        },
        "perturbation " + std::to_string(trial));
  }
  o.info(std::to_string(solved) + "/21 solved, worst gap " + fmt(worst_gap, 3) + ", worst |P gamma| " +
         fmt(worst_proj, 3));
  return o;
}

// ---------------------------------------------------------------- 5. beta / radius

Outcome beta_suite() {
  Outcome o;
  const std::vector<std::pair<std::string, ProblemModel>> models{
      {"schrodinger", schrodinger_default().model()}, {"elliptic", elliptic_default().model()}};
  for (const auto& [name, model] : models) {
    const GalerkinSpace& s = model.phi().space();
    double prev = std::numeric_limits<double>::infinity();
    std::string values;
    for (int k = 2; k <= 6; ++k) {
      const BetaResult b = compute_beta_k(s, k, model.lp);
      o.require(b.value <= prev + kResolution, name + ": beta_" + std::to_string(k) + " = " + fmt(b.value, 12) +
                                     " exceeds beta_" + std::to_string(k - 1));
      prev = b.value;
      values += (k > 2 ? ", " : "") + fmt(b.value, 6);
      const double r = compute_r_k(model.growth_c, model.lp.p, b.value);
      const double closed = std::pow(model.growth_c * model.lp.p * std::pow(b.value, model.lp.p),
                                     1.0 / (2.0 - model.lp.p));
      o.require(r == closed, name + ": r_k differs from the closed formula at k=" + std::to_string(k));
    }
    o.info(name + " beta_2..6 = " + values);

    // two-dimensional Z_k: the unit circle spanned by the last two basis vectors
    const int k = s.max_level() - 1;
    double grid = 0.0;
    for (int i = 0; i <= 3600; ++i) {
      const double t = std::numbers::pi * i / 3600.0;
      grid = std::max(grid, model.lp.norm(Vector(std::cos(t) * s.e(k) + std::sin(t) * s.e(k + 1))));
    }
    const double beta2 = compute_beta_k(s, k, model.lp).value;
    o.require(std::abs(beta2 - grid) <= kBetaGridTol,
              name + ": 2-D beta " + fmt(beta2, 10) + " vs grid " + fmt(grid, 10));
    o.info(name + " 2-D beta gap " + fmt(std::abs(beta2 - grid), 3));
  }
  return o;
}

// ---------------------------------------------------------------- 6. geometry

Outcome geometry_suite() {
  Outcome o;
  Stopwatch sw;
  const ProblemModel model = schrodinger_default().model();
  const double p = model.lp.p, c = model.growth_c;
  double prev_b = 0.0;
  for (int k = 2; k <= 6; ++k) {
    const GeometryReport g = compute_geometry(model, k);
    const std::string tag = "k=" + std::to_string(k);
    o.require(g.a_k <= 0.0, tag + ": a_k = " + fmt(g.a_k));
    o.require(g.b_k > 0.0, tag + ": b_k = " + fmt(g.b_k));
    const bool rises = k == 2 || g.b_k > prev_b + kResolution * std::max(1.0, std::abs(prev_b));
    o.require(rises, tag + ": b_k = " + fmt(g.b_k, 15) + " not above b_" + std::to_string(k - 1) + " = " +
                         fmt(prev_b, 15));
    const double bound = 0.5 * (0.5 - 1.0 / p) * std::pow(c * p * std::pow(g.beta_k, p), 2.0 / (2.0 - p));
    o.require(g.b_k >= bound - kBoundTol, tag + ": b_k " + fmt(g.b_k) + " below bound " + fmt(bound));
    o.info(tag + " a=" + fmt(g.a_k, 5) + " b=" + fmt(g.b_k, 8) + " bound=" + fmt(bound, 5));
    prev_b = g.b_k;
  }
  const double s = sw.seconds();
  o.require(s < kGeometrySeconds, "runtime " + fmt(s) + " s");
  o.info(fmt(s, 3) + " s");
  return o;
}

// ---------------------------------------------------------------- 7. multiplicity

Outcome multiplicity(const std::string& name) {
  Outcome o;
  const ApplicationRun& run = application_run(name);
  const CriticalSequence& cs = run.seq;
  o.require(cs.points.size() >= 3, name + ": " + std::to_string(cs.points.size()) + " distinct critical points");
  double prev_e = 0.0;
  bool first = true;
  for (const LevelOutcome& lv : cs.levels) {
    const std::string tag = name + " k=" + std::to_string(lv.k);
    if (!lv.minimax) {
      o.require(false, tag + ": no minimax run (" + lv.failure + ")");
      continue;
    }
    const double c_est = lv.minimax->c_k_estimate;
    o.require(c_est >= lv.geometry.b_k - kMinimaxTol,
              tag + ": c_k estimate " + fmt(c_est) + " < b_k " + fmt(lv.geometry.b_k));
    if (!lv.point) {
      o.require(false, tag + ": no critical point (" + lv.failure + ")");
      continue;
    }
    const CriticalPoint& p = *lv.point;
    o.require(p.grad_norm <= kGradTol, tag + ": grad_norm " + fmt(p.grad_norm));
    o.require(p.el_residual <= kResidualTol, tag + ": EL residual " + fmt(p.el_residual));
    const bool rises = first || p.energy > prev_e + kResolution * std::max(1.0, std::abs(prev_e));
    o.require(rises, tag + ": energy " + fmt(p.energy, 12) + " not above previous " + fmt(prev_e, 12));
    if (lv.duplicate) o.info(tag + " repeats an earlier orbit");
    o.info(tag + " b=" + fmt(lv.geometry.b_k, 6) + " c_est=" + fmt(c_est, 6) + " E=" + fmt(p.energy, 10) +
           " |grad|=" + fmt(p.grad_norm, 2));
    prev_e = p.energy;
    first = false;
  }
  if (name == "schrodinger") {
    const auto& prob = schrodinger_default();
    for (const CriticalPoint& p : cs.points) {
      const double gap = std::abs(p.energy - (0.5 * prob.integral_uf(p.coords) - prob.integral_F(p.coords)));
      o.require(gap <= kIdentityTol, "energy identity off by " + fmt(gap) + " at E=" + fmt(p.energy));
    }
  }
  o.require(run.seconds < kMultiplicitySeconds, name + " runtime " + fmt(run.seconds) + " s");
  o.info(name + " " + fmt(run.seconds, 4) + " s");
  return o;
}

Outcome multiplicity_suite() {
  Outcome o;
  for (const char* name : {"schrodinger", "elliptic"}) {
    const Outcome part = multiplicity(name);
    o.pass = o.pass && part.pass;
    o.notes.insert(o.notes.end(), part.notes.begin(), part.notes.end());
  }
  return o;
}

// ---------------------------------------------------------------- 8. refinement

// Coarse solution expressed in the fine basis through its Fourier coefficients.
Vector lift_schrodinger(const schrodinger::PeriodicProblem& coarse, const schrodinger::PeriodicProblem& fine,
                        const Vector& u) {
  const Vector fc = coarse.fourier_coefficients(u);
  const int n = fine.space().dim();
  Matrix basis(fine.fourier_coefficients(fine.space().e(0)).size(), n);
  for (int i = 0; i < n; ++i) {
    Vector ei = Vector::Zero(n);
    ei[i] = 1.0;
    basis.col(i) = fine.fourier_coefficients(ei);
  }
  Vector padded = Vector::Zero(basis.rows());
  padded.head(fc.size()) = fc;
  return basis.colPivHouseholderQr().solve(padded);
}

Vector lift_elliptic(int fine_modes, const Vector& w) {
  const auto pv = elliptic::PairVector::split(w);
  elliptic::PairVector out{Vector::Zero(fine_modes), Vector::Zero(fine_modes)};
  out.u.head(pv.u.size()) = pv.u;
  out.v.head(pv.v.size()) = pv.v;
  return out.join();
}

Outcome refinement_suite() {
  Outcome o;
  schrodinger::Config sc;
  sc.modes = 32;
  const auto s_fine = schrodinger::PeriodicProblem::build(sc);
  elliptic::Config ec;
  ec.n_modes = 24;
  const auto e_fine = elliptic::DirichletProblem::build(ec);

  auto refine = [&](const std::string& name, const IndefiniteFunctional& fine_phi,
                    const std::function<Vector(const Vector&)>& lift) {
    const CriticalSequence& cs = application_run(name).seq;
    if (cs.points.empty()) o.require(false, name + ": no pinned solutions to refine");
    for (const CriticalPoint& p : cs.points) {
      const PolishResult pr = polish(fine_phi, lift(p.coords), kGradTol);
      const std::string tag = name + " k=" + std::to_string(p.level_k);
      if (!pr.converged) {
        o.require(false, tag + ": refined solve did not converge (|grad| " + fmt(pr.grad_norm) + ")");
        continue;
      }
      const double e = fine_phi.eval(pr.u);
      const double change = std::abs(e - p.energy);
      o.require(change < kRefineTol, tag + ": energy " + fmt(p.energy, 12) + " -> " + fmt(e, 12));
      o.info(tag + " change " + fmt(change, 3));
    }
  };
  refine("schrodinger", *s_fine.functional(),
         [&](const Vector& u) { return lift_schrodinger(schrodinger_default(), s_fine, u); });
  refine("elliptic", *e_fine.functional(), [&](const Vector& w) { return lift_elliptic(ec.n_modes, w); });
  return o;
}

// ---------------------------------------------------------------- 9. gradient checks

Outcome gradient_suite() {
  Outcome o;
  elliptic::Config coupled;
  coupled.h_model = elliptic::HModel::coupled;
  const std::vector<std::pair<std::string, std::shared_ptr<const IndefiniteFunctional>>> all{
      {"synthetic", synthetic::CoordinateProblem::build({}).functional()},
      {"schrodinger", schrodinger_default().functional()},
      {"elliptic", elliptic_default().functional()},
      {"elliptic-coupled", elliptic::DirichletProblem::build(coupled).functional()}};
  for (const auto& [name, phi] : all) {
    const double err = grad_check(*phi, 50, kGradCheckStep, 909);
    o.require(err <= kGradCheckTol, name + ": grad_check " + fmt(err));
    o.info(name + " " + fmt(err, 3));
  }
  return o;
}

// ---------------------------------------------------------------- 10. determinism

std::map<std::string, std::string> read_dir(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name == "timing.json") continue;  // wall-clock only
    std::ifstream f(entry.path(), std::ios::binary);
    files[name] = std::string(std::istreambuf_iterator<char>(f), {});
  }
  return files;
}

Outcome determinism_suite() {
  Outcome o;
  const std::filesystem::path root = std::filesystem::temp_directory_path() / "fountain_acceptance_determinism";
  std::filesystem::remove_all(root);
  const std::string cli = FOUNTAIN_CLI_PATH;
  const std::string configs = FOUNTAIN_CONFIG_DIR;
  for (const auto& [command, config] : std::vector<std::pair<std::string, std::string>>{
           {"solve", "quick_solve.json"}, {"geometry", "schrodinger_geometry.json"}}) {
    std::vector<std::map<std::string, std::string>> outputs;
    for (int rep = 0; rep < 2; ++rep) {
      const auto dir = root / (command + std::to_string(rep));
      const std::string cmd = "\"" + cli + "\" " + command + " --config \"" + configs + "/" + config +
                              "\" --seed 7 --out \"" + dir.string() + "\" > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      o.require(status == 0, command + " run " + std::to_string(rep) + " exited with " + std::to_string(status));
      if (status != 0) return o;
      outputs.push_back(read_dir(dir));
    }
    o.require(!outputs[0].empty(), command + ": no artifacts");
    o.require(outputs[0].size() == outputs[1].size(), command + ": different artifact sets");
    int differing = 0;
    for (const auto& [name, content] : outputs[0]) {
      auto it = outputs[1].find(name);
      if (it == outputs[1].end() || it->second != content) {
        ++differing;
        o.require(false, command + ": " + name + " differs");
      }
    }
    o.info(command + ": " + std::to_string(outputs[0].size()) + " files, " + std::to_string(differing) +
           " differing");
  }
  std::filesystem::remove_all(root);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"norm suite", norm_suite},
      {"degree suite", degree_suite},
      {"deformation suite", deformation_suite},
      {"linking", linking_suite},
      {"beta and radius pipeline", beta_suite},
      {"fountain geometry", geometry_suite},
      {"multiplicity", multiplicity_suite},
      {"refinement stability", refinement_suite},
      {"gradient checks", gradient_suite},
      {"determinism", determinism_suite},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    std::cout << "CRITERION " << id << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << "\n";
    for (const std::string& n : o.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
    if (!o.pass) ++failed;
  }
  std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAIL") << "\n";
  return failed == 0 ? 0 : 1;
}
