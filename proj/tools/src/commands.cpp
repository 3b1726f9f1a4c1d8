#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "fountain/degree.hpp"

namespace fountain::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Bumped whenever a JSON field or CSV header changes meaning.
constexpr int kSchemaVersion = 1;

// Application-specific views of a solution.
struct Problem {
  ProblemModel model;
  std::function<json(const Vector&)> coeffs;
  std::function<std::string(const Vector&, int points)> profile_csv;
};

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

Problem make_problem(const RunConfig& cfg) {
  Problem pr;
  switch (cfg.problem) {
    case ProblemKind::schrodinger: {
      const auto sp = schrodinger::PeriodicProblem::build(cfg.schrodinger);
      pr.model = sp.model();
      pr.coeffs = [sp](const Vector& u) {
        return json{{"coeffs", to_std(u)}, {"fourier_coeffs", to_std(sp.fourier_coefficients(u))}};
      };
      pr.profile_csv = [sp](const Vector& u, int points) {
        Csv csv({"x", "u"});
        for (const auto& [x, y] : sp.sample(u, points)) csv.row({x, y});
        return csv.str();
      };
      break;
    }
    case ProblemKind::elliptic: {
      const auto ep = elliptic::DirichletProblem::build(cfg.elliptic);
      pr.model = ep.model();
      pr.coeffs = [](const Vector& w) {
        const auto pv = elliptic::PairVector::split(w);
        return json{{"u_coeffs", to_std(pv.u)}, {"v_coeffs", to_std(pv.v)}};
      };
      pr.profile_csv = [ep](const Vector& w, int points) {
        Csv csv({"x", "u", "v"});
        for (const auto& r : ep.sample(w, points)) csv.row({r[0], r[1], r[2]});
        return csv.str();
      };
      break;
    }
    case ProblemKind::synthetic: {
      const auto cp = synthetic::CoordinateProblem::build(cfg.synthetic);
      pr.model = cp.model();
      pr.coeffs = [](const Vector& u) { return json{{"coeffs", to_std(u)}}; };
      pr.profile_csv = [](const Vector& u, int) {
        Csv csv({"index", "value"});
        for (Eigen::Index i = 0; i < u.size(); ++i) csv.row({static_cast<double>(i), u[i]});
        return csv.str();
      };
      break;
    }
  }
  return pr;
}

json geometry_json(const GeometryReport& g) {
  return {{"k", g.k},
          {"beta_k", number(g.beta_k)},
          {"r_k", number(g.r_k)},
          {"rho_k", number(g.rho_k)},
          {"a_k", number(g.a_k)},
          {"b_k", number(g.b_k)},
          {"d_k", number(g.d_k)},
          {"b_lower_bound", number(g.b_lower_bound)},
          {"feasible", g.feasible},
          {"low_confidence", g.low_confidence}};
}

const std::vector<std::string> kSummaryHeader{"k",   "beta_k",       "r_k",    "rho_k",    "a_k",
                                              "b_k", "c_k_estimate", "energy", "grad_norm"};

void print_summary(std::ostream& log, const Csv& csv) {
  // The CSV doubles as the printed table.
  log << csv.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int run_geometry(const RunConfig& cfg, Emitter& out, std::ostream& log) {
  const Problem pr = make_problem(cfg);
  json levels = json::array();
  Csv summary(kSummaryHeader);
  bool all_feasible = true;
  for (int k : cfg.k_range) {
    const GeometryReport g = compute_geometry(pr.model, k, cfg.geometry);
    levels.push_back(geometry_json(g));
    summary.row({double(k), g.beta_k, g.r_k, g.rho_k, g.a_k, g.b_k, kNaN, kNaN, kNaN});
    all_feasible = all_feasible && g.feasible;
  }
  out.json_file("result.json", {{"schema_version", kSchemaVersion},
                                {"run", to_json(cfg)},
                                {"levels", levels},
                                {"all_feasible", all_feasible}});
  out.text_file("summary.csv", summary.str());
  print_summary(log, summary);
  return 0;
}

int run_solve(const RunConfig& cfg, Emitter& out, std::ostream& log) {
  const Problem pr = make_problem(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const CriticalSequence cs = find_critical_sequence(pr.model, cfg.k_range, cfg.geometry, cfg.minimax);
  const double elapsed = seconds_since(t0);

  json levels = json::array();
  Csv summary(kSummaryHeader);
  for (const LevelOutcome& lv : cs.levels) {
    json l = geometry_json(lv.geometry);
    const GeometryReport& g = lv.geometry;
    double c_est = kNaN;
    if (lv.minimax) {
      const MinimaxResult& m = *lv.minimax;
      c_est = m.c_k_estimate;
      l["c_k_estimate"] = number(m.c_k_estimate);
      l["initial_sup"] = number(m.initial_sup);
      l["status"] = to_string(m.status);
      l["rounds"] = m.rounds.size();
      if (m.linking) {
        l["linking"] = {{"sphere_gap", m.linking->sphere_gap},
                        {"projection_norm", m.linking->projection_norm}};
      }
      Csv conv({"round", "sup", "grad_norm", "eps", "moved"});
      for (const RoundRecord& r : m.rounds) {
        conv.row({double(r.round), r.sup, r.grad_norm, r.eps, double(r.moved)});
      }
      out.text_file("convergence_k" + std::to_string(lv.k) + ".csv", conv.str());
    }
    double energy = kNaN, gnorm = kNaN;
    if (lv.point) {
      energy = lv.point->energy;
      gnorm = lv.point->grad_norm;
      l["energy"] = energy;
      l["grad_norm"] = gnorm;
      l["duplicate"] = lv.duplicate;
    }
    if (!lv.failure.empty()) l["failure"] = lv.failure;
    levels.push_back(l);
    summary.row({double(lv.k), g.beta_k, g.r_k, g.rho_k, g.a_k, g.b_k, c_est, energy, gnorm});
  }

  json points = json::array();
  for (const CriticalPoint& p : cs.points) {
    json j = {{"k", p.level_k},
              {"energy", p.energy},
              {"grad_norm", p.grad_norm},
              {"el_residual", p.el_residual},
              {"morse_index", p.morse_index},
              {"nullity", p.nullity}};
    j.update(pr.coeffs(p.coords));
    points.push_back(j);
    out.text_file("profile_k" + std::to_string(p.level_k) + ".csv", pr.profile_csv(p.coords, cfg.profile_points));
  }
  out.json_file("result.json",
                {{"schema_version", kSchemaVersion}, {"run", to_json(cfg)}, {"levels", levels}, {"points", points}});
  out.text_file("summary.csv", summary.str());
  // Wall-clock time lives in its own file so result.json stays reproducible.
  out.json_file("timing.json", {{"solve_seconds", elapsed}});
  print_summary(log, summary);
  return 0;
}

int run_degree_demo(const RunConfig& cfg, Emitter& out, std::ostream& log) {
  json cases = json::array();
  bool all_match = true;
  auto record = [&](const std::string& name, int dim, int expected, const degree::DegreeResult& r) {
    const bool match = r.degree == expected;
    all_match = all_match && match;
    cases.push_back({{"case", name},
                     {"dim", dim},
                     {"degree", r.degree},
                     {"expected", expected},
                     {"certified", r.certified},
                     {"method", r.method == degree::Method::sign_count ? "sign_count" : "winding_2d"},
                     {"zeros", r.zeros.size()}});
    log << name << " (m=" << dim << "): degree " << r.degree << ", expected " << expected << "\n";
  };

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss;
  {
    const int m = 3;
    Vector y(m);
    for (int i = 0; i < m; ++i) y[i] = gauss(rng);
    y *= 0.5 / y.norm();
    degree::FiniteMap f{[y](const Vector& x) { return Vector(x - y); },
                        [m](const Vector&) { return Matrix(Matrix::Identity(m, m)); }};
    record("translation", m, 1, degree::brouwer_degree(f, degree::Region::ball(Vector::Zero(m), 1.0)));
  }
  for (int m = 1; m <= 4; ++m) {
    degree::FiniteMap f{[](const Vector& x) { return Vector(-x); },
                        [m](const Vector&) { return Matrix(-Matrix::Identity(m, m)); }, true};
    record("antipodal", m, m % 2 == 0 ? 1 : -1,
           degree::brouwer_degree(f, degree::Region::ball(Vector::Zero(m), 1.0)));
  }
  {
    degree::FiniteMap f{[](const Vector& x) {
                          Vector r(2);
                          r << x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1];
                          return r;
                        },
                        nullptr};
    const auto disc = degree::Region::ball(Vector::Zero(2), 1.0);
    record("squaring", 2, 2, degree::brouwer_degree(f, disc));
    record("squaring", 2, 2, degree::winding_degree_2d(f, disc));
  }
  out.json_file("result.json",
                {{"schema_version", kSchemaVersion}, {"seed", cfg.seed}, {"cases", cases}, {"all_match", all_match}});
  return all_match ? 0 : 1;
}

int run_deform_check(const RunConfig& cfg, Emitter& out, std::ostream& log) {
  const Problem pr = make_problem(cfg);
  const GalerkinSpace& space = pr.model.phi().space();
  space.check_level(cfg.deform.k);
  const IndefiniteFunctional quadratic = IndefiniteFunctional::quadratic(space);
  const IndefiniteFunctional& phi = cfg.deform.use_problem ? pr.model.phi() : quadratic;
  const auto S = deform::InvariantSet::sphere(space.filtration(cfg.deform.k).yk_indices(),
                                              cfg.deform.sphere_radius, space.dim());
  const deform::DeformationParams params(phi, cfg.deform.c, cfg.deform.eps, cfg.deform.delta, S);
  const deform::DeformationReport rep =
      deform::verify_deformation_properties(params, cfg.deform.samples, cfg.seed);

  auto prop = [](const deform::PropertyCheck& p) {
    return json{{"passed", p.passed},
                {"asserted", p.asserted},
                {"checked", p.checked},
                {"worst", number(p.worst)},
                {"note", p.note}};
  };
  json j = {{"schema_version", kSchemaVersion},
            {"run", to_json(cfg)},
            {"functional", cfg.deform.use_problem ? pr.model.name : std::string("quadratic")},
            {"params",
             {{"k", cfg.deform.k},
              {"c", cfg.deform.c},
              {"eps", cfg.deform.eps},
              {"delta", cfg.deform.delta},
              {"sphere_radius", cfg.deform.sphere_radius},
              {"samples", cfg.deform.samples}}},
            {"hypothesis",
             {{"holds", rep.hypothesis.holds},
              {"samples", rep.hypothesis.samples},
              {"min_gradient", number(rep.hypothesis.min_gradient)},
              {"required", rep.hypothesis.required}}},
            {"identity", prop(rep.identity)},
            {"sublevel", prop(rep.sublevel)},
            {"displacement", prop(rep.displacement)},
            {"monotone", prop(rep.monotone)},
            {"oddness", prop(rep.oddness)},
            {"continuity", prop(rep.continuity)},
            {"all_passed", rep.all_passed()}};
  out.json_file("result.json", j);
  log << "gradient hypothesis " << (rep.hypothesis.holds ? "holds" : "FAILS") << "; properties "
      << (rep.all_passed() ? "pass" : "FAIL") << "\n";
  if (!rep.hypothesis.holds) return 2;
  return rep.all_passed() ? 0 : 1;
}

}  // namespace fountain::cli
