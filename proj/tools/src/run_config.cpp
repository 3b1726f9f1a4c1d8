#include "run_config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "fountain/errors.hpp"

namespace fountain::cli {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

void read_positive(const json& obj, const char* key, int& out, const std::string& where) {
  read(obj, key, out, where);
  if (out <= 0) throw ConfigError(where + "." + key + " must be positive");
}

void read_k_range(const json& obj, std::vector<int>& out, const std::string& where) {
  read(obj, "k_range", out, where);
  for (int k : out) {
    if (k < 1) throw ConfigError(where + ".k_range entries must be >= 1");
  }
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t master) {
  return base ^ ((master - 1) * 0x9e3779b97f4a7c15ULL);
}

schrodinger::Profile read_profile(const json& obj, const std::string& where) {
  if (obj.is_number()) return schrodinger::Profile::constant(obj.get<double>());
  only_keys(obj, where, {"kind", "params"});
  const std::string kind = obj.value("kind", "const");
  std::vector<double> params;
  read(obj, "params", params, where);
  if (kind == "const" || kind == "constant") {
    if (params.size() != 1) throw ConfigError(where + ": const takes one parameter");
    return schrodinger::Profile::constant(params[0]);
  }
  if (kind == "cosine") {
    if (params.size() != 3) throw ConfigError(where + ": cosine takes [c0, c1, freq]");
    if (params[2] != std::floor(params[2]) || params[2] < 1) {
      throw ConfigError(where + ": cosine frequency must be a positive integer");
    }
    return schrodinger::Profile::cosine(params[0], params[1], static_cast<int>(params[2]));
  }
  throw ConfigError(where + ": unknown profile kind '" + kind + "'");
}

json profile_json(const schrodinger::Profile& p) {
  if (p.kind == schrodinger::Profile::Kind::constant) return {{"kind", "const"}, {"params", {p.c0}}};
  return {{"kind", "cosine"}, {"params", {p.c0, p.c1, p.freq}}};
}

void read_problem(const json& blob, RunConfig& cfg) {
  const std::string w = "config";
  switch (cfg.problem) {
    case ProblemKind::schrodinger: {
      only_keys(blob, w, {"dim", "modes", "potential", "p", "amplitude", "gap_tol", "k_range", "seed"});
      auto& c = cfg.schrodinger;
      read(blob, "dim", c.dim, w);
      read_positive(blob, "modes", c.modes, w);
      if (blob.contains("potential")) c.potential = read_profile(blob["potential"], w + ".potential");
      if (blob.contains("amplitude")) c.amplitude = read_profile(blob["amplitude"], w + ".amplitude");
      read(blob, "p", c.p, w);
      read(blob, "gap_tol", c.gap_tol, w);
      read_k_range(blob, c.k_range, w);
      cfg.k_range = c.k_range;
      break;
    }
    case ProblemKind::elliptic: {
      only_keys(blob, w, {"L", "n_modes", "p", "H_model", "k_range", "seed"});
      auto& c = cfg.elliptic;
      read(blob, "L", c.L, w);
      read_positive(blob, "n_modes", c.n_modes, w);
      read(blob, "p", c.p, w);
      const std::string h = blob.value("H_model", "decoupled");
      if (h == "decoupled") c.h_model = elliptic::HModel::decoupled;
      else if (h == "coupled") c.h_model = elliptic::HModel::coupled;
      else throw ConfigError(w + ".H_model must be decoupled or coupled");
      read_k_range(blob, c.k_range, w);
      cfg.k_range = c.k_range;
      break;
    }
    case ProblemKind::synthetic: {
      only_keys(blob, w, {"dim_y", "dim_z", "p", "k_range", "seed"});
      auto& c = cfg.synthetic;
      read_positive(blob, "dim_y", c.dim_y, w);
      read_positive(blob, "dim_z", c.dim_z, w);
      read(blob, "p", c.p, w);
      read_k_range(blob, cfg.k_range, w);
      break;
    }
  }
  // The problem blob may carry its own seed; a top-level seed read later wins.
  read(blob, "seed", cfg.seed, w);
}

void read_minimax(const json& obj, MinimaxOptions& m) {
  const std::string w = "minimax";
  only_keys(obj, w, {"mesh_n", "axis_samples", "max_rounds", "stall_rounds", "eps_min", "delta_frac",
                     "crit_tol", "minimax_tol", "dedup_tol", "refine_candidates", "verify_linking"});
  read_positive(obj, "mesh_n", m.mesh_n, w);
  read(obj, "axis_samples", m.axis_samples, w);
  read(obj, "max_rounds", m.max_rounds, w);
  read_positive(obj, "stall_rounds", m.stall_rounds, w);
  read(obj, "eps_min", m.eps_min, w);
  read(obj, "delta_frac", m.delta_frac, w);
  read(obj, "crit_tol", m.crit_tol, w);
  read(obj, "minimax_tol", m.minimax_tol, w);
  read(obj, "dedup_tol", m.dedup_tol, w);
  read(obj, "refine_candidates", m.refine_candidates, w);
  read(obj, "verify_linking", m.verify_linking, w);
  if (m.axis_samples < 0 || m.max_rounds < 0 || m.refine_candidates < 0) {
    throw ConfigError("minimax: counts must be nonnegative");
  }
  if (!(m.delta_frac > 0.0 && m.delta_frac < 1.0)) throw ConfigError("minimax.delta_frac must lie in (0, 1)");
}

void read_geometry(const json& obj, GeometryOptions& g) {
  const std::string w = "geometry";
  only_keys(obj, w, {"beta_restarts", "extremum_restarts", "rho_start_factor", "max_doublings", "a_target"});
  read_positive(obj, "beta_restarts", g.beta.restarts, w);
  read_positive(obj, "extremum_restarts", g.extremum.restarts, w);
  read(obj, "rho_start_factor", g.rho_start_factor, w);
  read(obj, "max_doublings", g.max_doublings, w);
  read(obj, "a_target", g.a_target, w);
  if (!(g.rho_start_factor > 1.0)) throw ConfigError("geometry.rho_start_factor must exceed 1");
}

void read_deform(const json& obj, DeformCheckSettings& d) {
  const std::string w = "deform_check";
  only_keys(obj, w, {"k", "c", "eps", "delta", "sphere_radius", "samples", "use_problem"});
  read(obj, "k", d.k, w);
  read(obj, "c", d.c, w);
  read(obj, "eps", d.eps, w);
  read(obj, "delta", d.delta, w);
  read(obj, "sphere_radius", d.sphere_radius, w);
  read_positive(obj, "samples", d.samples, w);
  read(obj, "use_problem", d.use_problem, w);
  if (!(d.eps > 0.0 && d.delta > 0.0 && d.sphere_radius > 0.0)) {
    throw ConfigError("deform_check: eps, delta and sphere_radius must be positive");
  }
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "geometry") return Command::geometry;
  if (name == "solve") return Command::solve;
  if (name == "degree-demo") return Command::degree_demo;
  if (name == "deform-check") return Command::deform_check;
  throw ConfigError("unknown command '" + name + "'");
}

const char* to_string(Command c) {
  switch (c) {
    case Command::geometry: return "geometry";
    case Command::solve: return "solve";
    case Command::degree_demo: return "degree-demo";
    case Command::deform_check: return "deform-check";
  }
  return "?";
}

const char* to_string(ProblemKind p) {
  switch (p) {
    case ProblemKind::schrodinger: return "schrodinger";
    case ProblemKind::elliptic: return "elliptic";
    case ProblemKind::synthetic: return "synthetic";
  }
  return "?";
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;  // bare words are strings
  }
  json* node = &doc;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw ConfigError("override path '" + path + "' crosses a non-object");
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw ConfigError("override path '" + path + "' crosses a non-object");
  (*node)[parts.back()] = value;
}

RunConfig load_config(const json& doc, Command command) {
  only_keys(doc, "config file",
            {"problem", "config", "seed", "output_dir", "geometry", "minimax", "deform_check", "profile_points"});
  RunConfig cfg;
  cfg.command = command;
  const std::string problem = doc.value("problem", "schrodinger");
  if (problem == "schrodinger") cfg.problem = ProblemKind::schrodinger;
  else if (problem == "elliptic") cfg.problem = ProblemKind::elliptic;
  else if (problem == "synthetic") cfg.problem = ProblemKind::synthetic;
  else throw ConfigError("problem must be schrodinger, elliptic or synthetic");

  read_problem(doc.contains("config") ? doc["config"] : json::object(), cfg);
  read(doc, "seed", cfg.seed, "config file");
  std::string out_dir = cfg.output_dir.string();
  read(doc, "output_dir", out_dir, "config file");
  cfg.output_dir = out_dir;
  if (doc.contains("geometry")) read_geometry(doc["geometry"], cfg.geometry);
  if (doc.contains("minimax")) read_minimax(doc["minimax"], cfg.minimax);
  if (doc.contains("deform_check")) read_deform(doc["deform_check"], cfg.deform);
  read(doc, "profile_points", cfg.profile_points, "config file");
  if (cfg.profile_points < 2) throw ConfigError("profile_points must be at least 2");
  if (cfg.k_range.empty() && command != Command::degree_demo) throw ConfigError("k_range is empty");

  const std::uint64_t s = cfg.seed;
  cfg.schrodinger.seed = s;
  cfg.elliptic.seed = s;
  cfg.synthetic.seed = s;
  cfg.schrodinger.k_range = cfg.k_range;
  cfg.elliptic.k_range = cfg.k_range;
  cfg.geometry.beta.seed = stream_seed(cfg.geometry.beta.seed, s);
  cfg.geometry.extremum.seed = stream_seed(cfg.geometry.extremum.seed, s);
  cfg.minimax.seed = stream_seed(cfg.minimax.seed, s);
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json j;
  j["command"] = to_string(cfg.command);
  j["problem"] = to_string(cfg.problem);
  j["seed"] = cfg.seed;
  j["k_range"] = cfg.k_range;
  switch (cfg.problem) {
    case ProblemKind::schrodinger: {
      const auto& c = cfg.schrodinger;
      j["config"] = {{"dim", c.dim},        {"modes", c.modes},
                     {"potential", profile_json(c.potential)},
                     {"p", c.p},            {"amplitude", profile_json(c.amplitude)},
                     {"gap_tol", c.gap_tol}};
      break;
    }
    case ProblemKind::elliptic: {
      const auto& c = cfg.elliptic;
      j["config"] = {{"L", c.L}, {"n_modes", c.n_modes}, {"p", c.p},
                     {"H_model", c.h_model == elliptic::HModel::coupled ? "coupled" : "decoupled"}};
      break;
    }
    case ProblemKind::synthetic: {
      const auto& c = cfg.synthetic;
      j["config"] = {{"dim_y", c.dim_y}, {"dim_z", c.dim_z}, {"p", c.p}};
      break;
    }
  }
  const auto& m = cfg.minimax;
  j["minimax"] = {{"mesh_n", m.mesh_n},
                  {"axis_samples", m.axis_samples},
                  {"max_rounds", m.max_rounds},
                  {"stall_rounds", m.stall_rounds},
                  {"eps_min", m.eps_min},
                  {"delta_frac", m.delta_frac},
                  {"crit_tol", m.crit_tol},
                  {"minimax_tol", m.minimax_tol},
                  {"dedup_tol", m.dedup_tol},
                  {"refine_candidates", m.refine_candidates},
                  {"verify_linking", m.verify_linking}};
  return j;
}

}  // namespace fountain::cli
