#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fountain/deformation.hpp"
#include "fountain/elliptic.hpp"
#include "fountain/geometry.hpp"
#include "fountain/minimax.hpp"
#include "fountain/schrodinger.hpp"
#include "fountain/synthetic.hpp"

namespace fountain::cli {

enum class Command { geometry, solve, degree_demo, deform_check };
enum class ProblemKind { schrodinger, elliptic, synthetic };

struct DeformCheckSettings {
  int k = 2;
  double c = 0.1;
  double eps = 0.01;
  double delta = 0.2;
  double sphere_radius = 1.0;  // S is the sphere of this radius in Y_k
  int samples = 200;
  bool use_problem = false;  // false: quadratic part of the problem's space only
};

struct RunConfig {
  Command command = Command::solve;
  ProblemKind problem = ProblemKind::schrodinger;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  schrodinger::Config schrodinger;
  elliptic::Config elliptic;
  synthetic::Config synthetic;
  std::vector<int> k_range{2, 3, 4};
  GeometryOptions geometry;
  MinimaxOptions minimax;
  DeformCheckSettings deform;
  int profile_points = 256;
};

Command parse_command(const std::string& name);
const char* to_string(Command c);
const char* to_string(ProblemKind p);

// Applies `key.path=json-value` on top of the document.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Validates the document and fills a RunConfig; unknown keys are errors.
// The master seed drives every stochastic stream; seed 1 keeps the library defaults.
RunConfig load_config(const nlohmann::json& doc, Command command);

// Echo of the effective configuration, written next to the results.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace fountain::cli
