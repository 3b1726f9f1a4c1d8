#pragma once

#include <iosfwd>

#include "emitter.hpp"
#include "run_config.hpp"

namespace fountain::cli {

// Each command fills the emitter and returns the process exit code.
// Exceptions propagate; main maps them to exit codes.
int run_geometry(const RunConfig& cfg, Emitter& out, std::ostream& log);
int run_solve(const RunConfig& cfg, Emitter& out, std::ostream& log);
int run_degree_demo(const RunConfig& cfg, Emitter& out, std::ostream& log);
int run_deform_check(const RunConfig& cfg, Emitter& out, std::ostream& log);

}  // namespace fountain::cli
