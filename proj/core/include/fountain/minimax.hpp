#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fountain/deformation.hpp"
#include "fountain/geometry.hpp"

namespace fountain {

struct MinimaxOptions {
  int mesh_n = 4096;  // mesh points in B_k, antipodal pairs included
  int axis_samples = 64;  // extra samples on the segment through e_k
  int max_rounds = 16;
  int stall_rounds = 8;
  double eps_min = 1e-7;
  double delta_frac = 0.1;
  double crit_tol = 1e-6;
  double minimax_tol = 1e-4;
  double dedup_tol = 1e-4;
  int refine_candidates = 2;
  int refine_stages = 3;  // probe scales 0.05 rho / sqrt(dim) * 4^-s
  int refine_probes = 6;
  double int_tol = 1e-8;
  bool throw_on_stall = false;
  bool verify_linking = true;
  // With verify_linking the crossing of the surface with N_k is re-solved after
  // every step to linking_zero_tol, replaying gamma at linking_int_tol, with at
  // most linking_max_calls evaluations of gamma. A step that loses it is
  // retried with half the epsilon.
  double linking_zero_tol = 1e-7;
  double linking_int_tol = 1e-10;
  int linking_max_calls = 400;
  std::uint64_t seed = 41;
  std::function<void(const struct RoundRecord&)> on_round;  // progress hook
};

// One deformation eta(1, .) applied to the whole surface. S is the symmetric
// cloud of the surface points that were inside the band when the step was taken,
// which caps every displacement at about 2 delta.
struct DeformationStep {
  double c = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  std::shared_ptr<const deform::InvariantSet> S;
};

struct PsPoint {
  Vector u;
  double energy = 0.0;
  double grad_norm = 0.0;
  int round = 0;
};

struct RoundRecord {
  int round = 0;
  double sup = 0.0;
  double grad_norm = 0.0;  // at the witness
  double eps = 0.0;
  int moved = 0;
};

enum class MinimaxStatus { converged, eps_exhausted, max_rounds, stalled };
const char* to_string(MinimaxStatus s);

struct MinimaxResult {
  int k = 0;
  double c_k_estimate = 0.0;
  double initial_sup = 0.0;
  std::vector<PsPoint> ps_points;        // per-round witnesses of the sup
  std::vector<PsPoint> flow_candidates;  // lowest-gradient band point seen per round
  std::vector<DeformationStep> surface_log;
  std::vector<RoundRecord> rounds;
  MinimaxStatus status = MinimaxStatus::max_rounds;
  std::optional<LinkingResult> linking;
};

class StallError : public Error {
 public:
  StallError(const std::string& what, MinimaxResult partial)
      : Error(what), partial_(std::move(partial)) {}
  const MinimaxResult& partial() const { return partial_; }

 private:
  MinimaxResult partial_;
};

// gamma = eta_n o ... o eta_1 restricted to B_k, evaluated on Y_k coordinates.
SurfaceMap surface_map(const IndefiniteFunctional& phi, const LinkingSets& link,
                       const std::vector<DeformationStep>& log, double int_tol = 1e-8);

MinimaxResult minimax_descend(const IndefiniteFunctional& phi, const GeometryReport& geo,
                              const MinimaxOptions& opt = {});

struct CriticalPoint {
  Vector coords;
  double energy = 0.0;
  double grad_norm = 0.0;
  int level_k = 0;
  int morse_index = 0;
  int nullity = 0;
  double el_residual = 0.0;
};

struct PolishOptions {
  int max_iter = 200;
  double target = 1e-11;
  double lambda0 = 1e-3;
};

struct PolishResult {
  Vector u;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Levenberg-Marquardt on grad phi = 0 with the Hessian as Jacobian.
PolishResult polish(const IndefiniteFunctional& phi, const Vector& start, double crit_tol,
                    const PolishOptions& opt = {});

struct LevelOutcome {
  int k = 0;
  GeometryReport geometry;
  std::optional<MinimaxResult> minimax;
  std::optional<CriticalPoint> point;
  bool duplicate = false;  // point coincides with an earlier level's up to sign
  std::string failure;
};

struct CriticalSequence {
  std::vector<CriticalPoint> points;  // deduplicated, sorted by energy
  std::vector<LevelOutcome> levels;   // in k_range order
};

// True when a and b, or a and -b, agree to tol.
bool same_orbit(const Vector& a, const Vector& b, double tol);

CriticalSequence find_critical_sequence(const ProblemModel& model, const std::vector<int>& k_range,
                                        const GeometryOptions& gopt = {},
                                        const MinimaxOptions& mopt = {});

}  // namespace fountain
