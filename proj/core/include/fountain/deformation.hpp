#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fountain/errors.hpp"
#include "fountain/functional.hpp"

namespace fountain::deform {

// The set S of the deformation lemma, given through a distance oracle.
class InvariantSet {
 public:
  enum class Kind { whole_space, point_cloud, sphere };

  static InvariantSet whole_space();
  // With symmetrize the cloud is closed under u -> -u.
  static InvariantSet point_cloud(std::vector<Vector> points, bool symmetrize = true);
  // Sphere of the given radius inside the coordinate subspace `coords` of R^dim.
  static InvariantSet sphere(std::vector<int> coords, double radius, int dim);

  Kind kind() const { return kind_; }
  double distance(const Vector& u) const;
  bool symmetric() const;
  bool samplable() const { return kind_ != Kind::whole_space; }
  Vector sample(std::mt19937_64& rng) const;

 private:
  Kind kind_ = Kind::whole_space;
  std::vector<Vector> cloud_;
  std::vector<int> coords_;
  double radius_ = 0.0;
  int dim_ = 0;
};

struct DeformationParams {
  DeformationParams(const IndefiniteFunctional& phi, double c, double eps, double delta,
                    InvariantSet S = InvariantSet::whole_space());

  const IndefiniteFunctional* functional;
  double c;
  double eps;
  double delta;
  InvariantSet S;
  double int_tol = 1e-8;
  int max_steps = 100000;
  // Gradient norm below which an active point counts as a critical point.
  double critical_tol = 1e-10;
  // Test hook: replaces the cutoff when set.
  std::function<double(const Vector&)> cutoff_override;
};

struct FieldEval {
  Vector value;
  double cutoff = 0.0;
  bool critical_hit = false;
};

double cutoff(const DeformationParams& params, const Vector& u);
FieldEval pseudo_gradient_field(const DeformationParams& params, const Vector& u);

struct TrajectorySample {
  double t;  // deformation time in [0, 1]
  Vector u;
  double phi;
};

struct FlowResult {
  Vector endpoint;
  std::vector<TrajectorySample> trajectory;
  std::vector<double> energy_profile;
  double displacement = 0.0;
  int steps = 0;
  std::optional<Vector> critical_point;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, FlowResult partial)
      : Error(what), partial_(std::move(partial)) {}
  const FlowResult& partial() const { return partial_; }

 private:
  FlowResult partial_;
};

// eta(t_end, u0): integrates du/ds = -f(u) over ODE time 2*eps*t_end.
FlowResult flow(const DeformationParams& params, const Vector& u0, double t_end = 1.0,
                bool record = true);

// Endpoint only, no trajectory bookkeeping.
Vector deform(const DeformationParams& params, const Vector& u0);

struct GradientBound {
  int samples = 0;
  double min_gradient = 0.0;
  double required = 0.0;  // 8 eps / delta
  bool holds = false;
};

// Samples the working region A and compares |grad phi| with 8 eps / delta.
GradientBound gradient_bound_check(const DeformationParams& params, int samples,
                                   std::uint64_t seed);

struct PropertyCheck {
  bool passed = true;
  bool asserted = true;
  int checked = 0;
  double worst = 0.0;
  std::string note;
};

struct DeformationReport {
  GradientBound hypothesis;
  PropertyCheck identity;      // (i)
  PropertyCheck sublevel;      // (ii)
  PropertyCheck displacement;  // (iii)
  PropertyCheck monotone;      // (iv)
  PropertyCheck oddness;       // (vii)
  PropertyCheck continuity;    // (v)-(vi) spot check
  bool all_passed() const;
};

struct ReportTolerances {
  double displacement = 1e-6;
  double monotone = 1e-8;
  double oddness = 1e-8;
  double sublevel = 1e-6;
};

DeformationReport verify_deformation_properties(const DeformationParams& params,
                                                int sample_count, std::uint64_t seed,
                                                const ReportTolerances& tol = {});

}  // namespace fountain::deform
