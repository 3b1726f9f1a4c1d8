#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fountain/degree.hpp"
#include "fountain/errors.hpp"
#include "fountain/functional.hpp"

namespace fountain {

// u -> integral of |u(x)|^p over the domain, as a function of coordinates.
struct LpPower {
  double p = 4.0;
  ScalarField power;
  VectorField power_grad;

  double norm(const Vector& u) const;
};

// What the fountain pipeline needs from an application.
struct ProblemModel {
  std::shared_ptr<const IndefiniteFunctional> functional;
  LpPower lp;
  double growth_c = 1.0;  // constant c of r_k = (c p beta_k^p)^{1/(2-p)}
  // Closed-form lower bound for b_k as a function of beta_k.
  std::function<double(double beta)> b_lower_bound;
  // Norm of the Euler-Lagrange residual in coordinates (independent of grad()).
  ScalarField el_residual;
  std::string name;

  const IndefiniteFunctional& phi() const { return *functional; }
};

class CoercivityError : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

struct BetaOptions {
  int restarts = 16;
  int max_iter = 20000;
  double tol = 1e-14;
  double beta_tol = 1e-6;
  std::uint64_t seed = 11;
};

struct BetaResult {
  double value = 0.0;
  Vector maximizer;  // unit vector in Z_k
  int agreeing_restarts = 0;
  bool low_confidence = false;
};

// sup of |v|_p over the unit sphere of Z_k.
BetaResult compute_beta_k(const GalerkinSpace& space, int k, const LpPower& lp,
                          const BetaOptions& opt = {});

double compute_r_k(double c, double p, double beta);

enum class Extremum { sup, inf };

struct ExtremumOptions {
  int restarts = 12;
  int max_iter = 4000;
  double grad_tol = 1e-10;
  double extremum_tol = 1e-6;
  std::uint64_t seed = 23;
  std::vector<Vector> extra_starts;  // ambient vectors, projected and rescaled
};

struct ExtremumResult {
  double value = 0.0;
  Vector argbest;
  int agreeing_restarts = 0;
  bool low_confidence = false;
};

// Extremum of phi on {u in span(coords) : |u| = radius}.
ExtremumResult estimate_sphere_extremum(const IndefiniteFunctional& phi,
                                        const std::vector<int>& coords, double radius,
                                        Extremum mode, const ExtremumOptions& opt = {});

// sup of phi over the closed ball of the given radius in span(coords).
ExtremumResult estimate_ball_sup(const IndefiniteFunctional& phi, const std::vector<int>& coords,
                                 double radius, const ExtremumOptions& opt = {});

struct RhoOptions {
  double rho_start = 1.0;
  int max_doublings = 12;
  ExtremumOptions extremum;
};

struct RhoResult {
  double rho = 0.0;
  double a_value = 0.0;
  int doublings = 0;
};

// First rho = rho_start * 2^i with sup over the Y_k sphere <= a_target.
RhoResult choose_rho_k(const IndefiniteFunctional& phi, int k, double a_target,
                       const RhoOptions& opt = {});

struct GeometryOptions {
  BetaOptions beta;
  ExtremumOptions extremum;
  double rho_start_factor = 2.0;  // first rho tried is this multiple of r_k
  int max_doublings = 12;
  double a_target = 0.0;
  bool compute_d = true;
};

struct GeometryReport {
  int k = 0;
  double beta_k = 0.0;
  double r_k = 0.0;
  double rho_k = 0.0;
  double a_k = 0.0;
  double b_k = 0.0;
  double d_k = 0.0;
  double b_lower_bound = 0.0;
  bool feasible = false;
  bool low_confidence = false;
  Vector b_argmin;  // minimizer of phi on the Z_k sphere
  Vector d_argmax;  // maximizer of phi on the Y_k ball
};

GeometryReport compute_geometry(const ProblemModel& model, int k, const GeometryOptions& opt = {});

// Evaluator of gamma on Y_k coordinates, returning ambient vectors.
using SurfaceMap = std::function<Vector(const Vector& yk_coords)>;

struct LinkingOptions {
  int boundary_checks = 16;
  int scan_steps = 16;
  double identity_tol = 1e-9;
  double tol = 1e-6;
  degree::BorsukOptions borsuk;
  std::uint64_t seed = 31;
};

struct LinkingResult {
  Vector u0;     // point of B_k (ambient coordinates)
  Vector image;  // gamma(u0), a point of N_k
  double sphere_gap = 0.0;       // | |gamma(u0)| - r_k |
  double projection_norm = 0.0;  // |P_{k-1} gamma(u0)|
};

class LinkingError : public Error {
 public:
  using Error::Error;
};

LinkingResult verify_linking(const SurfaceMap& gamma, const LinkingSets& link,
                             const LinkingOptions& opt = {});

}  // namespace fountain
