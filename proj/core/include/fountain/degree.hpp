#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fountain/errors.hpp"
#include "fountain/types.hpp"

namespace fountain::degree {

struct Tolerances {
  double zero = 1e-9;
  double boundary = 1e-7;
  double singular = 1e-8;
  double cluster = 1e-6;
};

struct Options {
  Tolerances tol;
  int grid_base = 8;           // start grid points per axis
  int min_starts = 512;        // low dimensions get a denser grid than grid_base^m
  int max_grid_points = 20000;  // above this the grid is replaced by random starts
  int random_starts_per_dim = 32;
  int boundary_samples = 0;  // 0 = automatic (depends on dimension)
  int max_retries = 5;
  double perturb_eps = 1e-6;
  int newton_max_iter = 80;
  std::uint64_t seed = 0x5eed;
};

// Open bounded region in R^m. Star regions are star-shaped about the origin
// and described by the distance to the boundary along each unit direction.
class Region {
 public:
  enum class Kind { ball, box, star };
  using RadialFn = std::function<double(const Vector& unit_direction)>;

  static Region ball(Vector center, double radius);
  static Region box(Vector center, Vector half_widths);
  static Region star(int dim, RadialFn radial, double outer_bound);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(center_.size()); }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  const Vector& half_widths() const { return half_; }

  // Minkowski gauge about the center: < 1 inside, = 1 on the boundary.
  double gauge(const Vector& x) const;
  bool contains(const Vector& x) const { return gauge(x) < 1.0; }
  // Boundary point reached from the center along `direction` (need not be unit).
  Vector boundary_point(const Vector& direction) const;
  // Half-widths of an axis-aligned box containing the region.
  Vector bounding_half_widths() const;
  bool symmetric() const;

 private:
  Kind kind_ = Kind::ball;
  Vector center_;
  double radius_ = 1.0;
  Vector half_;
  RadialFn radial_;
};

struct FiniteMap {
  std::function<Vector(const Vector&)> eval;
  std::function<Matrix(const Vector&)> jacobian;  // optional
  bool odd = false;

  Vector operator()(const Vector& x) const { return eval(x); }
  // Analytic Jacobian when supplied, central differences otherwise.
  Matrix jac(const Vector& x) const;
};

struct Zero {
  Vector point;
  int sign = 0;
  double det = 0.0;
};

enum class Method { sign_count, winding_2d };

struct DegreeResult {
  int degree = 0;
  std::vector<Zero> zeros;  // sorted lexicographically
  Method method = Method::sign_count;
  bool certified = false;
  int retries = 0;
  Vector perturbation;  // translate z used when the zeros belong to f - z
};

class BoundaryZeroError : public Error {
 public:
  BoundaryZeroError(const std::string& what, Vector point)
      : Error(what), point_(std::move(point)) {}
  const Vector& point() const { return point_; }

 private:
  Vector point_;
};

class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, DegreeResult partial)
      : Error(what), partial_(std::move(partial)) {}
  const DegreeResult& partial() const { return partial_; }

 private:
  DegreeResult partial_;
};

class HomotopyBoundaryZero : public Error {
 public:
  HomotopyBoundaryZero(const std::string& what, double t) : Error(what), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

class BorsukUlamSearchError : public Error {
 public:
  BorsukUlamSearchError(const std::string& what, Vector best, double residual)
      : Error(what), best_(std::move(best)), residual_(residual) {}
  const Vector& best() const { return best_; }
  double residual() const { return residual_; }

 private:
  Vector best_;
  double residual_;
};

// Spot-check f(-x) = -f(x) on random points of the region.
bool check_odd(const FiniteMap& f, const Region& region, int samples, std::uint64_t seed,
               double tol = 1e-9);

DegreeResult brouwer_degree(const FiniteMap& f, const Region& region, const Options& opt = {});

// Independent 2-D path: winding number of f along the boundary curve.
DegreeResult winding_degree_2d(const FiniteMap& f, const Region& region,
                               const Options& opt = {});

using MapFamily = std::function<FiniteMap(double t)>;
std::vector<int> homotopy_degree_constancy(const MapFamily& h, const Region& region,
                                           int t_samples, const Options& opt = {});

std::optional<Vector> existence_from_degree(const FiniteMap& f, const Region& region,
                                            const Options& opt = {});

struct BorsukOptions {
  Tolerances tol;
  int starts = 48;
  bool axis_starts = true;  // also start from each coordinate direction
  int max_iter = 60;
  double fd_step = 1e-6;
  int check_samples = 24;
  std::uint64_t seed = 0xb0b5;
  // Tried before the random starts.
  std::vector<Vector> initial_directions;
};

// Zero of an odd map on the boundary of a symmetric region, when the range of f
// lies in the coordinate subspace `range_coords` of dimension < m.
Vector borsuk_ulam_zero(const FiniteMap& f, const Region& region,
                        const std::vector<int>& range_coords, const BorsukOptions& opt = {});

}  // namespace fountain::degree
