#pragma once

#include <vector>

#include "fountain/errors.hpp"
#include "fountain/types.hpp"

namespace fountain {

enum class Target { Y, Z, Yk, Zk };

// Index bookkeeping for one level k of the filtration.
struct Filtration {
  int k = 2;
  int dim_y = 0;
  int dim_z = 0;

  int dim() const { return dim_y + dim_z; }
  int dim_yk() const { return dim_y + k + 1; }
  int dim_zk() const { return dim_z - k; }

  // Y_k occupies the leading coordinates [0, dim_y + k]; Z_k starts at e_k.
  bool in_yk(int coord) const { return coord >= 0 && coord < dim_yk(); }
  bool in_zk(int coord) const { return coord >= dim_y + k && coord < dim(); }
  int zk_begin() const { return dim_y + k; }

  std::vector<int> yk_indices() const;
  std::vector<int> zk_indices() const;
  // Coordinates of Y_k listed in the reordered basis e'_0..e'_{dimY_k-1}
  // (e_0..e_k first, then theta_0..).
  std::vector<int> reordered_yk() const;
};

class GalerkinSpace {
 public:
  GalerkinSpace(int dim_y, int dim_z);

  int dim_y() const { return dim_y_; }
  int dim_z() const { return dim_z_; }
  int dim() const { return dim_y_ + dim_z_; }
  int max_level() const { return dim_z_ - 1; }

  int theta_index(int j) const;
  int e_index(int j) const;
  Vector zero() const { return Vector::Zero(dim()); }
  Vector theta(int j) const;
  Vector e(int j) const;

  void check_level(int k) const;
  void check_vector(const Vector& u) const;
  Filtration filtration(int k) const;

  bool operator==(const GalerkinSpace& o) const {
    return dim_y_ == o.dim_y_ && dim_z_ == o.dim_z_;
  }

 private:
  int dim_y_;
  int dim_z_;
};

// k is ignored for the unfiltered targets.
Vector project(const GalerkinSpace& space, const Vector& u, Target target, int k = -1);

// Weighted l1 sum  sum_j 2^{-(j+1)} |c_j|  over the given coefficient list.
double sigma_norm(const Eigen::Ref<const Vector>& coeffs);

// max(sigma_norm(Pu in the theta basis), |Qu|)
double tau_norm(const GalerkinSpace& space, const Vector& u);

// max(sigma_norm(P_k u in the basis e'_j), |Q_{k+1} u|)
double tau_norm_k(const GalerkinSpace& space, const Vector& u, int k);

class LinkingSets {
 public:
  LinkingSets(const GalerkinSpace& space, int k, double rho, double r);

  int k() const { return filt_.k; }
  double rho() const { return rho_; }
  double r() const { return r_; }
  const Filtration& filtration() const { return filt_; }

  bool in_ball(const Vector& u, double tol = 1e-12) const;
  bool on_sphere(const Vector& u, double tol = 1e-9) const;

  // Embed Y_k coordinates (length dim_yk) into the ambient space and back.
  Vector embed(const Eigen::Ref<const Vector>& yk_coords) const;
  Vector restrict_to_yk(const Vector& u) const;

 private:
  Filtration filt_;
  double rho_;
  double r_;
};

}  // namespace fountain
