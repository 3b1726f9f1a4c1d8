#include "fountain/spaces.hpp"

#include <cmath>
#include <string>

namespace fountain {

std::vector<int> Filtration::yk_indices() const {
  std::vector<int> idx(dim_yk());
  for (int i = 0; i < dim_yk(); ++i) idx[i] = i;
  return idx;
}

std::vector<int> Filtration::zk_indices() const {
  std::vector<int> idx;
  idx.reserve(dim_zk());
  for (int i = zk_begin(); i < dim(); ++i) idx.push_back(i);
  return idx;
}

std::vector<int> Filtration::reordered_yk() const {
  std::vector<int> idx;
  idx.reserve(dim_yk());
  for (int j = 0; j <= k; ++j) idx.push_back(dim_y + j);
  for (int j = 0; j < dim_y; ++j) idx.push_back(j);
  return idx;
}

GalerkinSpace::GalerkinSpace(int dim_y, int dim_z) : dim_y_(dim_y), dim_z_(dim_z) {
  if (dim_y < 1) throw std::invalid_argument("GalerkinSpace: dim_y must be >= 1");
  if (dim_z < 3) throw std::invalid_argument("GalerkinSpace: dim_z must be >= 3");
}

int GalerkinSpace::theta_index(int j) const {
  if (j < 0 || j >= dim_y_) throw std::out_of_range("theta index " + std::to_string(j));
  return j;
}

int GalerkinSpace::e_index(int j) const {
  if (j < 0 || j >= dim_z_) throw std::out_of_range("e index " + std::to_string(j));
  return dim_y_ + j;
}

Vector GalerkinSpace::theta(int j) const {
  Vector v = zero();
  v[theta_index(j)] = 1.0;
  return v;
}

Vector GalerkinSpace::e(int j) const {
  Vector v = zero();
  v[e_index(j)] = 1.0;
  return v;
}

void GalerkinSpace::check_level(int k) const {
  if (k < 2 || k > max_level()) {
    throw LevelOutOfRange("level k=" + std::to_string(k) + " outside [2, " +
                          std::to_string(max_level()) + "]");
  }
}

void GalerkinSpace::check_vector(const Vector& u) const {
  if (u.size() != dim()) {
    throw std::invalid_argument("vector has " + std::to_string(u.size()) +
                                " coordinates, space has " + std::to_string(dim()));
  }
}

Filtration GalerkinSpace::filtration(int k) const {
  check_level(k);
  return Filtration{k, dim_y_, dim_z_};
}

Vector project(const GalerkinSpace& space, const Vector& u, Target target, int k) {
  space.check_vector(u);
  Vector out = Vector::Zero(u.size());
  const int ny = space.dim_y();
  switch (target) {
    case Target::Y:
      out.head(ny) = u.head(ny);
      break;
    case Target::Z:
      out.tail(space.dim_z()) = u.tail(space.dim_z());
      break;
    case Target::Yk: {
      const Filtration f = space.filtration(k);
      out.head(f.dim_yk()) = u.head(f.dim_yk());
      break;
    }
    case Target::Zk: {
      const Filtration f = space.filtration(k);
      out.tail(f.dim_zk()) = u.tail(f.dim_zk());
      break;
    }
  }
  return out;
}

double sigma_norm(const Eigen::Ref<const Vector>& coeffs) {
  double sum = 0.0;
  double w = 0.5;
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
    sum += w * std::abs(coeffs[j]);
    w *= 0.5;
  }
  return sum;
}

double tau_norm(const GalerkinSpace& space, const Vector& u) {
  space.check_vector(u);
  const double p_part = sigma_norm(u.head(space.dim_y()));
  const double q_part = u.tail(space.dim_z()).norm();
  return std::max(p_part, q_part);
}

double tau_norm_k(const GalerkinSpace& space, const Vector& u, int k) {
  space.check_vector(u);
  const Filtration f = space.filtration(k);
  const auto order = f.reordered_yk();
  Vector c(order.size());
  for (size_t i = 0; i < order.size(); ++i) c[static_cast<Eigen::Index>(i)] = u[order[i]];
  // Q_{k+1}: coordinates e_{k+1}, ...
  const int tail = space.dim_z() - (k + 1);
  const double q_part = tail > 0 ? u.tail(tail).norm() : 0.0;
  return std::max(sigma_norm(c), q_part);
}

LinkingSets::LinkingSets(const GalerkinSpace& space, int k, double rho, double r)
    : filt_(space.filtration(k)), rho_(rho), r_(r) {
  if (!(r > 0.0) || !(r < rho)) {
    throw std::invalid_argument("LinkingSets: need 0 < r_k < rho_k");
  }
}

bool LinkingSets::in_ball(const Vector& u, double tol) const {
  if (u.size() != filt_.dim()) return false;
  const int ny = filt_.dim_yk();
  const int rest = filt_.dim() - ny;
  if (rest > 0 && u.tail(rest).cwiseAbs().maxCoeff() > tol) return false;
  return u.norm() <= rho_ + tol;
}

bool LinkingSets::on_sphere(const Vector& u, double tol) const {
  if (u.size() != filt_.dim()) return false;
  const int b = filt_.zk_begin();
  if (b > 0 && u.head(b).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(u.norm() - r_) <= tol;
}

Vector LinkingSets::embed(const Eigen::Ref<const Vector>& yk_coords) const {
  if (yk_coords.size() != filt_.dim_yk()) {
    throw std::invalid_argument("embed: expected Y_k coordinates");
  }
  Vector u = Vector::Zero(filt_.dim());
  u.head(filt_.dim_yk()) = yk_coords;
  return u;
}

Vector LinkingSets::restrict_to_yk(const Vector& u) const { return u.head(filt_.dim_yk()); }

}  // namespace fountain
