#include "fountain/degree.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace fountain::degree {

namespace {

Vector random_direction(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector d(m);
  do {
    for (int i = 0; i < m; ++i) d[i] = g(rng);
  } while (d.norm() < 1e-12);
  return d / d.norm();
}

// Uniform point in the region (by rejection from the bounding box for boxes,
// by radius scaling for balls and star regions).
Vector random_interior(const Region& region, std::mt19937_64& rng) {
  const int m = region.dim();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (region.kind() == Region::Kind::box) {
    Vector x(m);
    for (int i = 0; i < m; ++i) {
      x[i] = region.center()[i] + (2.0 * u(rng) - 1.0) * region.half_widths()[i];
    }
    return x;
  }
  const Vector d = random_direction(m, rng);
  const double s = std::pow(u(rng), 1.0 / m);
  return region.center() + s * (region.boundary_point(d) - region.center());
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

std::vector<Vector> boundary_sample_points(const Region& region, int count,
                                           std::mt19937_64& rng) {
  const int m = region.dim();
  std::vector<Vector> pts;
  if (m == 1) {
    pts.push_back(region.boundary_point(Vector::Constant(1, 1.0)));
    pts.push_back(region.boundary_point(Vector::Constant(1, -1.0)));
    return pts;
  }
  if (m == 2) {
    const int n = std::max(count, 720);
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * std::numbers::pi * i / n;
      Vector d(2);
      d << std::cos(a), std::sin(a);
      pts.push_back(region.boundary_point(d));
    }
    return pts;
  }
  for (int i = 0; i < count; ++i) pts.push_back(region.boundary_point(random_direction(m, rng)));
  return pts;
}

struct NewtonOutcome {
  bool converged = false;
  Vector x;
  double residual = 0.0;
};

NewtonOutcome damped_newton(const FiniteMap& f, Vector x, const Region& region,
                            const Options& opt) {
  NewtonOutcome out;
  Vector fx = f(x);
  double nf = fx.norm();
  for (int it = 0; it < opt.newton_max_iter; ++it) {
    if (nf <= opt.tol.zero) break;
    const Matrix J = f.jac(x);
    Vector dx = J.fullPivLu().solve(-fx);
    if (!dx.allFinite() || (J * dx + fx).norm() > 1e-6 * std::max(1.0, nf)) {
      dx = J.completeOrthogonalDecomposition().solve(-fx);
    }
    if (!dx.allFinite()) break;
    double lambda = 1.0;
    Vector xn;
    Vector fn;
    bool moved = false;
    while (lambda > 1e-6) {
      xn = x + lambda * dx;
      fn = f(xn);
      if (fn.allFinite() && fn.norm() < (1.0 - 1e-4 * lambda) * nf) {
        moved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!moved) break;
    x = xn;
    fx = fn;
    nf = fn.norm();
    if (region.gauge(x) > 3.0) break;  // wandered far outside; abandon this start
  }
  // A couple of full steps to push the residual to roundoff.
  if (nf <= opt.tol.zero * 1e3) {
    for (int it = 0; it < 3; ++it) {
      const Matrix J = f.jac(x);
      const Vector xn = x + J.fullPivLu().solve(-fx);
      const Vector fn = f(xn);
      if (!fn.allFinite() || fn.norm() >= nf) break;
      x = xn;
      fx = fn;
      nf = fn.norm();
    }
  }
  out.x = x;
  out.residual = nf;
  out.converged = nf <= opt.tol.zero;
  return out;
}

std::vector<Vector> start_points(const Region& region, const Options& opt, std::mt19937_64& rng) {
  const int m = region.dim();
  std::vector<Vector> starts;
  int per_axis = opt.grid_base;
  while (std::pow(per_axis + 1, m) <= opt.min_starts) ++per_axis;
  const double total = std::pow(per_axis, m);
  const Vector half = region.bounding_half_widths();
  if (total <= opt.max_grid_points) {
    const long n = static_cast<long>(total);
    for (long idx = 0; idx < n; ++idx) {
      long rem = idx;
      Vector x(m);
      for (int i = 0; i < m; ++i) {
        const long c = rem % per_axis;
        rem /= per_axis;
        const double frac = (c + 0.5) / per_axis;
        x[i] = region.center()[i] + (2.0 * frac - 1.0) * half[i];
      }
      if (region.contains(x)) starts.push_back(x);
    }
  } else {
    for (int i = 0; i < opt.max_grid_points; ++i) starts.push_back(random_interior(region, rng));
  }
  const int extra = opt.random_starts_per_dim * m;
  for (int i = 0; i < extra; ++i) starts.push_back(random_interior(region, rng));
  starts.push_back(region.center());
  return starts;
}

void check_boundary(const FiniteMap& f, const Region& region, const Options& opt,
                    std::mt19937_64& rng) {
  const int count = opt.boundary_samples > 0 ? opt.boundary_samples : 256 * region.dim();
  for (const Vector& b : boundary_sample_points(region, count, rng)) {
    if (f(b).norm() <= opt.tol.boundary) {
      throw BoundaryZeroError("zero of f on the region boundary", b);
    }
  }
}

DegreeResult sign_count_once(const FiniteMap& f, const Region& region, const Options& opt,
                             std::mt19937_64& rng) {
  DegreeResult res;
  res.method = Method::sign_count;
  std::vector<Vector> found;
  for (const Vector& s : start_points(region, opt, rng)) {
    const NewtonOutcome nt = damped_newton(f, s, region, opt);
    if (!nt.converged) continue;
    const double g = region.gauge(nt.x);
    if (std::abs(g - 1.0) <= opt.tol.boundary) {
      throw BoundaryZeroError("zero of f on the region boundary", nt.x);
    }
    if (g > 1.0) continue;
    bool dup = false;
    for (const Vector& z : found) {
      if ((z - nt.x).norm() <= opt.tol.cluster) {
        dup = true;
        break;
      }
    }
    if (!dup) found.push_back(nt.x);
  }
  std::sort(found.begin(), found.end(), lex_less);
  double min_sep = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < found.size(); ++i) {
    for (size_t j = i + 1; j < found.size(); ++j) {
      min_sep = std::min(min_sep, (found[i] - found[j]).norm());
    }
  }
  bool regular = true;
  for (const Vector& z : found) {
    const double det = f.jac(z).determinant();
    Zero zr{z, det > 0 ? 1 : (det < 0 ? -1 : 0), det};
    if (std::abs(det) < opt.tol.singular) regular = false;
    res.degree += zr.sign;
    res.zeros.push_back(std::move(zr));
  }
  res.certified = regular && min_sep > 10.0 * opt.tol.cluster;
  return res;
}

}  // namespace

Region Region::ball(Vector center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  Region r;
  r.kind_ = Kind::ball;
  r.center_ = std::move(center);
  r.radius_ = radius;
  return r;
}

Region Region::box(Vector center, Vector half_widths) {
  if (center.size() != half_widths.size() || (half_widths.array() <= 0.0).any()) {
    throw std::invalid_argument("box half-widths must be positive and match the center");
  }
  Region r;
  r.kind_ = Kind::box;
  r.center_ = std::move(center);
  r.half_ = std::move(half_widths);
  return r;
}

Region Region::star(int dim, RadialFn radial, double outer_bound) {
  if (dim < 1 || !(outer_bound > 0.0)) throw std::invalid_argument("bad star region");
  Region r;
  r.kind_ = Kind::star;
  r.center_ = Vector::Zero(dim);
  r.radius_ = outer_bound;
  r.radial_ = std::move(radial);
  return r;
}

double Region::gauge(const Vector& x) const {
  const Vector d = x - center_;
  switch (kind_) {
    case Kind::ball:
      return d.norm() / radius_;
    case Kind::box:
      return d.cwiseAbs().cwiseQuotient(half_).maxCoeff();
    case Kind::star: {
      const double n = d.norm();
      if (n == 0.0) return 0.0;
      return n / radial_(d / n);
    }
  }
  return 0.0;
}

Vector Region::boundary_point(const Vector& direction) const {
  const double n = direction.norm();
  if (n == 0.0) throw std::invalid_argument("boundary_point: zero direction");
  const Vector d = direction / n;
  switch (kind_) {
    case Kind::ball:
      return center_ + radius_ * d;
    case Kind::box:
      return center_ + d / d.cwiseAbs().cwiseQuotient(half_).maxCoeff();
    case Kind::star:
      return center_ + radial_(d) * d;
  }
  return center_;
}

Vector Region::bounding_half_widths() const {
  if (kind_ == Kind::box) return half_;
  return Vector::Constant(dim(), radius_);
}

bool Region::symmetric() const { return center_.cwiseAbs().maxCoeff() == 0.0; }

Matrix FiniteMap::jac(const Vector& x) const {
  if (jacobian) return jacobian(x);
  const Eigen::Index m = x.size();
  const Vector f0 = eval(x);
  Matrix J(f0.size(), m);
  Vector xp = x;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    const Vector fp = eval(xp);
    xp[i] = x[i] - h;
    const Vector fm = eval(xp);
    xp[i] = x[i];
    J.col(i) = (fp - fm) / (2.0 * h);
  }
  return J;
}

bool check_odd(const FiniteMap& f, const Region& region, int samples, std::uint64_t seed,
               double tol) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Vector x = random_interior(region, rng);
    const Vector a = f(x);
    const Vector b = f(-x);
    if ((a + b).norm() > tol * std::max(1.0, a.norm())) return false;
  }
  return true;
}

DegreeResult brouwer_degree(const FiniteMap& f, const Region& region, const Options& opt) {
  std::mt19937_64 rng(opt.seed);
  if (f.odd && !check_odd(f, region, 32, opt.seed ^ 0x0dd, 1e-9)) {
    throw Error("map declared odd fails the oddness spot-check");
  }
  check_boundary(f, region, opt, rng);
  DegreeResult res = sign_count_once(f, region, opt, rng);
  const int m = region.dim();
  int retries = 0;
  while (!res.certified && retries < opt.max_retries) {
    bool degenerate = false;
    for (const Zero& z : res.zeros) degenerate |= std::abs(z.det) < opt.tol.singular;
    if (!degenerate) break;  // only separation is in doubt; nothing to regularize
    ++retries;
    std::uniform_real_distribution<double> u(0.5, 1.0);
    const Vector z = opt.perturb_eps * u(rng) * random_direction(m, rng);
    FiniteMap g;
    g.eval = [&f, z](const Vector& x) { return Vector(f(x) - z); };
    g.jacobian = [&f](const Vector& x) { return f.jac(x); };
    res = sign_count_once(g, region, opt, rng);
    res.perturbation = z;
  }
  res.retries = retries;
  for (const Zero& z : res.zeros) {
    if (std::abs(z.det) < opt.tol.singular) {
      res.certified = false;
      throw DegeneracyError("degenerate zero persists after perturbation retries", res);
    }
  }
  return res;
}

DegreeResult winding_degree_2d(const FiniteMap& f, const Region& region, const Options& opt) {
  if (region.dim() != 2) throw std::invalid_argument("winding degree needs a 2-D region");
  auto point = [&](double a) {
    Vector d(2);
    d << std::cos(a), std::sin(a);
    return region.boundary_point(d);
  };
  auto value = [&](double a) {
    const Vector b = point(a);
    const Vector v = f(b);
    if (v.norm() <= opt.tol.boundary) throw BoundaryZeroError("zero of f on the boundary", b);
    return v;
  };
  auto turn = [](const Vector& a, const Vector& b) {
    return std::atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1]);
  };
  double total = 0.0;
  const int base = 256;
  const double two_pi = 2.0 * std::numbers::pi;
  struct Seg {
    double a0, a1;
    Vector v0, v1;
    int depth;
  };
  for (int i = 0; i < base; ++i) {
    const double a0 = two_pi * i / base;
    const double a1 = two_pi * (i + 1) / base;
    std::vector<Seg> stack{{a0, a1, value(a0), value(a1), 0}};
    while (!stack.empty()) {
      Seg s = std::move(stack.back());
      stack.pop_back();
      const double d = turn(s.v0, s.v1);
      if (std::abs(d) <= std::numbers::pi / 8 || s.depth >= 40) {
        total += d;
        continue;
      }
      const double am = 0.5 * (s.a0 + s.a1);
      const Vector vm = value(am);
      stack.push_back({am, s.a1, vm, s.v1, s.depth + 1});
      stack.push_back({s.a0, am, s.v0, vm, s.depth + 1});
    }
  }
  const double turns = total / two_pi;
  DegreeResult res;
  res.method = Method::winding_2d;
  res.degree = static_cast<int>(std::lround(turns));
  res.certified = std::abs(turns - res.degree) < 1e-6;
  return res;
}

std::vector<int> homotopy_degree_constancy(const MapFamily& h, const Region& region,
                                           int t_samples, const Options& opt) {
  if (t_samples < 1) throw std::invalid_argument("t_samples must be >= 1");
  std::vector<int> out;
  for (int i = 0; i < t_samples; ++i) {
    const double t = t_samples == 1 ? 0.0 : static_cast<double>(i) / (t_samples - 1);
    try {
      out.push_back(brouwer_degree(h(t), region, opt).degree);
    } catch (const BoundaryZeroError&) {
      std::ostringstream os;
      os << "homotopy has a boundary zero at t = " << t;
      throw HomotopyBoundaryZero(os.str(), t);
    }
  }
  return out;
}

std::optional<Vector> existence_from_degree(const FiniteMap& f, const Region& region,
                                            const Options& opt) {
  const DegreeResult res = brouwer_degree(f, region, opt);
  if (res.degree == 0) return std::nullopt;
  for (const Zero& z : res.zeros) {
    // Zeros of a perturbed map are polished back onto f itself.
    const NewtonOutcome nt = damped_newton(f, z.point, region, opt);
    if (nt.converged && region.gauge(nt.x) < 1.0) return nt.x;
  }
  throw InternalError("nonzero degree but no zero located; check tolerances");
}

Vector borsuk_ulam_zero(const FiniteMap& f, const Region& region,
                        const std::vector<int>& range_coords, const BorsukOptions& opt) {
  const int m = region.dim();
  if (!region.symmetric()) throw std::invalid_argument("Borsuk-Ulam search needs a symmetric region");
  if (static_cast<int>(range_coords.size()) >= m || range_coords.empty()) {
    throw std::invalid_argument("range subspace must be a proper nonzero coordinate subspace");
  }
  if (!check_odd(f, region, opt.check_samples, opt.seed ^ 0x0dd, 1e-9)) {
    throw Error("Borsuk-Ulam search: map is not odd on samples");
  }
  {
    std::vector<bool> in_range(m, false);
    for (int c : range_coords) in_range.at(c) = true;
    std::mt19937_64 rng(opt.seed ^ 0x4a9);
    for (int s = 0; s < opt.check_samples; ++s) {
      const Vector y = f(random_interior(region, rng));
      for (int i = 0; i < m; ++i) {
        if (!in_range[i] && std::abs(y[i]) > 1e-12 * std::max(1.0, y.norm())) {
          throw Error("Borsuk-Ulam search: range leaves the declared subspace");
        }
      }
    }
  }
  const int q = static_cast<int>(range_coords.size());
  auto residual = [&](const Vector& d) {
    const Vector y = f(region.boundary_point(d));
    Vector r(q);
    for (int i = 0; i < q; ++i) r[i] = y[range_coords[i]];
    return r;
  };
  // Orthonormal basis of the tangent space of the unit sphere at d.
  auto tangent_basis = [m](const Vector& d) {
    Matrix A = Matrix::Identity(m, m);
    A.col(0) = d;
    Eigen::HouseholderQR<Matrix> qr(A);
    Matrix Q = qr.householderQ();
    return Matrix(Q.rightCols(m - 1));
  };

  std::vector<Vector> starts = opt.initial_directions;
  std::mt19937_64 rng(opt.seed);
  if (opt.axis_starts) {
    for (int i = 0; i < m; ++i) starts.push_back(Vector::Unit(m, i));
  }
  for (int i = 0; i < opt.starts; ++i) starts.push_back(random_direction(m, rng));

  // Ambient Jacobian of the residual (radial direction ignored), by central
  // differences along the tangent space, then Broyden updates between refreshes.
  auto fd_jacobian = [&](const Vector& d) {
    const Matrix T = tangent_basis(d);
    Matrix Jt(q, m - 1);
    for (int j = 0; j < m - 1; ++j) {
      const Vector dp = (d + opt.fd_step * T.col(j)).normalized();
      const Vector dm = (d - opt.fd_step * T.col(j)).normalized();
      Jt.col(j) = (residual(dp) - residual(dm)) / (2.0 * opt.fd_step);
    }
    return Matrix(Jt * T.transpose());
  };

  Vector best;
  double best_res = std::numeric_limits<double>::infinity();
  for (Vector d : starts) {
    d.normalize();
    Vector r = residual(d);
    double nr = r.norm();
    Matrix J = fd_jacobian(d);
    bool fresh = true;
    for (int it = 0; it < opt.max_iter && nr > opt.tol.zero; ++it) {
      const Matrix T = tangent_basis(d);
      const Vector step = (J * T).completeOrthogonalDecomposition().solve(-r);
      bool moved = false;
      if (step.allFinite()) {
        for (double lambda = 1.0; lambda > 1e-6; lambda *= 0.5) {
          const Vector dn = (d + lambda * (T * step)).normalized();
          const Vector rn = residual(dn);
          if (rn.norm() < (1.0 - 1e-4 * lambda) * nr) {
            const Vector sd = dn - d;
            J += ((rn - r) - J * sd) * sd.transpose() / sd.squaredNorm();
            d = dn;
            r = rn;
            nr = rn.norm();
            moved = true;
            fresh = false;
            break;
          }
        }
      }
      if (!moved) {
        if (fresh) break;
        J = fd_jacobian(d);
        fresh = true;
      }
    }
    if (nr < best_res) {
      best_res = nr;
      best = region.boundary_point(d);
    }
    if (nr <= opt.tol.zero) return best;
  }
  std::ostringstream os;
  os << "Borsuk-Ulam zero search failed; best residual " << best_res;
  throw BorsukUlamSearchError(os.str(), best, best_res);
}

}  // namespace fountain::degree
