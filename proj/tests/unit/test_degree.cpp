#include <gtest/gtest.h>

#include <cmath>

#include "fountain/degree.hpp"
#include "generators.hpp"

using namespace fountain;
using namespace fountain::degree;
using fountain::testing::Gen;

namespace {

FiniteMap translate(const Vector& y) {
  FiniteMap f;
  f.eval = [y](const Vector& x) { return Vector(x - y); };
  f.jacobian = [](const Vector& x) { return Matrix(Matrix::Identity(x.size(), x.size())); };
  return f;
}

FiniteMap minus_identity() {
  FiniteMap f;
  f.eval = [](const Vector& x) { return Vector(-x); };
  f.odd = true;
  return f;
}

FiniteMap complex_square() {
  FiniteMap f;
  f.eval = [](const Vector& x) {
    Vector y(2);
    y << x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1];
    return y;
  };
  return f;
}

// Random planar polynomial map with coefficients of degree <= 3.
struct Poly2 {
  Matrix a = Matrix::Zero(2, 10);
  Vector operator()(const Vector& x) const {
    const double u = x[0], v = x[1];
    Vector m(10);
    m << 1, u, v, u * u, u * v, v * v, u * u * u, u * u * v, u * v * v, v * v * v;
    return a * m;
  }
};

Poly2 random_poly(Gen& g) {
  Poly2 p;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 10; ++j) p.a(i, j) = g.uniform(-1.0, 1.0);
  }
  return p;
}

// Odd cubic map x -> A x + (B x)^3 componentwise.
FiniteMap random_odd_map(Gen& g, int m) {
  Matrix A(m, m), B(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      A(i, j) = g.uniform(-1.0, 1.0);
      B(i, j) = g.uniform(-1.0, 1.0);
    }
  }
  FiniteMap f;
  f.odd = true;
  f.eval = [A, B](const Vector& x) { return Vector(A * x + (B * x).array().cube().matrix()); };
  f.jacobian = [A, B](const Vector& x) {
    const Vector s = (B * x).array().square().matrix();
    return Matrix(A + 3.0 * s.asDiagonal() * B);
  };
  return f;
}

bool far_from_boundary_zero(const FiniteMap& f, const Region& U, double margin) {
  for (int i = 0; i < 720; ++i) {
    const double t = 2.0 * M_PI * i / 720.0;
    Vector d(2);
    d << std::cos(t), std::sin(t);
    if (f(U.boundary_point(d)).norm() < margin) return false;
  }
  return true;
}

}  // namespace

TEST(BrouwerDegree, TranslationInsideDisk) {
  Vector y(2);
  y << 0.3, 0.2;
  const DegreeResult r = brouwer_degree(translate(y), Region::ball(Vector::Zero(2), 1.0));
  EXPECT_EQ(r.degree, 1);
  EXPECT_TRUE(r.certified);
  ASSERT_EQ(r.zeros.size(), 1u);
  EXPECT_LE((r.zeros[0].point - y).norm(), 1e-10);
}

TEST(BrouwerDegree, MinusIdentityBall3) {
  const DegreeResult r = brouwer_degree(minus_identity(), Region::ball(Vector::Zero(3), 1.0));
  EXPECT_EQ(r.degree, -1);
}

TEST(BrouwerDegree, ComplexSquaringDisk) {
  const Region U = Region::ball(Vector::Zero(2), 1.0);
  // The origin is a degenerate zero; the engine must regularize by translation.
  const DegreeResult r = brouwer_degree(complex_square(), U);
  EXPECT_EQ(r.degree, 2);
  EXPECT_GT(r.retries, 0);
  EXPECT_EQ(winding_degree_2d(complex_square(), U).degree, 2);
}

TEST(BrouwerDegree, BoundaryZeroIsAnError) {
  Vector y(2);
  y << 1.0, 0.0;
  EXPECT_THROW(brouwer_degree(translate(y), Region::ball(Vector::Zero(2), 1.0)), BoundaryZeroError);
}

TEST(BrouwerDegree, BoxRegion) {
  Vector y(3);
  y << 0.5, -1.5, 0.2;
  const Region box = Region::box(Vector::Zero(3), Vector::Constant(3, 2.0));
  EXPECT_EQ(brouwer_degree(translate(y), box).degree, 1);
}

TEST(DegreeProperty, NormalizationForInteriorPoints) {
  Gen g(11);
  for (int i = 0; i < 100; ++i) {
    const int m = g.integer(1, 3);
    const Vector y = g.in_ball(m, 0.95);
    EXPECT_EQ(brouwer_degree(translate(y), Region::ball(Vector::Zero(m), 1.0)).degree, 1);
  }
}

TEST(DegreeProperty, ZeroForExteriorPoints) {
  Gen g(12);
  for (int i = 0; i < 20; ++i) {
    const int m = g.integer(1, 3);
    const Vector y = g.unit(m) * g.uniform(1.1, 3.0);
    EXPECT_EQ(brouwer_degree(translate(y), Region::ball(Vector::Zero(m), 1.0)).degree, 0);
  }
}

TEST(DegreeProperty, MinusIdentityFollowsDimensionParity) {
  for (int m = 1; m <= 4; ++m) {
    const int expected = (m % 2 == 0) ? 1 : -1;
    EXPECT_EQ(brouwer_degree(minus_identity(), Region::ball(Vector::Zero(m), 1.0)).degree, expected)
        << "m=" << m;
  }
}

TEST(DegreeProperty, SignCountMatchesWindingOnRandomPolynomials) {
  Gen g(13);
  const Region U = Region::ball(Vector::Zero(2), 1.0);
  int compared = 0;
  while (compared < 50) {
    const Poly2 p = random_poly(g);
    FiniteMap f;
    f.eval = [p](const Vector& x) { return p(x); };
    if (!far_from_boundary_zero(f, U, 1e-2)) continue;
    const DegreeResult a = brouwer_degree(f, U);
    const DegreeResult b = winding_degree_2d(f, U);
    EXPECT_EQ(a.degree, b.degree) << "sample " << compared;
    ++compared;
  }
}

TEST(DegreeProperty, OddMapsHaveOddDegree) {
  Gen g(14);
  int checked = 0;
  while (checked < 20) {
    const int m = g.integer(1, 3);
    const FiniteMap f = random_odd_map(g, m);
    const Region U = Region::ball(Vector::Zero(m), 1.0);
    try {
      const DegreeResult r = brouwer_degree(f, U);
      EXPECT_NE(r.degree % 2, 0) << "m=" << m;
      ++checked;
    } catch (const BoundaryZeroError&) {
      // regenerate: the map vanishes on the boundary
    } catch (const DegeneracyError&) {
    }
  }
}

TEST(DegreeProperty, TranslationHomotopyIsConstant) {
  Gen g(15);
  int checked = 0;
  while (checked < 20) {
    const int m = g.integer(1, 3);
    const FiniteMap f = random_odd_map(g, m);
    const Region U = Region::ball(Vector::Zero(m), 1.0);
    // Admissible only if |z| stays below min |f| on the sphere.
    double fmin = 1e300;
    for (int i = 0; i < 4000; ++i) fmin = std::min(fmin, f(U.boundary_point(g.unit(m))).norm());
    if (fmin < 0.05) continue;
    const Vector z = g.unit(m) * g.uniform(0.0, 0.5 * fmin);
    const MapFamily h = [f, z](double t) {
      FiniteMap ft;
      ft.eval = [f, z, t](const Vector& x) { return Vector(f(x) - t * z); };
      return ft;
    };
    try {
      const std::vector<int> degs = homotopy_degree_constancy(h, U, 5);
      for (int d : degs) EXPECT_EQ(d, degs.front());
      ++checked;
    } catch (const HomotopyBoundaryZero&) {
    } catch (const DegeneracyError&) {
    }
  }
}

TEST(HomotopyConstancy, TranslationFamily) {
  Vector y(2);
  y << 0.2, -0.4;
  const MapFamily h = [y](double t) { return translate(Vector(t * y)); };
  EXPECT_EQ(homotopy_degree_constancy(h, Region::ball(Vector::Zero(2), 1.0), 5),
            (std::vector<int>{1, 1, 1, 1, 1}));
}

TEST(HomotopyConstancy, ConstantMinusIdentityInPlane) {
  const MapFamily h = [](double) { return minus_identity(); };
  EXPECT_EQ(homotopy_degree_constancy(h, Region::ball(Vector::Zero(2), 1.0), 3),
            (std::vector<int>{1, 1, 1}));
}

TEST(HomotopyConstancy, IdentityTwoSamples) {
  const MapFamily h = [](double) { return translate(Vector::Zero(3)); };
  EXPECT_EQ(homotopy_degree_constancy(h, Region::ball(Vector::Zero(3), 2.0), 2),
            (std::vector<int>{1, 1}));
}

TEST(HomotopyConstancy, ReportsOffendingParameter) {
  Vector y(2);
  y << 2.0, 0.0;
  const MapFamily h = [y](double t) { return translate(Vector(t * y)); };
  try {
    homotopy_degree_constancy(h, Region::ball(Vector::Zero(2), 1.0), 5);
    FAIL() << "expected a boundary zero";
  } catch (const HomotopyBoundaryZero& e) {
    EXPECT_DOUBLE_EQ(e.t(), 0.5);
  }
}

TEST(ExistenceFromDegree, Examples) {
  Vector y(2);
  y << 0.3, 0.2;
  const Region U = Region::ball(Vector::Zero(2), 1.0);
  const auto z = existence_from_degree(translate(y), U);
  ASSERT_TRUE(z.has_value());
  EXPECT_LE((*z - y).norm(), 1e-10);
  const auto o = existence_from_degree(minus_identity(), U);
  ASSERT_TRUE(o.has_value());
  EXPECT_LE(o->norm(), 1e-10);
  Vector far(2);
  far << 3.0, 0.0;
  EXPECT_FALSE(existence_from_degree(translate(far), U).has_value());
}

TEST(BorsukUlam, ProjectionOntoFirstAxis) {
  FiniteMap f;
  f.odd = true;
  f.eval = [](const Vector& x) {
    Vector y = Vector::Zero(2);
    y[0] = x[0];
    return y;
  };
  const Vector u = borsuk_ulam_zero(f, Region::ball(Vector::Zero(2), 1.0), {0});
  EXPECT_NEAR(std::abs(u[1]), 1.0, 1e-7);
  EXPECT_LE(std::abs(u[0]), 1e-9);
}

TEST(BorsukUlam, LinearKernelInR3) {
  FiniteMap f;
  f.odd = true;
  f.eval = [](const Vector& x) {
    Vector y(3);
    y << x[0] + x[2], x[1] - x[2], 0.0;
    return y;
  };
  const Vector u = borsuk_ulam_zero(f, Region::ball(Vector::Zero(3), 1.0), {0, 1});
  Vector k(3);
  k << -1.0, 1.0, 1.0;
  k /= std::sqrt(3.0);
  EXPECT_NEAR(u.norm(), 1.0, 1e-7);
  EXPECT_LE(std::min((u - k).norm(), (u + k).norm()), 1e-7);
}

TEST(BorsukUlam, CubicVanishingOnAxis) {
  FiniteMap f;
  f.odd = true;
  f.eval = [](const Vector& x) {
    Vector y = Vector::Zero(2);
    y[0] = x[1] * x[1] * x[1];
    return y;
  };
  const Vector u = borsuk_ulam_zero(f, Region::ball(Vector::Zero(2), 1.0), {0});
  EXPECT_NEAR(std::abs(u[0]), 1.0, 1e-6);
  EXPECT_LE(std::abs(u[1] * u[1] * u[1]), 1e-9);
}

TEST(BorsukUlam, RejectsNonOddMaps) {
  FiniteMap f;
  f.eval = [](const Vector& x) {
    Vector y = Vector::Zero(2);
    y[0] = x[0] * x[0] + 0.1;
    return y;
  };
  EXPECT_THROW(borsuk_ulam_zero(f, Region::ball(Vector::Zero(2), 1.0), {0}), Error);
}

TEST(BorsukUlam, RejectsFullRange) {
  EXPECT_THROW(borsuk_ulam_zero(minus_identity(), Region::ball(Vector::Zero(2), 1.0), {0, 1}),
               std::invalid_argument);
}

TEST(CheckOdd, DetectsSymmetry) {
  const Region U = Region::ball(Vector::Zero(3), 1.0);
  EXPECT_TRUE(check_odd(minus_identity(), U, 50, 1));
  EXPECT_FALSE(check_odd(translate(Vector::Constant(3, 0.1)), U, 50, 1));
}

TEST(Region, StarRegionGauge) {
  // Star region bounded by the ellipse x^2/4 + y^2 = 1.
  const Region U = Region::star(
      2, [](const Vector& d) { return 1.0 / std::sqrt(d[0] * d[0] / 4.0 + d[1] * d[1]); }, 2.0);
  Vector p(2);
  p << 1.9, 0.0;
  EXPECT_TRUE(U.contains(p));
  p << 0.0, 1.1;
  EXPECT_FALSE(U.contains(p));
  Vector d(2);
  d << 1.0, 0.0;
  EXPECT_NEAR(U.boundary_point(d)[0], 2.0, 1e-12);
  Vector y(2);
  y << 1.5, 0.1;
  EXPECT_EQ(brouwer_degree(translate(y), U).degree, 1);
}
