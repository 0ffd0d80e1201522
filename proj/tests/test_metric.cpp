#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "besicover/errors.hpp"
#include "besicover/metric.hpp"

using namespace besicover;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Space> curved_and_flat() {
  return {Space::euclidean(2), Space::euclidean(3, 1.0), Space::euclidean(3, 3.5), Space::sphere(2),
          Space::sphere(3, 2.0), Space::hyperbolic(2), Space::hyperbolic(3)};
}

Point random_point(const Space& space, std::mt19937_64& rng, double spread) {
  return random_point_in_ball(space, Ball{origin(space), spread}, rng);
}

// Composite Simpson rule.
template <class F>
double simpson(F f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST(Distance, Examples) {
  EXPECT_DOUBLE_EQ(distance(Space::euclidean(2), Point{{0, 0}}, Point{{3, 4}}), 5.0);
  const Space s2 = Space::sphere(2);
  EXPECT_NEAR(distance(s2, Point{{0, 0, 1}}, Point{{0, 0, -1}}), kPi, 1e-15);
  const Space h2 = Space::hyperbolic(2);
  const Point o = origin(h2);
  const Point q = exp_map(h2, Tangent{o, {0.7 * 0.6, 0.7 * 0.8, 0.0}});
  EXPECT_NEAR(distance(h2, o, q), 0.7, 1e-12);
}

TEST(Distance, MatchesClosedFormsOnModelSpaces) {
  std::mt19937_64 rng(7);
  const Space s = Space::sphere(2, 1.5);
  const Space h = Space::hyperbolic(2);
  for (int i = 0; i < 200; ++i) {
    const Point a = random_point(s, rng, 3.0), b = random_point(s, rng, 3.0);
    double ip = 0.0;
    for (int k = 0; k < 3; ++k) ip += a.coords[k] * b.coords[k];
    EXPECT_NEAR(distance(s, a, b), 1.5 * std::acos(std::clamp(ip / 2.25, -1.0, 1.0)), 1e-7);
    const Point c = random_point(h, rng, 2.0), d = random_point(h, rng, 2.0);
    const double m = c.coords[0] * d.coords[0] + c.coords[1] * d.coords[1] - c.coords[2] * d.coords[2];
    EXPECT_NEAR(distance(h, c, d), std::acosh(std::max(1.0, -m)), 1e-6);
  }
}

TEST(Distance, DimensionMismatchIsInputError) {
  EXPECT_THROW(distance(Space::euclidean(2), Point{{0, 0}}, Point{{1, 2, 3}}), InputError);
}

TEST(Distance, TriangleInequalityOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (const Space& space : curved_and_flat()) {
    const double spread = space.kind() == SpaceKind::sphere ? 0.99 * injectivity_radius(space) : 3.0;
    for (int i = 0; i < 10000; ++i) {
      const Point a = random_point(space, rng, spread);
      const Point b = random_point(space, rng, spread);
      const Point c = random_point(space, rng, spread);
      ASSERT_LE(distance(space, a, c), distance(space, a, b) + distance(space, b, c) + 1e-9);
      ASSERT_DOUBLE_EQ(distance(space, a, b), distance(space, b, a));
    }
  }
}

TEST(ExpMap, Examples) {
  const Space s2 = Space::sphere(2);
  const Point north = origin(s2);
  EXPECT_EQ(exp_map(s2, Tangent{north, {0, 0, 0}}), north);
  const Point eq = exp_map(s2, Tangent{north, {kPi / 2, 0, 0}});
  EXPECT_NEAR(eq.coords[0] * north.coords[0] + eq.coords[1] * north.coords[1] + eq.coords[2] * north.coords[2],
              0.0, 1e-12);
  const Point moved = exp_map(Space::euclidean(2), Tangent{Point{{1, 1}}, {2, 0}});
  EXPECT_EQ(moved, (Point{{3, 1}}));
  EXPECT_THROW(exp_map(s2, Tangent{north, {kPi, 0, 0}}), DomainError);
}

TEST(LogMap, Examples) {
  const Space e2 = Space::euclidean(2);
  EXPECT_EQ(log_map(e2, Point{{0, 0}}, Point{{1, 2}}).vector, (Vec{1, 2}));
  for (const Space& space : curved_and_flat()) {
    const Point o = origin(space);
    for (double c : log_map(space, o, o).vector) EXPECT_EQ(c, 0.0);
  }
  const Space s2 = Space::sphere(2);
  EXPECT_THROW(log_map(s2, Point{{0, 0, 1}}, Point{{0, 0, -1}}), DomainError);
}

TEST(LogMap, RoundTripOnRandomTangents) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const Space& space : curved_and_flat()) {
    const double cap = space.kind() == SpaceKind::sphere ? 0.9 * injectivity_radius(space) : 4.0;
    for (int i = 0; i < 10000; ++i) {
      const Point base = random_point(space, rng, 2.0);
      Vec v = random_unit_tangent(space, base, rng);
      const double len = cap * unif(rng);
      for (double& c : v) c *= len;
      const Point q = exp_map(space, Tangent{base, v});
      ASSERT_NEAR(distance(space, base, q), len, 1e-9 * (1.0 + len));
      const Tangent back = log_map(space, base, q);
      double err = 0.0;
      for (size_t k = 0; k < v.size(); ++k) err = std::max(err, std::fabs(back.vector[k] - v[k]));
      ASSERT_LE(err, 1e-8 * (1.0 + len));
    }
  }
}

TEST(Geodesic, Interpolation) {
  const Space e2 = Space::euclidean(2);
  const Point x{{0, 0}}, y{{2, 0}};
  EXPECT_EQ(geodesic_interpolate(e2, x, y, 0.0), x);
  EXPECT_EQ(geodesic_interpolate(e2, x, y, 1.0), y);
  EXPECT_EQ(geodesic_interpolate(e2, x, y, 0.25), (Point{{0.5, 0}}));

  std::mt19937_64 rng(5);
  for (const Space& space : {Space::sphere(2), Space::hyperbolic(2)}) {
    for (int i = 0; i < 500; ++i) {
      const Point a = random_point(space, rng, 1.4), b = random_point(space, rng, 1.4);
      const double d = distance(space, a, b);
      const Point mid = geodesic_interpolate(space, a, b, 0.5);
      EXPECT_NEAR(distance(space, a, mid), distance(space, mid, b), 1e-9);
      const Point p = geodesic_interpolate(space, a, b, 0.3);
      EXPECT_NEAR(distance(space, a, p), 0.3 * d, 1e-9);
      EXPECT_NEAR(distance(space, a, p) + distance(space, p, b), d, 1e-9);
    }
  }
  EXPECT_THROW(geodesic_interpolate(Space::sphere(2), Point{{0, 0, 1}}, Point{{0, 0, -1}}, 0.5), DomainError);
}

TEST(Shrink, Examples) {
  const Space e1 = Space::euclidean(1);
  const Ball b = shrink_ball_toward(e1, Ball{Point{{0}}, 2}, Point{{1.5}}, 1.0);
  EXPECT_DOUBLE_EQ(b.center.coords[0], 0.5);
  EXPECT_DOUBLE_EQ(b.radius, 1.0);

  const Space e2 = Space::euclidean(2);
  const Ball c = shrink_ball_toward(e2, Ball{Point{{0, 0}}, 1}, Point{{0, 0}}, 0.5);
  EXPECT_EQ(c, (Ball{Point{{0, 0}}, 0.5}));

  const Space s2 = Space::sphere(2);
  const Point x = origin(s2);
  const Point y = exp_map(s2, Tangent{x, {0.6, 0, 0}});
  const Ball d = shrink_ball_toward(s2, Ball{x, 0.8}, y, 0.3);
  EXPECT_NEAR(distance(s2, x, d.center), 0.3, 1e-12);
  EXPECT_NEAR(distance(s2, y, d.center), 0.3, 1e-12);

  EXPECT_THROW(shrink_ball_toward(e1, Ball{Point{{0}}, 2}, Point{{1.5}}, 2.0), InputError);
}

TEST(Shrink, ContainmentOnSampledBoundaries) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (const Space& space : {Space::euclidean(2), Space::euclidean(3), Space::sphere(2), Space::hyperbolic(2)}) {
    for (int trial = 0; trial < 300; ++trial) {
      const double R = space.kind() == SpaceKind::sphere ? 0.9 * unif(rng) * kPi : 2.0 * unif(rng) + 0.1;
      const Ball outer{random_point(space, rng, 1.0), R};
      const Point y = random_point_in_ball(space, outer, rng);
      const double s = unif(rng) * R;
      const Ball inner = shrink_ball_toward(space, outer, y, s);
      ASSERT_DOUBLE_EQ(inner.radius, s);
      ASSERT_LE(distance(space, inner.center, y), s + 1e-9);
      const double dxy = distance(space, outer.center, y);
      if (dxy >= s) {
        ASSERT_NEAR(distance(space, y, inner.center), s, 1e-9);
        ASSERT_NEAR(distance(space, outer.center, inner.center), dxy - s, 1e-9);
      }
      for (int k = 0; k < 64; ++k) {
        const Vec dir = random_unit_tangent(space, inner.center, rng);
        const Point w = boundary_point(space, inner, dir);
        ASSERT_LE(distance(space, w, outer.center), R + 1e-9);
      }
    }
  }
}

TEST(Volume, Examples) {
  const Space s2 = Space::sphere(2);
  EXPECT_NEAR(ball_volume(s2, kPi), 4 * kPi, 1e-12);
  EXPECT_NEAR(ball_volume(s2, kPi / 2), 2 * kPi, 1e-12);
  EXPECT_THROW(ball_volume(s2, 3.5), InputError);
  EXPECT_NEAR(ball_volume(Space::euclidean(3), 2.0), 4.0 / 3.0 * kPi * 8.0, 1e-12);
  EXPECT_NEAR(ball_volume(Space::euclidean(2, 1.0), 1.5), 2.0 * 2.25, 1e-12);
  EXPECT_NEAR(ball_volume(Space::euclidean(2, 1e300), 1.0), 4.0, 1e-9);
}

TEST(Volume, HyperbolicAgreesWithIntegratedAreaElement) {
  const Space h2 = Space::hyperbolic(2);
  EXPECT_NEAR(ball_volume(h2, 1.0), 2 * kPi * (std::cosh(1.0) - 1.0), 1e-12);
  for (double r : {0.3, 1.0, 2.5}) {
    const double area = simpson([](double t) { return 2 * kPi * std::sinh(t); }, 0.0, r, 2000);
    EXPECT_NEAR(ball_volume(h2, r), area, 1e-9 * area);
    const double vol3 = simpson([](double t) { return 4 * kPi * std::sinh(t) * std::sinh(t); }, 0.0, r, 2000);
    EXPECT_NEAR(ball_volume(Space::hyperbolic(3), r), vol3, 1e-9 * vol3);
  }
  for (double r : {0.2, 1.1, 2.9}) {
    const double vol3 = simpson([](double t) { return 4 * kPi * std::sin(t) * std::sin(t); }, 0.0, r, 2000);
    EXPECT_NEAR(ball_volume(Space::sphere(3), r), vol3, 1e-9 * vol3);
  }
}

TEST(Volume, SphereCapFormula) {
  const Space s2 = Space::sphere(2);
  for (int i = 0; i <= 1000; ++i) {
    const double r = kPi * i / 1000.0;
    ASSERT_NEAR(ball_volume(s2, r), 2 * kPi * (1 - std::cos(r)), 1e-9);
  }
}

TEST(Volume, StrictlyIncreasing) {
  for (const Space& space : curved_and_flat()) {
    const double top = space.kind() == SpaceKind::sphere ? injectivity_radius(space) : 5.0;
    double prev = ball_volume(space, 0.0);
    for (int i = 1; i < 500; ++i) {
      const double v = ball_volume(space, top * i / 500.0);
      ASSERT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(Injectivity, Radius) {
  EXPECT_EQ(injectivity_radius(Space::euclidean(3)), kInfinity);
  EXPECT_EQ(injectivity_radius(Space::hyperbolic(2)), kInfinity);
  EXPECT_DOUBLE_EQ(injectivity_radius(Space::sphere(2)), kPi);
  EXPECT_DOUBLE_EQ(injectivity_radius(Space::sphere(2, 2.0)), 2 * kPi);
}

TEST(Points, Validation) {
  EXPECT_NO_THROW(validate_point(Space::sphere(2), Point{{0, 0, 1}}));
  EXPECT_THROW(validate_point(Space::sphere(2), Point{{0, 0, 1.1}}), InputError);
  EXPECT_THROW(validate_point(Space::hyperbolic(2), Point{{0, 0, -1}}), InputError);
  EXPECT_THROW(validate_point(Space::euclidean(2), Point{{0, NAN}}), InputError);
  EXPECT_THROW(validate_ball(Space::sphere(2), Ball{Point{{0, 0, 1}}, 4.0}), InputError);
  EXPECT_THROW(validate_ball(Space::euclidean(1), Ball{Point{{0}}, -1.0}), InputError);
  EXPECT_THROW(Space::euclidean(0), InputError);
  EXPECT_THROW(Space::euclidean(2, 0.5), InputError);
  EXPECT_THROW(Space::sphere(2, 0.0), InputError);
}
