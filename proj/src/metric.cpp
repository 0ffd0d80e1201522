#include "besicover/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "besicover/errors.hpp"
#include "besicover/tolerance.hpp"

namespace besicover {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// <a,b>_M = sum_{i<n} a_i b_i - a_n b_n
double minkowski(std::span<const double> a, std::span<const double> b) {
  const size_t n = a.size() - 1;
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s - a[n] * b[n];
}

double lp_norm(std::span<const double> a, double p) {
  if (p == 2.0) return norm2(a);
  if (p == 1.0) {
    double s = 0.0;
    for (double x : a) s += std::fabs(x);
    return s;
  }
  double m = 0.0;
  for (double x : a) m = std::max(m, std::fabs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : a) s += std::pow(std::fabs(x) / m, p);
  return m * std::pow(s, 1.0 / p);
}

void check_same_space(const Space& space, const Point& p) {
  if (static_cast<int>(p.coords.size()) != space.ambient_dim()) {
    throw InputError("point has " + std::to_string(p.coords.size()) + " coordinates, space expects " +
                     std::to_string(space.ambient_dim()));
  }
}

// Pulls a hyperboloid point back onto the upper sheet.
void renormalize_hyperbolic(Vec& x) {
  const size_t n = x.size() - 1;
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * x[i];
  x[n] = std::sqrt(1.0 + s);
}

void renormalize_sphere(Vec& x, double radius) {
  const double n = norm2(x);
  for (double& c : x) c *= radius / n;
}

// \int_0^theta sin^k, \int_0^rho sinh^k via the standard reduction formulas.
double sin_power_integral(int k, double theta) {
  if (k == 0) return theta;
  if (k == 1) return 1.0 - std::cos(theta);
  return -std::pow(std::sin(theta), k - 1) * std::cos(theta) / k +
         (k - 1.0) / k * sin_power_integral(k - 2, theta);
}

double sinh_power_integral(int k, double rho) {
  if (k == 0) return rho;
  if (k == 1) return std::cosh(rho) - 1.0;
  return std::pow(std::sinh(rho), k - 1) * std::cosh(rho) / k -
         (k - 1.0) / k * sinh_power_integral(k - 2, rho);
}

// Surface area of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n) {
  return 2.0 * std::exp(0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n));
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::euclidean: return "euclidean";
    case SpaceKind::sphere: return "sphere";
    case SpaceKind::hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "euclidean") return SpaceKind::euclidean;
  if (name == "sphere") return SpaceKind::sphere;
  if (name == "hyperbolic") return SpaceKind::hyperbolic;
  throw InputError("unknown space kind '" + name + "'");
}

Space Space::euclidean(int dim, double pnorm) {
  if (dim < 1) throw InputError("space dimension must be >= 1");
  if (!(pnorm >= 1.0) || !std::isfinite(pnorm)) throw InputError("pnorm must be a finite real >= 1");
  return Space(SpaceKind::euclidean, dim, pnorm, 1.0);
}

Space Space::sphere(int dim, double radius) {
  if (dim < 1) throw InputError("space dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("sphere radius must be positive");
  return Space(SpaceKind::sphere, dim, 2.0, radius);
}

Space Space::hyperbolic(int dim) {
  if (dim < 1) throw InputError("space dimension must be >= 1");
  return Space(SpaceKind::hyperbolic, dim, 2.0, 1.0);
}

void validate_point(const Space& space, const Point& p) {
  check_same_space(space, p);
  for (double c : p.coords) {
    if (!std::isfinite(c)) throw InputError("point has a non-finite coordinate");
  }
  switch (space.kind()) {
    case SpaceKind::euclidean: return;
    case SpaceKind::sphere: {
      const double r2 = space.radius() * space.radius();
      if (std::fabs(dot(p.coords, p.coords) - r2) > 1e-9 * r2) {
        throw InputError("point is not on the sphere of radius " + std::to_string(space.radius()));
      }
      return;
    }
    case SpaceKind::hyperbolic: {
      const double last = p.coords.back();
      if (!(last > 0.0)) throw InputError("hyperboloid point must have positive last coordinate");
      if (std::fabs(minkowski(p.coords, p.coords) + 1.0) > 1e-9 * std::max(1.0, last * last)) {
        throw InputError("point is not on the hyperboloid <x,x>_M = -1");
      }
      return;
    }
  }
}

void validate_ball(const Space& space, const Ball& ball) {
  validate_point(space, ball.center);
  if (!(ball.radius >= 0.0) || !std::isfinite(ball.radius)) {
    throw InputError("ball radius must be a finite nonnegative real");
  }
  if (space.kind() == SpaceKind::sphere && ball.radius > injectivity_radius(space)) {
    throw InputError("sphere ball radius exceeds pi * R");
  }
}

Point origin(const Space& space) {
  Point p{Vec(space.ambient_dim(), 0.0)};
  if (space.kind() == SpaceKind::sphere) p.coords.back() = space.radius();
  if (space.kind() == SpaceKind::hyperbolic) p.coords.back() = 1.0;
  return p;
}

double distance(const Space& space, const Point& p, const Point& q) {
  check_same_space(space, p);
  check_same_space(space, q);
  const size_t n = p.coords.size();
  switch (space.kind()) {
    case SpaceKind::euclidean: {
      Vec d(n);
      for (size_t i = 0; i < n; ++i) d[i] = p.coords[i] - q.coords[i];
      return lp_norm(d, space.pnorm());
    }
    case SpaceKind::sphere: {
      // theta = 2 atan2(|u - v|, |u + v|) on the unit sphere.
      const double R = space.radius();
      double diff = 0.0, sum = 0.0;
      for (size_t i = 0; i < n; ++i) {
        const double a = p.coords[i] / R, b = q.coords[i] / R;
        diff += (a - b) * (a - b);
        sum += (a + b) * (a + b);
      }
      return R * 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
    }
    case SpaceKind::hyperbolic: {
      // <p-q,p-q>_M = 4 sinh^2(d/2).
      Vec d(n);
      for (size_t i = 0; i < n; ++i) d[i] = p.coords[i] - q.coords[i];
      const double chord = std::sqrt(std::max(0.0, minkowski(d, d)));
      return 2.0 * std::asinh(0.5 * chord);
    }
  }
  return 0.0;
}

double injectivity_radius(const Space& space) {
  if (space.kind() == SpaceKind::sphere) return std::numbers::pi * space.radius();
  return kInfinity;
}

double tangent_norm(const Space& space, std::span<const double> v) {
  switch (space.kind()) {
    case SpaceKind::euclidean: return lp_norm(v, space.pnorm());
    case SpaceKind::sphere: return norm2(v);
    case SpaceKind::hyperbolic: return std::sqrt(std::max(0.0, minkowski(v, v)));
  }
  return 0.0;
}

Vec project_to_tangent(const Space& space, const Point& base, std::span<const double> v) {
  Vec out(v.begin(), v.end());
  const auto& b = base.coords;
  if (space.kind() == SpaceKind::sphere) {
    const double k = dot(v, b) / (space.radius() * space.radius());
    for (size_t i = 0; i < out.size(); ++i) out[i] -= k * b[i];
  } else if (space.kind() == SpaceKind::hyperbolic) {
    const double k = minkowski(v, b);
    for (size_t i = 0; i < out.size(); ++i) out[i] += k * b[i];
  }
  return out;
}

Point exp_map(const Space& space, const Tangent& t) {
  check_same_space(space, t.base);
  if (t.vector.size() != t.base.coords.size()) throw InputError("tangent vector dimension mismatch");
  const auto& p = t.base.coords;
  const auto& v = t.vector;
  const size_t n = p.size();
  switch (space.kind()) {
    case SpaceKind::euclidean: {
      Point out{p};
      for (size_t i = 0; i < n; ++i) out.coords[i] += v[i];
      return out;
    }
    case SpaceKind::sphere: {
      const double len = norm2(v);
      if (len >= injectivity_radius(space)) {
        throw DomainError("tangent vector length reaches the injectivity radius of the sphere");
      }
      if (len == 0.0) return t.base;
      const double R = space.radius();
      const double theta = len / R;
      const double c = std::cos(theta), s = R * std::sin(theta) / len;
      Point out{Vec(n)};
      for (size_t i = 0; i < n; ++i) out.coords[i] = c * p[i] + s * v[i];
      renormalize_sphere(out.coords, R);
      return out;
    }
    case SpaceKind::hyperbolic: {
      const double len = std::sqrt(std::max(0.0, minkowski(v, v)));
      if (len == 0.0) return t.base;
      const double c = std::cosh(len), s = std::sinh(len) / len;
      Point out{Vec(n)};
      for (size_t i = 0; i < n; ++i) out.coords[i] = c * p[i] + s * v[i];
      renormalize_hyperbolic(out.coords);
      return out;
    }
  }
  return t.base;
}

Tangent log_map(const Space& space, const Point& base, const Point& target) {
  check_same_space(space, base);
  check_same_space(space, target);
  const auto& p = base.coords;
  const auto& q = target.coords;
  const size_t n = p.size();
  Tangent out{base, Vec(n, 0.0)};
  switch (space.kind()) {
    case SpaceKind::euclidean:
      for (size_t i = 0; i < n; ++i) out.vector[i] = q[i] - p[i];
      return out;
    case SpaceKind::sphere: {
      const double d = distance(space, base, target);
      const double inj = injectivity_radius(space);
      if (d > inj - tolerance().slack(inj)) {
        throw DomainError("log map undefined for antipodal points");
      }
      const double R = space.radius();
      const double k = dot(p, q) / (R * R);
      Vec u(n);
      for (size_t i = 0; i < n; ++i) u[i] = q[i] - k * p[i];
      const double un = norm2(u);
      if (un == 0.0 || d == 0.0) return out;
      for (size_t i = 0; i < n; ++i) out.vector[i] = d * u[i] / un;
      return out;
    }
    case SpaceKind::hyperbolic: {
      const double d = distance(space, base, target);
      const double k = minkowski(p, q);
      Vec u(n);
      for (size_t i = 0; i < n; ++i) u[i] = q[i] + k * p[i];
      const double un = std::sqrt(std::max(0.0, minkowski(u, u)));
      if (un == 0.0 || d == 0.0) return out;
      for (size_t i = 0; i < n; ++i) out.vector[i] = d * u[i] / un;
      return out;
    }
  }
  return out;
}

Point geodesic_interpolate(const Space& space, const Point& x, const Point& y, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InputError("interpolation parameter must lie in [0,1]");
  check_same_space(space, x);
  check_same_space(space, y);
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  if (space.kind() == SpaceKind::euclidean) {
    Point out{x};
    for (size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += t * (y.coords[i] - x.coords[i]);
    return out;
  }
  Tangent v = log_map(space, x, y);
  for (double& c : v.vector) c *= t;
  return exp_map(space, v);
}

Ball shrink_ball_toward(const Space& space, const Ball& outer, const Point& y, double s) {
  if (!(s > 0.0)) throw InputError("shrunk radius must be positive");
  if (s >= outer.radius) throw InputError("shrunk radius must be smaller than the outer radius");
  if (outer.radius >= injectivity_radius(space)) {
    throw InputError("outer radius must be below the injectivity radius");
  }
  const double dxy = distance(space, outer.center, y);
  if (!within(dxy, outer.radius)) throw InputError("point does not lie in the outer ball");
  // y at (or numerically at) the center: the geodesic is undefined, keep the center.
  if (dxy < s || dxy <= tolerance().slack(outer.radius)) return Ball{outer.center, s};
  // z on the minimal geodesic from y to the center with d(y,z) = s.
  Point z = geodesic_interpolate(space, y, outer.center, s / dxy);
  return Ball{std::move(z), s};
}

double ball_volume(const Space& space, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InputError("radius must be a finite nonnegative real");
  const int n = space.dim();
  double v = 0.0;
  switch (space.kind()) {
    case SpaceKind::euclidean: {
      const double p = space.pnorm();
      // (2 Gamma(1 + 1/p))^n / Gamma(1 + n/p) r^n
      const double log_unit = n * std::log(2.0 * std::tgamma(1.0 + 1.0 / p)) - std::lgamma(1.0 + n / p);
      v = r == 0.0 ? 0.0 : std::exp(log_unit + n * std::log(r));
      break;
    }
    case SpaceKind::sphere: {
      const double R = space.radius();
      if (r > std::numbers::pi * R) throw InputError("radius exceeds pi * R on the sphere");
      v = unit_sphere_area(n) * std::pow(R, n) * sin_power_integral(n - 1, r / R);
      break;
    }
    case SpaceKind::hyperbolic:
      v = unit_sphere_area(n) * sinh_power_integral(n - 1, r);
      break;
  }
  if (!std::isfinite(v)) {
    throw UnsupportedFeature("ball volume overflows for dimension " + std::to_string(n));
  }
  return v;
}

Vec tangent_at_origin(const Space& space, std::span<const double> v) {
  if (static_cast<int>(v.size()) != space.dim()) throw InputError("tangent coordinates must have length dim");
  Vec out(v.begin(), v.end());
  if (space.kind() != SpaceKind::euclidean) out.push_back(0.0);
  return out;
}

Vec random_unit_tangent(const Space& space, const Point& base, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vec v(space.ambient_dim());
    for (double& c : v) c = gauss(rng);
    v = project_to_tangent(space, base, v);
    const double len = tangent_norm(space, v);
    if (len > 1e-12) {
      for (double& c : v) c /= len;
      return v;
    }
  }
}

Point boundary_point(const Space& space, const Ball& ball, std::span<const double> unit_dir) {
  Vec v(unit_dir.begin(), unit_dir.end());
  for (double& c : v) c *= ball.radius;
  return exp_map(space, Tangent{ball.center, std::move(v)});
}

Point random_point_in_ball(const Space& space, const Ball& ball, std::mt19937_64& rng) {
  Vec dir = random_unit_tangent(space, ball.center, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double rho = ball.radius * std::pow(unif(rng), 1.0 / space.dim());
  for (double& c : dir) c *= rho;
  return exp_map(space, Tangent{ball.center, std::move(dir)});
}

}  // namespace besicover
