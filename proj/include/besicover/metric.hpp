#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace besicover {

using Vec = std::vector<double>;

enum class SpaceKind { euclidean, sphere, hyperbolic };

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

// Ambient metric space. Euclidean spaces carry an l^p norm; the sphere S^n of
// radius R is embedded in R^{n+1}; hyperbolic space H^n (curvature -1) uses
// the hyperboloid model in R^{n+1} with the time coordinate last.
class Space {
 public:
  // The real line.
  Space() : Space(SpaceKind::euclidean, 1, 2.0, 1.0) {}

  static Space euclidean(int dim, double pnorm = 2.0);
  static Space sphere(int dim, double radius = 1.0);
  static Space hyperbolic(int dim);

  SpaceKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double pnorm() const { return pnorm_; }
  double radius() const { return radius_; }
  // Length of the coordinate vector of a point.
  int ambient_dim() const { return kind_ == SpaceKind::euclidean ? dim_ : dim_ + 1; }
  bool is_euclidean_l2() const { return kind_ == SpaceKind::euclidean && pnorm_ == 2.0; }

  friend bool operator==(const Space&, const Space&) = default;

 private:
  Space(SpaceKind kind, int dim, double pnorm, double radius)
      : kind_(kind), dim_(dim), pnorm_(pnorm), radius_(radius) {}

  SpaceKind kind_;
  int dim_;
  double pnorm_;
  double radius_;
};

struct Point {
  Vec coords;

  friend bool operator==(const Point&, const Point&) = default;
};

// Closed metric ball.
struct Ball {
  Point center;
  double radius = 0.0;

  friend bool operator==(const Ball&, const Ball&) = default;
};

struct Tangent {
  Point base;
  Vec vector;
};

// Throws InputError if the point does not lie in the space (wrong length,
// off the sphere, off the hyperboloid sheet, non-finite coordinates).
void validate_point(const Space& space, const Point& p);
// Throws InputError for negative radius or, on the sphere, radius > pi R.
void validate_ball(const Space& space, const Ball& ball);

// Canonical base point: the origin, the north pole (0,..,0,R), or (0,..,0,1).
Point origin(const Space& space);

double distance(const Space& space, const Point& p, const Point& q);
double injectivity_radius(const Space& space);

// Length of a tangent vector (l^p norm for Euclidean spaces).
double tangent_norm(const Space& space, std::span<const double> v);
// Removes the normal component of v at base.
Vec project_to_tangent(const Space& space, const Point& base, std::span<const double> v);

Point exp_map(const Space& space, const Tangent& t);
Tangent log_map(const Space& space, const Point& base, const Point& target);
Point geodesic_interpolate(const Space& space, const Point& x, const Point& y, double t);

// Ball of radius s inside `outer` that still contains y.
Ball shrink_ball_toward(const Space& space, const Ball& outer, const Point& y, double s);

double ball_volume(const Space& space, double r);

// Embeds a vector of R^dim as a tangent vector at origin(space).
Vec tangent_at_origin(const Space& space, std::span<const double> v);

// Unit tangent vector at base drawn from the isotropic distribution.
Vec random_unit_tangent(const Space& space, const Point& base, std::mt19937_64& rng);
// Point on the geodesic sphere of radius ball.radius around ball.center.
Point boundary_point(const Space& space, const Ball& ball, std::span<const double> unit_dir);
// Random point inside the ball, sampled uniformly in the tangent ball.
Point random_point_in_ball(const Space& space, const Ball& ball, std::mt19937_64& rng);

constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace besicover
