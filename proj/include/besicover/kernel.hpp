#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "besicover/metric.hpp"

namespace besicover {

// Finite ordered list of closed balls in one space.
struct BallFamily {
  Space space;
  std::vector<Ball> balls;
  std::vector<std::string> labels;  // empty, or one label per ball

  size_t size() const { return balls.size(); }
  bool empty() const { return balls.empty(); }
};

// Throws InputError naming the first offending ball index.
void validate_family(const BallFamily& family);

// A set S with B(anchor, r) <= S <= B(anchor, lambda r). Only the sandwich is
// known; membership and intersection tests bracket the truth.
struct QuasiRoundSet {
  Point anchor;
  double inner_radius = 0.0;
  double lambda = 1.0;
  double diameter = 0.0;

  Ball inner() const { return Ball{anchor, inner_radius}; }
  Ball outer() const { return Ball{anchor, lambda * inner_radius}; }

  friend bool operator==(const QuasiRoundSet&, const QuasiRoundSet&) = default;
};

void validate_quasi_round(const Space& space, const QuasiRoundSet& set);

struct OverlapProfile {
  size_t max_overlap = 0;
  std::optional<Point> witness;
  // histogram[k] = number of probes lying in exactly k balls.
  std::vector<size_t> histogram;
  // False when computed from probes: max_overlap is then a lower bound.
  bool exact = false;
};

enum class VerdictStatus { valid, invalid, indeterminate };

std::string to_string(VerdictStatus status);

struct Verdict {
  VerdictStatus status = VerdictStatus::valid;
  std::string reason;
  std::vector<size_t> indices;         // offending balls, or the found subset
  std::optional<Point> witness;        // common point / violating point
  std::optional<size_t> central_index; // satellite configurations (0-based)

  bool is_valid() const { return status == VerdictStatus::valid; }
};

// Ball predicates under the global tolerance. Closed balls: touching counts
// as intersecting, a point on the sphere counts as inside.
bool ball_contains(const Space& space, const Ball& ball, const Point& p);
bool balls_intersect(const Space& space, const Ball& a, const Ball& b);
bool balls_disjoint(const Space& space, const Ball& a, const Ball& b);

enum class CommonPointStatus { found, empty, indeterminate };

struct CommonPointResult {
  CommonPointStatus status = CommonPointStatus::indeterminate;
  std::optional<Point> point;
  // max_i d(point, x_i) - r_i at the reported (or best) point.
  double max_violation = 0.0;
  // Certified lower bound on min_p max_i d(p, x_i) - r_i, when available.
  std::optional<double> lower_bound;
};

// Searches for a point in every ball of the family. Euclidean l2 uses cyclic
// projections, other l^p norms a smoothed minimax descent, curved spaces a
// seeded candidate grid refined by geodesic projections. Emptiness is only
// reported with a certificate (a disjoint pair or a dual lower bound).
CommonPointResult find_common_point(const BallFamily& family);

Verdict is_besicovitch_family(const BallFamily& family);

// Every pair of balls intersects and no ball contains another ball's center.
Verdict is_k_configuration(const BallFamily& family);

OverlapProfile overlap_profile(const BallFamily& family, std::span<const Point> probes);
// Exact maximum of the overlap count over the real line (1-D Euclidean only).
OverlapProfile overlap_profile_exact_1d(const BallFamily& family);
// exact_1d when the family lives in R^1, probe mode over `probes` otherwise.
OverlapProfile overlap_profile_auto(const BallFamily& family, std::span<const Point> probes);

// First-fit greedy net: a point is kept when its distance to every kept point
// is >= eps (> eps when strict).
std::vector<Point> epsilon_net_greedy(const Space& space, std::span<const Point> points, double eps,
                                      bool strict);

// Size of a greedy eps-net over `budget` seeded sample points of `target`
// (the target center first).
size_t covering_number(const Space& space, const Ball& target, double eps, int64_t budget,
                       uint64_t seed = 0);

Verdict is_alpha_configuration(const BallFamily& family, const Ball& target, double alpha);

Verdict is_tau_satellite_configuration(const Space& space, std::span<const QuasiRoundSet> sets,
                                       std::span<const Point> points, double tau);

// floor((2 alpha + 3)^dim)
int64_t strict_net_bound(double alpha, int dim);

}  // namespace besicover
