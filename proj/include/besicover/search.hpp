#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "besicover/kernel.hpp"

namespace besicover {

struct SearchConfig {
  uint64_t seed = 0;
  int64_t budget = 100000;  // total proposals over all restarts
  int restarts = 8;
  double initial_temperature = 0.05;
  double decay = 0.9995;  // per proposal
  double step = 0.25;     // relative perturbation scale
};

// Throws InputError when the config breaks its invariants.
void validate_config(const SearchConfig& config);

struct SearchResult {
  BallFamily best;
  size_t score = 0;
  bool feasible = false;
  std::vector<size_t> trace;  // best score per restart
  // Satellite searches: the configuration behind `best` (inner balls).
  std::vector<QuasiRoundSet> sets;
  std::vector<Point> points;
  std::optional<size_t> central_index;
};

// Per-restart generator seed.
uint64_t restart_seed(uint64_t seed, int restart);

// Grows Besicovitch families around a fixed common point by annealing over
// centers and radii; every recorded family passes is_besicovitch_family.
SearchResult search_max_besicovitch_family(const Space& space, double rmin, double rmax, const SearchConfig& config);

// Looks for one Besicovitch family of exactly `size` balls.
SearchResult search_besicovitch_of_size(const Space& space, size_t size, double rmin, double rmax,
                                        const SearchConfig& config);

// Pairwise intersecting balls, none holding another's center.
SearchResult search_max_k_configuration(const Space& space, double rmin, double rmax, const SearchConfig& config);

// Disjoint unit balls touching B(0,1); built for dim 1-3.
BallFamily construct_strict_hadwiger(int dim);
Verdict check_strict_hadwiger(const BallFamily& family);
// Annealed spherical code for any dim (lower bound only).
SearchResult search_strict_hadwiger(int dim, const SearchConfig& config);

// Open unit balls with centers in B(0,4), one at the origin, pairwise center
// distance >= 2.
SearchResult pack_unit_balls_radius5(int dim, const SearchConfig& config);
Verdict check_radius5_packing(const BallFamily& family);

struct CipResult {
  bool found = false;
  std::vector<size_t> indices;
  std::optional<Point> witness;
  std::string route;  // "sector", "grid" or empty
};

// Looks for m + 1 balls whose radii shrunk by s still share a point.
CipResult cip_check(const BallFamily& family, int m, double s);

// Shrink factors tried by the lab: 0.50, 0.55, ..., 0.95, 0.99.
std::vector<double> shrink_grid();
// Largest grid value for which cip_check succeeds; empty if none does.
std::optional<double> cip_largest_shrink(const BallFamily& family, int m);

struct CipTrialStats {
  int m = 0;
  double s = 0.0;
  int trials = 0;
  int found = 0;
  int sector_route = 0;
  int verified = 0;
};

// 2m + 1 planar balls through the origin: radii in [0.9, 1], centers on the
// boundary sphere with probability 1/2, else uniform in the ball.
BallFamily random_cip_family(int m, std::mt19937_64& rng);
CipTrialStats cip_monte_carlo(int m, double s, int trials, uint64_t seed);

// Anneals ordered quasi-round sets (diameter 2r) and keeps the largest
// configuration accepted by is_tau_satellite_configuration at this lambda.
SearchResult satellite_max_search(const Space& space, double tau, double lambda, const SearchConfig& config);

struct ConstantsRow {
  std::string name;  // w, Hstar, K, alpha, beta
  int dim = 0;
  std::optional<int64_t> reference_low;   // empty when the table has no entry
  std::optional<int64_t> reference_high;
  int64_t achieved = 0;
  std::string method;
};

std::string reference_value_text(const ConstantsRow& row);

// Reference values against achieved lower bounds for dims in {1,2,3,4}.
// Throws std::logic_error if the chain w <= K <= alpha <= beta <= 5^n fails
// on the reference or achieved values.
std::vector<ConstantsRow> constants_report(const std::vector<int>& dims, const SearchConfig& config);

}  // namespace besicover
