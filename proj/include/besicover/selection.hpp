#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "besicover/kernel.hpp"

namespace besicover {

constexpr size_t kUnassigned = std::numeric_limits<size_t>::max();

struct SubcoverResult {
  BallFamily selected;
  std::vector<size_t> selected_indices;  // into the input family, in selection order
  std::vector<bool> covered_centers;     // one flag per input center
  OverlapProfile overlap;
  std::vector<int> bands;                // per input ball, 1-based scale band
  // Overlap bound from the construction, when one is known for the input.
  std::optional<int64_t> overlap_bound;
};

struct DisjointPartition {
  std::vector<BallFamily> families;
  // Input index -> family index, or kUnassigned for balls that were dropped.
  std::vector<size_t> assignment;
  // Family-count bound from the construction and how it was obtained.
  std::optional<int64_t> bound;
  std::string bound_note;
};

// Radius band of r in ((beta^k) cap, (beta^(k-1)) cap], k >= 1.
int scale_band(double r, double cap, double beta);

// Bands by radius ratio beta; inside a band, repeated maximal disjoint rounds
// over balls whose centers are not yet covered by earlier selections.
SubcoverResult select_bounded_overlap_subcover(const BallFamily& family, std::span<const Point> centers,
                                               double beta = 0.5);

// First-fit assignment in (radius desc, center lex) order: each ball joins
// the first family it is disjoint from.
DisjointPartition partition_into_disjoint_families(const BallFamily& family, double alpha = 0.75);

// Two internally disjoint subfamilies of closed intervals. Kept intervals are
// stored sorted, with no interval containing another, so left and right
// endpoints are ordered alike and consecutive kept intervals J_k, J_{k+2}
// never meet. Each chain (connected run) alternates between tag 0 and tag 1.
class ChainState {
 public:
  explicit ChainState(size_t capacity = 0);

  // Adds [lo, hi] under the caller's id. Returns false when the interval was
  // absorbed (already covered by kept intervals).
  bool insert(size_t id, double lo, double hi);

  bool covers(double x) const;
  size_t size() const { return order_.size(); }
  size_t chain_count() const;
  std::vector<size_t> kept() const;  // ids sorted by left endpoint
  int tag(size_t id) const { return nodes_[id].tag; }
  size_t flips() const { return flips_; }

 private:
  struct Node {
    double lo = 0.0;
    double hi = 0.0;
    int tag = 0;
    bool alive = false;
  };
  struct Key {
    double lo;
    double hi;
    size_t id;
    bool operator<(const Key& o) const {
      if (lo != o.lo) return lo < o.lo;
      if (hi != o.hi) return hi < o.hi;
      return id < o.id;
    }
  };

  size_t find(size_t id) const;
  size_t unite(size_t a, size_t b);
  void flip_chain(size_t root);
  void flip_suffix(size_t id);
  void ensure(size_t id);

  std::vector<Node> nodes_;
  mutable std::vector<size_t> parent_;
  std::vector<std::vector<size_t>> members_;  // per chain root, may hold dead ids
  std::set<Key> order_;
  size_t flips_ = 0;
};

enum class OneDMethod { greedy, anchored };

std::string to_string(OneDMethod method);
OneDMethod oned_method_from_string(const std::string& name);

// Two disjoint subfamilies of a 1-D family covering every given center.
// greedy: largest-radius-first selection of intervals with uncovered centers,
// then chain insertion. anchored: disjoint anchors taken by decreasing radius,
// each interval reduced to its anchor plus the leftmost and rightmost centered
// intervals meeting it, then chain insertion.
DisjointPartition besicovitch_cover_1d(const BallFamily& family, std::span<const double> centers,
                                       OneDMethod method = OneDMethod::greedy);

// Selection inside each radius band of balls with uncovered centers and radius
// above s times the largest such radius; lexicographically smallest center
// first among admissible balls.
SubcoverResult cip_subcover(const BallFamily& family, int m, double s, double beta = 0.5);

// Diameter bands by factor tau; outer balls B(anchor, lambda r) assigned first
// fit to disjoint families.
DisjointPartition morse_partition(const Space& space, std::span<const QuasiRoundSet> sets, double tau,
                                  double lambda);

// Lexicographic order on coordinates.
bool center_less(const Point& a, const Point& b);

}  // namespace besicover
