#include "besicover/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "besicover/errors.hpp"
#include "besicover/tolerance.hpp"

namespace besicover {

namespace {

// Largest radius first, then lexicographic center, then input index.
std::vector<size_t> radius_desc_order(const BallFamily& family) {
  std::vector<size_t> order(family.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const Ball& x = family.balls[a];
    const Ball& y = family.balls[b];
    if (x.radius != y.radius) return x.radius > y.radius;
    if (x.center != y.center) return center_less(x.center, y.center);
    return a < b;
  });
  return order;
}

double max_radius(const BallFamily& family) {
  double r = 0.0;
  for (const auto& b : family.balls) r = std::max(r, b.radius);
  return r;
}

std::vector<Point> ball_centers(const BallFamily& family) {
  std::vector<Point> out;
  out.reserve(family.size());
  for (const auto& b : family.balls) out.push_back(b.center);
  return out;
}

BallFamily subfamily(const BallFamily& family, const std::vector<size_t>& indices) {
  BallFamily out{family.space, {}, {}};
  for (size_t i : indices) {
    out.balls.push_back(family.balls[i]);
    if (!family.labels.empty()) out.labels.push_back(family.labels[i]);
  }
  return out;
}

void check_ratio(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw InputError(std::string(name) + " must lie in (0, 1)");
}

// First-fit: index of the first family whose balls are all disjoint from b.
size_t first_fit(const Space& space, const std::vector<std::vector<Ball>>& families, const Ball& b) {
  for (size_t f = 0; f < families.size(); ++f) {
    bool fits = true;
    for (const auto& other : families[f]) {
      if (!balls_disjoint(space, b, other)) {
        fits = false;
        break;
      }
    }
    if (fits) return f;
  }
  return families.size();
}

int64_t volume_packing(double outer, double inner, int dim) {
  return static_cast<int64_t>(std::floor(std::pow(outer / inner, dim)));
}

}  // namespace

bool center_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(), b.coords.end());
}

int scale_band(double r, double cap, double beta) {
  check_ratio(beta, "band ratio");
  if (!(cap > 0.0)) return 1;
  int k = 1;
  double threshold = beta * cap;
  while (r <= threshold && threshold > 0.0 && k < 100000) {
    ++k;
    threshold *= beta;
  }
  return k;
}

// ---- bounded-overlap selection ---------------------------------------------

SubcoverResult select_bounded_overlap_subcover(const BallFamily& family, std::span<const Point> centers,
                                               double beta) {
  check_ratio(beta, "beta");
  validate_family(family);
  SubcoverResult out;
  out.selected.space = family.space;
  out.covered_centers.assign(centers.size(), false);

  // Balls centered at each requested center.
  std::vector<std::vector<size_t>> owned(family.size());
  for (size_t k = 0; k < centers.size(); ++k) {
    validate_point(family.space, centers[k]);
    bool found = false;
    for (size_t i = 0; i < family.size(); ++i) {
      if (within(distance(family.space, centers[k], family.balls[i].center), 0.0)) {
        owned[i].push_back(k);
        found = true;
      }
    }
    if (!found) throw InputError("center " + std::to_string(k) + " is not the center of any ball");
  }
  if (family.empty()) return out;

  const double cap = max_radius(family);
  out.bands.resize(family.size());
  for (size_t i = 0; i < family.size(); ++i) out.bands[i] = scale_band(family.balls[i].radius, cap, beta);
  std::vector<int> band_ids(out.bands.begin(), out.bands.end());
  std::sort(band_ids.begin(), band_ids.end());
  band_ids.erase(std::unique(band_ids.begin(), band_ids.end()), band_ids.end());

  const std::vector<size_t> order = radius_desc_order(family);
  auto mark_covered = [&](size_t i) {
    for (size_t k = 0; k < centers.size(); ++k) {
      if (!out.covered_centers[k] && ball_contains(family.space, family.balls[i], centers[k])) {
        out.covered_centers[k] = true;
      }
    }
  };
  auto has_uncovered = [&](size_t i) {
    return std::any_of(owned[i].begin(), owned[i].end(), [&](size_t k) { return !out.covered_centers[k]; });
  };

  for (int band : band_ids) {
    while (true) {
      std::vector<size_t> pool;
      for (size_t i : order) {
        if (out.bands[i] == band && has_uncovered(i)) pool.push_back(i);
      }
      if (pool.empty()) break;
      // One maximal disjoint round.
      std::vector<size_t> round;
      for (size_t i : pool) {
        const bool free = std::all_of(round.begin(), round.end(), [&](size_t j) {
          return balls_disjoint(family.space, family.balls[i], family.balls[j]);
        });
        if (free) round.push_back(i);
      }
      for (size_t i : round) {
        out.selected_indices.push_back(i);
        mark_covered(i);
      }
    }
  }

  out.selected = subfamily(family, out.selected_indices);
  out.overlap = overlap_profile_auto(out.selected, centers);
  if (family.space.kind() == SpaceKind::euclidean && family.space.dim() == 1 && beta == 0.5) {
    // w(1) = 2 times the largest 1-separated set in an interval of length 8, plus one.
    out.overlap_bound = 2 * 9 + 1;
  }
  return out;
}

// ---- disjoint partition ------------------------------------------------------

DisjointPartition partition_into_disjoint_families(const BallFamily& family, double alpha) {
  const int64_t net_bound = strict_net_bound(alpha, family.space.dim());
  validate_family(family);
  DisjointPartition out;
  out.assignment.assign(family.size(), kUnassigned);
  std::vector<std::vector<Ball>> groups;
  std::vector<std::vector<size_t>> members;
  for (size_t i : radius_desc_order(family)) {
    const size_t f = first_fit(family.space, groups, family.balls[i]);
    if (f == groups.size()) {
      groups.emplace_back();
      members.emplace_back();
    }
    groups[f].push_back(family.balls[i]);
    members[f].push_back(i);
    out.assignment[i] = f;
  }
  for (const auto& m : members) out.families.push_back(subfamily(family, m));
  const std::vector<Point> probes = ball_centers(family);
  const size_t overlap = overlap_profile_auto(family, probes).max_overlap;
  out.bound = static_cast<int64_t>(overlap) * net_bound + 1;
  out.bound_note = "overlap * floor((2 alpha + 3)^dim) + 1";
  return out;
}

// ---- 1-D chains ------------------------------------------------------------

ChainState::ChainState(size_t capacity) {
  nodes_.reserve(capacity);
  parent_.reserve(capacity);
  members_.reserve(capacity);
}

void ChainState::ensure(size_t id) {
  if (id >= nodes_.size()) {
    const size_t old = nodes_.size();
    nodes_.resize(id + 1);
    parent_.resize(id + 1);
    members_.resize(id + 1);
    for (size_t k = old; k <= id; ++k) parent_[k] = k;
  }
}

size_t ChainState::find(size_t id) const {
  size_t root = id;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[id] != root) {
    const size_t next = parent_[id];
    parent_[id] = root;
    id = next;
  }
  return root;
}

size_t ChainState::unite(size_t a, size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return a;
  if (members_[a].size() < members_[b].size()) std::swap(a, b);
  parent_[b] = a;
  members_[a].insert(members_[a].end(), members_[b].begin(), members_[b].end());
  members_[b].clear();
  members_[b].shrink_to_fit();
  return a;
}

void ChainState::flip_chain(size_t root) {
  for (size_t id : members_[root]) {
    if (nodes_[id].alive) nodes_[id].tag ^= 1;
  }
  ++flips_;
}

void ChainState::flip_suffix(size_t id) {
  auto it = order_.find(Key{nodes_[id].lo, nodes_[id].hi, id});
  double reach = it->lo;
  while (it != order_.end() && it->lo <= reach) {
    nodes_[it->id].tag ^= 1;
    reach = it->hi;
    ++it;
  }
  ++flips_;
}

bool ChainState::covers(double x) const {
  auto it = order_.upper_bound(Key{x, kInfinity, std::numeric_limits<size_t>::max()});
  if (it == order_.begin()) return false;
  --it;
  return it->hi >= x;
}

size_t ChainState::chain_count() const {
  size_t chains = 0;
  double reach = -kInfinity;
  for (const auto& k : order_) {
    if (chains == 0 || k.lo > reach) ++chains;
    reach = k.hi;
  }
  return chains;
}

std::vector<size_t> ChainState::kept() const {
  std::vector<size_t> ids;
  ids.reserve(order_.size());
  for (const auto& k : order_) ids.push_back(k.id);
  return ids;
}

bool ChainState::insert(size_t id, double lo, double hi) {
  ensure(id);
  if (nodes_[id].alive) throw InputError("interval id inserted twice");

  // Kept intervals meeting [lo, hi] form a contiguous run.
  auto last = order_.upper_bound(Key{hi, kInfinity, std::numeric_limits<size_t>::max()});
  auto first = last;
  while (first != order_.begin() && std::prev(first)->hi >= lo) --first;
  for (auto it = first; it != last; ++it) {
    if (it->lo <= lo && it->hi >= hi) return false;
  }

  // Window: the run, the new interval, and one kept neighbour on each side.
  std::vector<Key> window;
  if (first != order_.begin()) window.push_back(*std::prev(first));
  for (auto it = first; it != last; ++it) window.push_back(*it);
  if (last != order_.end()) window.push_back(*last);
  window.push_back(Key{lo, hi, id});
  std::sort(window.begin(), window.end(), [](const Key& a, const Key& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    if (a.hi != b.hi) return a.hi > b.hi;
    return a.id < b.id;
  });

  // Farthest-reach minimal cover of the window's union.
  std::vector<Key> picked;
  size_t i = 0;
  double reach = -kInfinity;
  while (i < window.size()) {
    if (picked.empty() || window[i].lo > reach) {
      picked.push_back(window[i]);
      reach = window[i].hi;
      ++i;
      continue;
    }
    const Key* best = nullptr;
    while (i < window.size() && window[i].lo <= reach) {
      if (best == nullptr || window[i].hi > best->hi) best = &window[i];
      ++i;
    }
    if (best != nullptr && best->hi > reach) {
      picked.push_back(*best);
      reach = best->hi;
    }
  }

  bool kept_new = false;
  for (const auto& k : window) {
    const bool keep = std::any_of(picked.begin(), picked.end(), [&](const Key& p) { return p.id == k.id; });
    if (k.id == id) {
      kept_new = keep;
      continue;
    }
    if (!keep) {
      order_.erase(k);
      nodes_[k.id].alive = false;
    }
  }
  if (!kept_new) return false;
  nodes_[id] = Node{lo, hi, 0, true};
  members_[id] = {id};
  parent_[id] = id;
  order_.insert(Key{lo, hi, id});

  // Restore alternation along the picked sequence.
  for (size_t k = 0; k < picked.size(); ++k) {
    const size_t cur = picked[k].id;
    if (k == 0 || picked[k].lo > picked[k - 1].hi) continue;
    const size_t prev = picked[k - 1].id;
    const int desired = nodes_[prev].tag ^ 1;
    if (cur == id) {
      nodes_[cur].tag = desired;
      unite(prev, cur);
      continue;
    }
    const size_t rp = find(prev);
    const size_t rc = find(cur);
    if (rp != rc) {
      if (nodes_[cur].tag != desired) {
        flip_chain(members_[rp].size() < members_[rc].size() ? rp : rc);
      }
      unite(rp, rc);
    } else if (nodes_[cur].tag != desired) {
      flip_suffix(cur);
    }
  }
  return true;
}

std::string to_string(OneDMethod method) { return method == OneDMethod::greedy ? "greedy" : "anchored"; }

OneDMethod oned_method_from_string(const std::string& name) {
  if (name == "greedy") return OneDMethod::greedy;
  if (name == "anchored") return OneDMethod::anchored;
  throw InputError("unknown 1-D method: " + name);
}

DisjointPartition besicovitch_cover_1d(const BallFamily& family, std::span<const double> centers,
                                       OneDMethod method) {
  if (family.space.kind() != SpaceKind::euclidean || family.space.dim() != 1) {
    throw UnsupportedFeature("the two-family interval cover needs a 1-dimensional Euclidean family");
  }
  validate_family(family);
  const size_t n = family.size();

  std::vector<double> wanted(centers.begin(), centers.end());
  for (double c : wanted) {
    if (!std::isfinite(c)) throw InputError("centers must be finite");
  }
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  std::vector<double> owned_centers;
  for (const auto& b : family.balls) owned_centers.push_back(b.center.coords[0]);
  std::sort(owned_centers.begin(), owned_centers.end());
  for (size_t k = 0; k < centers.size(); ++k) {
    if (!std::binary_search(owned_centers.begin(), owned_centers.end(), centers[k])) {
      throw InputError("center " + std::to_string(k) + " is not the center of any interval");
    }
  }

  std::vector<size_t> order;
  for (size_t i : radius_desc_order(family)) {
    if (std::binary_search(wanted.begin(), wanted.end(), family.balls[i].center.coords[0])) order.push_back(i);
  }
  auto lo_of = [&](size_t i) { return family.balls[i].center.coords[0] - family.balls[i].radius; };
  auto hi_of = [&](size_t i) { return family.balls[i].center.coords[0] + family.balls[i].radius; };
  auto x_of = [&](size_t i) { return family.balls[i].center.coords[0]; };

  ChainState chains(n);
  if (method == OneDMethod::greedy) {
    // Largest remaining radius among uncovered centers, so each pick exceeds
    // half the supremum.
    for (size_t i : order) {
      if (!chains.covers(x_of(i))) chains.insert(i, lo_of(i), hi_of(i));
    }
  } else {
    // Disjoint anchors by decreasing radius; every other interval meets the
    // anchor that blocked it.
    std::map<double, size_t> anchors;  // left endpoint -> index
    std::vector<size_t> anchor_list;
    std::map<size_t, std::pair<size_t, size_t>> extremes;  // anchor -> (leftmost, rightmost)
    auto better_left = [&](size_t a, size_t b) {
      if (x_of(a) != x_of(b)) return x_of(a) < x_of(b);
      return family.balls[a].radius > family.balls[b].radius;
    };
    auto better_right = [&](size_t a, size_t b) {
      if (x_of(a) != x_of(b)) return x_of(a) > x_of(b);
      return family.balls[a].radius > family.balls[b].radius;
    };
    for (size_t i : order) {
      auto it = anchors.upper_bound(hi_of(i));
      size_t blocker = kUnassigned;
      if (it != anchors.begin() && hi_of(std::prev(it)->second) >= lo_of(i)) blocker = std::prev(it)->second;
      if (blocker == kUnassigned) {
        anchors.emplace(lo_of(i), i);
        anchor_list.push_back(i);
        extremes[i] = {i, i};
        continue;
      }
      auto& [left, right] = extremes[blocker];
      if (better_left(i, left)) left = i;
      if (better_right(i, right)) right = i;
    }
    for (size_t a : anchor_list) {
      const auto [left, right] = extremes[a];
      chains.insert(a, lo_of(a), hi_of(a));
      if (left != a) chains.insert(left, lo_of(left), hi_of(left));
      if (right != a && right != left) chains.insert(right, lo_of(right), hi_of(right));
    }
  }

  for (size_t k = 0; k < centers.size(); ++k) {
    if (!chains.covers(centers[k])) throw std::logic_error("interval cover lost a center");
  }

  DisjointPartition out;
  out.assignment.assign(n, kUnassigned);
  std::vector<std::vector<size_t>> by_tag(2);
  for (size_t id : chains.kept()) by_tag[chains.tag(id)].push_back(id);
  for (const auto& ids : by_tag) {
    if (ids.empty()) continue;
    for (size_t id : ids) out.assignment[id] = out.families.size();
    out.families.push_back(subfamily(family, ids));
  }
  out.bound = 2;
  out.bound_note = "two families";
  return out;
}

// ---- CIP selection -----------------------------------------------------------

SubcoverResult cip_subcover(const BallFamily& family, int m, double s, double beta) {
  if (m < 1) throw InputError("m must be >= 1");
  check_ratio(s, "shrink factor s");
  check_ratio(beta, "beta");
  validate_family(family);
  SubcoverResult out;
  out.selected.space = family.space;
  const size_t n = family.size();
  out.covered_centers.assign(n, false);
  if (family.empty()) return out;

  const double cap = max_radius(family);
  out.bands.resize(n);
  for (size_t i = 0; i < n; ++i) out.bands[i] = scale_band(family.balls[i].radius, cap, beta);
  std::vector<int> band_ids(out.bands.begin(), out.bands.end());
  std::sort(band_ids.begin(), band_ids.end());
  band_ids.erase(std::unique(band_ids.begin(), band_ids.end()), band_ids.end());

  std::vector<size_t> lex(n);
  std::iota(lex.begin(), lex.end(), 0);
  std::sort(lex.begin(), lex.end(), [&](size_t a, size_t b) {
    const Ball& x = family.balls[a];
    const Ball& y = family.balls[b];
    if (x.center != y.center) return center_less(x.center, y.center);
    if (x.radius != y.radius) return x.radius > y.radius;
    return a < b;
  });

  auto select = [&](size_t i) {
    out.selected_indices.push_back(i);
    for (size_t j = 0; j < n; ++j) {
      if (!out.covered_centers[j] && ball_contains(family.space, family.balls[i], family.balls[j].center)) {
        out.covered_centers[j] = true;
      }
    }
  };
  auto pool_sup = [&](int band) {
    double sup = -1.0;
    for (size_t j = 0; j < n; ++j) {
      if (out.bands[j] == band && !out.covered_centers[j]) sup = std::max(sup, family.balls[j].radius);
    }
    return sup;
  };

  for (int band : band_ids) {
    while (pool_sup(band) >= 0.0) {
      std::vector<size_t> round;
      for (size_t i : lex) {
        if (out.bands[i] != band || out.covered_centers[i]) continue;
        if (!(family.balls[i].radius > s * pool_sup(band))) continue;
        const bool free = std::all_of(round.begin(), round.end(), [&](size_t j) {
          return balls_disjoint(family.space, family.balls[i], family.balls[j]);
        });
        if (!free) continue;
        round.push_back(i);
        select(i);
      }
    }
  }

  for (size_t a = 0; a < out.selected_indices.size(); ++a) {
    for (size_t b = a + 1; b < out.selected_indices.size(); ++b) {
      const Ball& x = family.balls[out.selected_indices[a]];
      const Ball& y = family.balls[out.selected_indices[b]];
      if (!(distance(family.space, x.center, y.center) > s * std::max(x.radius, y.radius))) {
        throw std::logic_error("selected centers violate the shrink separation");
      }
    }
  }

  out.selected = subfamily(family, out.selected_indices);
  out.overlap = overlap_profile_auto(out.selected, ball_centers(family));
  return out;
}

// ---- quasi-round sets ----------------------------------------------------------

DisjointPartition morse_partition(const Space& space, std::span<const QuasiRoundSet> sets, double tau,
                                  double lambda) {
  if (!(tau > 1.0 && tau <= 2.0)) throw InputError("tau must lie in (1, 2]");
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw InputError("lambda must be a finite value >= 1");
  const double cap = space.kind() == SpaceKind::sphere ? injectivity_radius(space) / 4.0 : kInfinity;
  for (size_t i = 0; i < sets.size(); ++i) {
    try {
      validate_quasi_round(space, sets[i]);
    } catch (const InputError& e) {
      throw InputError("set " + std::to_string(i) + ": " + e.what());
    }
    if (sets[i].lambda > lambda) {
      throw InputError("set " + std::to_string(i) + " has a sandwich ratio above lambda");
    }
    if (lambda * sets[i].inner_radius > cap) {
      throw InputError("set " + std::to_string(i) + " exceeds a quarter of the injectivity radius");
    }
  }

  BallFamily outer{space, {}, {}};
  double dmax = 0.0;
  for (const auto& s : sets) {
    outer.balls.push_back(Ball{s.anchor, lambda * s.inner_radius});
    dmax = std::max(dmax, s.diameter);
  }
  std::vector<int> band(sets.size());
  for (size_t i = 0; i < sets.size(); ++i) band[i] = scale_band(sets[i].diameter, dmax, 1.0 / tau);
  std::vector<size_t> order(sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (band[a] != band[b]) return band[a] < band[b];
    if (outer.balls[a].radius != outer.balls[b].radius) return outer.balls[a].radius > outer.balls[b].radius;
    if (sets[a].anchor != sets[b].anchor) return center_less(sets[a].anchor, sets[b].anchor);
    return a < b;
  });

  DisjointPartition out;
  out.assignment.assign(sets.size(), kUnassigned);
  std::vector<std::vector<Ball>> groups;
  std::vector<std::vector<size_t>> members;
  for (size_t i : order) {
    const size_t f = first_fit(space, groups, outer.balls[i]);
    if (f == groups.size()) {
      groups.emplace_back();
      members.emplace_back();
    }
    groups[f].push_back(outer.balls[i]);
    members[f].push_back(i);
    out.assignment[i] = f;
  }
  for (const auto& m : members) out.families.push_back(subfamily(outer, m));

  // Euclidean volume packing with D = 4 lambda and C = 1 / (16 lambda).
  const int dim = space.dim();
  const double d_far = 4.0 * lambda;
  const double c_near = 1.0 / (16.0 * lambda);
  const int64_t n_far = volume_packing(d_far + 2.0 * lambda, 1.0, dim);
  const int64_t n_shell = volume_packing(d_far + 2.0 * lambda, 1.0 / (2.0 * lambda), dim);
  const int64_t n_near = volume_packing(1.0 + c_near, c_near, dim);
  out.bound = n_far + n_shell * n_near;
  out.bound_note = "empirical volume-packing estimate, not certified";
  return out;
}

}  // namespace besicover
