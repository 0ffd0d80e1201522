#include "besicover/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "besicover/errors.hpp"
#include "besicover/tolerance.hpp"

namespace besicover {

namespace {

// Relative margin that keeps annealed configurations clear of the validators'
// tolerance band.
constexpr double kMargin = 1e-6;
constexpr size_t kMaxGrowth = 64;

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Vec random_direction(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vec v(dim);
    for (double& x : v) x = gauss(rng);
    const double n = norm2(v);
    if (n > 1e-12) {
      for (double& x : v) x /= n;
      return v;
    }
  }
}

int64_t per_restart_budget(const SearchConfig& config) {
  return std::max<int64_t>(1, config.budget / config.restarts);
}

// ---- annealed ball configurations around a witness point ---------------------

enum class PairRule { besicovitch, k_configuration };

struct BallState {
  std::vector<Vec> tangents;  // coordinates in the tangent space at the witness
  std::vector<double> radii;
};

class BallAnnealer {
 public:
  BallAnnealer(const Space& space, double rmin, double rmax, PairRule rule, const SearchConfig& config)
      : space_(space), rmin_(rmin), rmax_(rmax), rule_(rule), config_(config), witness_(origin(space)) {
    const double inj = injectivity_radius(space);
    reach_ = rule == PairRule::besicovitch ? rmax : std::min(2.0 * rmax, 0.95 * inj);
  }

  // Tangent length: the space's norm for Euclidean spaces, |v|_2 otherwise.
  double tangent_length(const Vec& t) const {
    return space_.kind() == SpaceKind::euclidean ? tangent_norm(space_, t) : norm2(t);
  }

  double bound_for(double r) const { return rule_ == PairRule::besicovitch ? r : reach_; }

  void clamp(Vec& t, double r) const {
    const double len = tangent_length(t);
    const double cap = bound_for(r);
    if (len > cap) {
      for (double& x : t) x *= cap / len;
    }
  }

  Point center_of(const Vec& t) const {
    if (space_.kind() == SpaceKind::euclidean) return Point{t};
    return exp_map(space_, Tangent{witness_, tangent_at_origin(space_, t)});
  }

  double pair_energy(const Point& a, double ra, const Point& b, double rb) const {
    const double d = distance(space_, a, b);
    double e = std::max(0.0, (1.0 + kMargin) * std::max(ra, rb) - d);
    if (rule_ == PairRule::k_configuration) e += std::max(0.0, d - (1.0 - kMargin) * (ra + rb));
    return e;
  }

  BallFamily family(const BallState& s) const {
    BallFamily f{space_, {}, {}};
    for (size_t i = 0; i < s.radii.size(); ++i) f.balls.push_back(Ball{center_of(s.tangents[i]), s.radii[i]});
    return f;
  }

  bool accepts(const BallFamily& f) const {
    return rule_ == PairRule::besicovitch ? is_besicovitch_family(f).is_valid() : is_k_configuration(f).is_valid();
  }

  void random_ball(std::mt19937_64& rng, Vec& t, double& r) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    r = rmin_ + (rmax_ - rmin_) * unif(rng);
    t = random_direction(space_.dim(), rng);
    const double len = tangent_length(t);
    const double target = bound_for(r) * (0.5 + 0.5 * unif(rng));
    for (double& x : t) x *= target / len;
  }

  // Anneals from `start`. growth: add a ball whenever all pair energies vanish
  // and the family validates. Returns the largest validated family.
  BallFamily run(BallState state, bool growth, int64_t budget, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    BallFamily best{space_, {}, {}};
    const size_t fixed = state.radii.size();

    std::vector<Point> centers;
    std::vector<std::vector<double>> energy;
    size_t positive = 0;
    auto rebuild = [&]() {
      const size_t k = state.radii.size();
      centers.clear();
      for (const auto& t : state.tangents) centers.push_back(center_of(t));
      energy.assign(k, std::vector<double>(k, 0.0));
      positive = 0;
      for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j) {
          energy[i][j] = energy[j][i] = pair_energy(centers[i], state.radii[i], centers[j], state.radii[j]);
          positive += energy[i][j] > 0.0;
        }
    };
    auto settled = [&]() {
      if (positive != 0) return false;
      BallFamily f = family(state);
      if (!accepts(f)) return false;
      if (f.size() > best.size()) best = std::move(f);
      return true;
    };

    rebuild();
    double temperature = config_.initial_temperature;
    for (int64_t it = 0; it <= budget; ++it) {
      if (settled()) {
        if (!growth) break;
        if (state.radii.size() >= kMaxGrowth) break;
        Vec t;
        double r;
        random_ball(rng, t, r);
        state.tangents.push_back(std::move(t));
        state.radii.push_back(r);
        rebuild();
        temperature = config_.initial_temperature;
      }
      if (it == budget) break;
      const size_t k = state.radii.size();
      if (k < 2) continue;
      const size_t i = std::uniform_int_distribution<size_t>(0, k - 1)(rng);
      Vec t = state.tangents[i];
      double r = state.radii[i];
      const double u = unif(rng);
      if (u < 0.02) {
        random_ball(rng, t, r);
      } else if (u < 0.72) {
        for (double& x : t) x += config_.step * r * gauss(rng);
      } else {
        r = std::clamp(r * std::exp(0.5 * config_.step * gauss(rng)), rmin_, rmax_);
      }
      clamp(t, r);
      const Point c = center_of(t);
      double delta = 0.0;
      std::vector<double> row(k, 0.0);
      for (size_t j = 0; j < k; ++j) {
        if (j == i) continue;
        row[j] = pair_energy(c, r, centers[j], state.radii[j]);
        delta += row[j] - energy[i][j];
      }
      if (delta <= 0.0 || unif(rng) < std::exp(-delta / std::max(temperature, 1e-300))) {
        state.tangents[i] = std::move(t);
        state.radii[i] = r;
        centers[i] = c;
        for (size_t j = 0; j < k; ++j) {
          if (j == i) continue;
          positive -= energy[i][j] > 0.0;
          positive += row[j] > 0.0;
          energy[i][j] = energy[j][i] = row[j];
        }
      }
      temperature *= config_.decay;
    }
    (void)fixed;
    return best;
  }

  BallState random_state(size_t k, std::mt19937_64& rng) const {
    BallState s;
    for (size_t i = 0; i < k; ++i) {
      Vec t;
      double r;
      random_ball(rng, t, r);
      s.tangents.push_back(std::move(t));
      s.radii.push_back(r);
    }
    return s;
  }

  const Space& space() const { return space_; }
  double rmax() const { return rmax_; }

 private:
  Space space_;
  double rmin_, rmax_;
  PairRule rule_;
  SearchConfig config_;
  Point witness_;
  double reach_;
};

void check_radii(const Space& space, double rmin, double rmax) {
  if (!(rmin > 0.0) || !(rmax >= rmin) || !std::isfinite(rmax)) {
    throw InputError("radii range needs 0 < rmin <= rmax < infinity");
  }
  if (rmax >= injectivity_radius(space)) throw InputError("rmax must stay below the injectivity radius");
}

// ---- spherical codes -----------------------------------------------------------

// Unit vectors with pairwise distance > chord (1 + margin), grown by annealing.
std::vector<Vec> spherical_code(int dim, double chord, int64_t budget, std::mt19937_64& rng,
                                const SearchConfig& config) {
  const double need = chord * (1.0 + kMargin);
  auto clash = [&](const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::max(0.0, need - std::sqrt(s));
  };
  std::vector<Vec> code;
  for (int attempt = 0; attempt < 4000; ++attempt) {
    Vec u = random_direction(dim, rng);
    if (std::all_of(code.begin(), code.end(), [&](const Vec& v) { return clash(u, v) == 0.0; })) code.push_back(u);
  }
  std::vector<Vec> best = code;
  std::vector<Vec> state = code;
  state.push_back(random_direction(dim, rng));

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double temperature = config.initial_temperature;
  auto total = [&](size_t i, const Vec& u) {
    double e = 0.0;
    for (size_t j = 0; j < state.size(); ++j)
      if (j != i) e += clash(u, state[j]);
    return e;
  };
  double energy = 0.0;
  for (size_t i = 0; i < state.size(); ++i) energy += total(i, state[i]);
  energy *= 0.5;
  for (int64_t it = 0; it < budget; ++it) {
    if (energy <= 0.0) {
      // Recheck exactly before accepting the grown code.
      bool clean = true;
      for (size_t i = 0; i < state.size() && clean; ++i)
        for (size_t j = i + 1; j < state.size() && clean; ++j) clean = clash(state[i], state[j]) == 0.0;
      if (clean) {
        best = state;
        if (state.size() >= 4096) break;
        state.push_back(random_direction(dim, rng));
        energy = total(state.size() - 1, state.back());
        temperature = config.initial_temperature;
        continue;
      }
      energy = 0.0;
      for (size_t i = 0; i < state.size(); ++i) energy += total(i, state[i]);
      energy *= 0.5;
    }
    const size_t i = std::uniform_int_distribution<size_t>(0, state.size() - 1)(rng);
    Vec u = state[i];
    for (double& x : u) x += 0.5 * config.step * gauss(rng);
    const double n = norm2(u);
    if (n < 1e-12) continue;
    for (double& x : u) x /= n;
    const double delta = total(i, u) - total(i, state[i]);
    if (delta <= 0.0 || unif(rng) < std::exp(-delta / std::max(temperature, 1e-300))) {
      state[i] = std::move(u);
      energy = std::max(0.0, energy + delta);
      if (energy < 1e-15) energy = 0.0;
    }
    temperature *= config.decay;
  }
  return best;
}

std::vector<Vec> icosahedron_directions() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec> v;
  for (double a : {-1.0, 1.0})
    for (double b : {-phi, phi}) {
      v.push_back({0.0, a, b});
      v.push_back({a, b, 0.0});
      v.push_back({b, 0.0, a});
    }
  for (auto& x : v) {
    const double n = norm2(x);
    for (double& c : x) c /= n;
  }
  return v;
}

// Known-good layouts: pentagon in the plane, icosahedron in space, a spherical
// code above.
std::optional<BallState> warm_start(const Space& space, double rmax, const SearchConfig& config,
                                    std::mt19937_64& rng) {
  if (!space.is_euclidean_l2() || space.dim() < 2) return std::nullopt;
  BallState s;
  auto place = [&](const std::vector<Vec>& dirs, double rho) {
    for (const auto& d : dirs) {
      Vec t = d;
      for (double& x : t) x *= rho * rmax;
      s.tangents.push_back(std::move(t));
      s.radii.push_back(rmax);
    }
  };
  if (space.dim() == 2) {
    std::vector<Vec> dirs;
    for (int k = 0; k < 5; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 5.0;
      dirs.push_back({std::cos(a), std::sin(a)});
    }
    place(dirs, 0.95);
  } else if (space.dim() == 3) {
    place(icosahedron_directions(), 0.98);
  } else {
    const double rho = 0.99;
    place(spherical_code(space.dim(), 1.0 / rho, std::max<int64_t>(1, config.budget / 4), rng, config), rho);
  }
  return s;
}

SearchResult anneal_balls(const BallAnnealer& annealer, const SearchConfig& config, bool growth,
                          size_t fixed_size) {
  validate_config(config);
  SearchResult out;
  out.best.space = annealer.space();
  const int64_t budget = per_restart_budget(config);
  for (int restart = 0; restart < config.restarts; ++restart) {
    std::mt19937_64 rng(restart_seed(config.seed, restart));
    BallState start;
    if (restart == 0) {
      if (auto w = warm_start(annealer.space(), annealer.rmax(), config, rng)) start = std::move(*w);
    }
    if (growth) {
      if (start.radii.empty()) start = annealer.random_state(1, rng);
    } else {
      while (start.radii.size() > fixed_size) {
        start.radii.pop_back();
        start.tangents.pop_back();
      }
      BallState extra = annealer.random_state(fixed_size - start.radii.size(), rng);
      start.tangents.insert(start.tangents.end(), extra.tangents.begin(), extra.tangents.end());
      start.radii.insert(start.radii.end(), extra.radii.begin(), extra.radii.end());
    }
    BallFamily found = annealer.run(std::move(start), growth, budget, rng);
    out.trace.push_back(found.size());
    if (found.size() > out.best.size()) out.best = std::move(found);
  }
  out.score = out.best.size();
  out.feasible = growth ? out.score > 0 : out.score == fixed_size;
  return out;
}

// ---- CIP helpers ---------------------------------------------------------------

bool in_shrunk(const BallFamily& f, const std::vector<size_t>& idx, const Point& w, double s) {
  return std::all_of(idx.begin(), idx.end(), [&](size_t i) {
    return within(distance(f.space, w, f.balls[i].center), s * f.balls[i].radius);
  });
}

// Indices of shrunk balls holding w.
std::vector<size_t> shrunk_depth(const BallFamily& f, const Point& w, double s) {
  std::vector<size_t> idx;
  for (size_t i = 0; i < f.size(); ++i) {
    if (within(distance(f.space, w, f.balls[i].center), s * f.balls[i].radius)) idx.push_back(i);
  }
  return idx;
}

std::optional<CipResult> sector_route(const BallFamily& f, const Point& y, int m, double s) {
  const size_t need = static_cast<size_t>(m) + 1;
  std::vector<double> angles;
  for (const auto& b : f.balls) {
    const double dx = b.center.coords[0] - y.coords[0], dy = b.center.coords[1] - y.coords[1];
    if (dx == 0.0 && dy == 0.0) continue;
    const double a = std::atan2(dy, dx);
    angles.push_back(a);
    // Ends of the half-plane arc of directions entering the ball.
    angles.push_back(a - std::numbers::pi / 2);
    angles.push_back(a + std::numbers::pi / 2);
  }
  for (double& a : angles) a = std::remainder(a, 2.0 * std::numbers::pi);
  std::sort(angles.begin(), angles.end());
  std::vector<double> dirs = angles;
  for (size_t k = 0; k < angles.size(); ++k) {
    const double next = k + 1 < angles.size() ? angles[k + 1] : angles.front() + 2.0 * std::numbers::pi;
    dirs.push_back(0.5 * (angles[k] + next));
  }
  for (int k = 0; k < 720; ++k) dirs.push_back(2.0 * std::numbers::pi * k / 720.0);

  struct Event {
    double t;
    int delta;
    size_t ball;
  };
  std::vector<Event> events;
  for (double a : dirs) {
    const double ux = std::cos(a), uy = std::sin(a);
    events.clear();
    for (size_t i = 0; i < f.size(); ++i) {
      const double wx = y.coords[0] - f.balls[i].center.coords[0];
      const double wy = y.coords[1] - f.balls[i].center.coords[1];
      const double sr = s * f.balls[i].radius;
      const double bq = ux * wx + uy * wy;
      const double disc = bq * bq - (wx * wx + wy * wy - sr * sr);
      if (disc < 0.0) continue;
      const double root = std::sqrt(disc);
      const double t1 = std::max(0.0, -bq - root), t2 = -bq + root;
      if (t2 < t1) continue;
      events.push_back({t1, +1, i});
      events.push_back({t2, -1, i});
    }
    std::sort(events.begin(), events.end(), [](const Event& p, const Event& q) {
      return p.t < q.t || (p.t == q.t && p.delta > q.delta);
    });
    std::vector<size_t> active;
    for (size_t e = 0; e < events.size(); ++e) {
      if (events[e].delta > 0) {
        active.push_back(events[e].ball);
      } else {
        active.erase(std::find(active.begin(), active.end(), events[e].ball));
        continue;
      }
      if (active.size() < need) continue;
      const double t_hi = e + 1 < events.size() ? events[e + 1].t : events[e].t;
      const double t = 0.5 * (events[e].t + t_hi);
      Point w{{y.coords[0] + t * ux, y.coords[1] + t * uy}};
      std::vector<size_t> idx(active.begin(), active.end());
      std::sort(idx.begin(), idx.end());
      idx.resize(need);
      if (in_shrunk(f, idx, w, s)) return CipResult{true, idx, w, "sector"};
    }
  }
  return std::nullopt;
}

std::optional<CipResult> grid_route(const BallFamily& f, const Point& y, int m, double s) {
  const size_t need = static_cast<size_t>(m) + 1;
  const Space& space = f.space;
  double rmax = 0.0;
  for (const auto& b : f.balls) rmax = std::max(rmax, b.radius);
  std::vector<Point> candidates{y};
  for (const auto& b : f.balls) candidates.push_back(b.center);
  if (space.kind() == SpaceKind::euclidean && space.dim() == 2) {
    for (int a = -20; a <= 20; ++a)
      for (int b = -20; b <= 20; ++b)
        candidates.push_back(Point{{y.coords[0] + rmax * a / 20.0, y.coords[1] + rmax * b / 20.0}});
  } else {
    std::mt19937_64 rng(0xc1bULL);
    const double reach = std::min(rmax, 0.95 * injectivity_radius(space));
    for (int k = 0; k < 4000; ++k) candidates.push_back(random_point_in_ball(space, Ball{y, reach}, rng));
  }
  std::vector<std::pair<size_t, size_t>> ranked;  // (depth, candidate)
  for (size_t c = 0; c < candidates.size(); ++c) {
    std::vector<size_t> idx = shrunk_depth(f, candidates[c], s);
    if (idx.size() >= need) {
      idx.resize(need);
      if (in_shrunk(f, idx, candidates[c], s)) return CipResult{true, idx, candidates[c], "grid"};
    }
    ranked.push_back({idx.size(), c});
  }
  // Refine the deepest candidates by cyclic projection onto the m + 1 nearest
  // shrunk balls.
  std::sort(ranked.begin(), ranked.end(), [](auto a, auto b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  for (size_t r = 0; r < std::min<size_t>(20, ranked.size()); ++r) {
    Point p = candidates[ranked[r].second];
    std::vector<size_t> order(f.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      const double va = distance(space, p, f.balls[a].center) - s * f.balls[a].radius;
      const double vb = distance(space, p, f.balls[b].center) - s * f.balls[b].radius;
      return va < vb || (va == vb && a < b);
    });
    std::vector<size_t> idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(need));
    for (int sweep = 0; sweep < 2000; ++sweep) {
      double moved = 0.0;
      for (size_t i : idx) {
        const double d = distance(space, p, f.balls[i].center);
        const double sr = s * f.balls[i].radius;
        if (d > sr) {
          try {
            p = geodesic_interpolate(space, p, f.balls[i].center, (d - sr) / d);
          } catch (const DomainError&) {
            break;
          }
          moved = std::max(moved, d - sr);
        }
      }
      if (moved <= 1e-12) break;
    }
    std::sort(idx.begin(), idx.end());
    if (in_shrunk(f, idx, p, s)) return CipResult{true, idx, p, "grid"};
  }
  return std::nullopt;
}

// ---- constants -----------------------------------------------------------------

struct ReferenceEntry {
  std::optional<int64_t> low, high;
};

ReferenceEntry reference_entry(const std::string& name, int dim) {
  auto exact = [](int64_t v) { return ReferenceEntry{v, v}; };
  auto range = [](int64_t a, int64_t b) { return ReferenceEntry{a, b}; };
  const int d = dim - 1;
  if (name == "w" || name == "Hstar") {
    static const int64_t v[] = {2, 5, 12, 24};
    return exact(v[d]);
  }
  if (name == "K") {
    if (dim == 1) return exact(2);
    if (dim == 2) return range(8, 11);
    return {};
  }
  if (name == "alpha") {
    static const ReferenceEntry v[] = {{2, 2}, {8, 19}, {12, 87}, {24, 331}};
    return v[d];
  }
  static const ReferenceEntry v[] = {{5, 5}, {19, 19}, {67, 87}, {226, 331}};
  return v[d];
}

int64_t power_of_five(int dim) {
  int64_t v = 1;
  for (int k = 0; k < dim; ++k) v *= 5;
  return v;
}

void check_chain(const std::vector<std::optional<int64_t>>& values, int64_t cap, const std::string& what) {
  std::optional<int64_t> prev;
  for (const auto& v : values) {
    if (!v) continue;
    if (prev && *v < *prev) throw std::logic_error("chain w <= K <= alpha <= beta fails on " + what);
    prev = v;
  }
  if (prev && *prev > cap) throw std::logic_error("chain bound 5^n fails on " + what);
}

}  // namespace

void validate_config(const SearchConfig& config) {
  if (config.budget < 1) throw InputError("search budget must be >= 1");
  if (config.restarts < 1) throw InputError("search restarts must be >= 1");
  if (!(config.decay > 0.0 && config.decay < 1.0)) throw InputError("temperature decay must lie in (0, 1)");
  if (!(config.initial_temperature > 0.0) || !std::isfinite(config.initial_temperature)) {
    throw InputError("initial temperature must be positive");
  }
  if (!(config.step > 0.0) || !std::isfinite(config.step)) throw InputError("perturbation scale must be positive");
}

uint64_t restart_seed(uint64_t seed, int restart) {
  return splitmix64(seed ^ splitmix64(static_cast<uint64_t>(restart) + 1));
}

SearchResult search_max_besicovitch_family(const Space& space, double rmin, double rmax, const SearchConfig& config) {
  check_radii(space, rmin, rmax);
  BallAnnealer annealer(space, rmin, rmax, PairRule::besicovitch, config);
  return anneal_balls(annealer, config, true, 0);
}

SearchResult search_besicovitch_of_size(const Space& space, size_t size, double rmin, double rmax,
                                        const SearchConfig& config) {
  check_radii(space, rmin, rmax);
  if (size < 1) throw InputError("family size must be >= 1");
  BallAnnealer annealer(space, rmin, rmax, PairRule::besicovitch, config);
  return anneal_balls(annealer, config, false, size);
}

SearchResult search_max_k_configuration(const Space& space, double rmin, double rmax, const SearchConfig& config) {
  check_radii(space, rmin, rmax);
  BallAnnealer annealer(space, rmin, rmax, PairRule::k_configuration, config);
  return anneal_balls(annealer, config, true, 0);
}

BallFamily construct_strict_hadwiger(int dim) {
  if (dim < 1) throw InputError("dimension must be >= 1");
  if (dim > 3) throw UnsupportedFeature("explicit strict Hadwiger layouts exist for dim 1-3 only");
  BallFamily f{Space::euclidean(dim), {}, {}};
  if (dim == 1) {
    f.balls = {Ball{Point{{-2.0}}, 1.0}, Ball{Point{{2.0}}, 1.0}};
  } else if (dim == 2) {
    for (int k = 0; k < 5; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 5.0;
      f.balls.push_back(Ball{Point{{2.0 * std::cos(a), 2.0 * std::sin(a)}}, 1.0});
    }
  } else {
    for (Vec d : icosahedron_directions()) {
      for (double& x : d) x *= 2.0;
      f.balls.push_back(Ball{Point{d}, 1.0});
    }
  }
  const Verdict v = check_strict_hadwiger(f);
  if (!v.is_valid()) throw std::logic_error("strict Hadwiger layout failed its check: " + v.reason);
  return f;
}

Verdict check_strict_hadwiger(const BallFamily& family) {
  Verdict v;
  if (!family.space.is_euclidean_l2()) {
    v.status = VerdictStatus::invalid;
    v.reason = "strict Hadwiger layouts live in Euclidean l2 space";
    return v;
  }
  const Point o = origin(family.space);
  for (size_t i = 0; i < family.size(); ++i) {
    const Ball& b = family.balls[i];
    if (b.radius != 1.0 || !(std::fabs(distance(family.space, o, b.center) - 2.0) < 1e-12)) {
      v.status = VerdictStatus::invalid;
      v.reason = "ball " + std::to_string(i) + " is not a unit ball touching B(0,1)";
      v.indices = {i};
      return v;
    }
  }
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = i + 1; j < family.size(); ++j) {
      if (!strictly_beyond(distance(family.space, family.balls[i].center, family.balls[j].center), 2.0)) {
        v.status = VerdictStatus::invalid;
        v.reason = "balls " + std::to_string(i) + " and " + std::to_string(j) + " are not strictly disjoint";
        v.indices = {i, j};
        return v;
      }
    }
  return v;
}

SearchResult search_strict_hadwiger(int dim, const SearchConfig& config) {
  validate_config(config);
  if (dim < 1) throw InputError("dimension must be >= 1");
  SearchResult out;
  out.best.space = Space::euclidean(dim);
  const int64_t budget = per_restart_budget(config);
  for (int restart = 0; restart < config.restarts; ++restart) {
    std::mt19937_64 rng(restart_seed(config.seed, restart));
    BallFamily f{Space::euclidean(dim), {}, {}};
    if (dim == 1) {
      f = construct_strict_hadwiger(1);
    } else {
      for (Vec u : spherical_code(dim, 1.0, budget, rng, config)) {
        const double n = norm2(u);
        for (double& x : u) x *= 2.0 / n;
        f.balls.push_back(Ball{Point{u}, 1.0});
      }
      // Drop any ball whose rounded center misses tangency.
      while (!check_strict_hadwiger(f).is_valid()) {
        const Verdict v = check_strict_hadwiger(f);
        f.balls.erase(f.balls.begin() + static_cast<std::ptrdiff_t>(v.indices.back()));
      }
    }
    out.trace.push_back(f.size());
    if (f.size() > out.best.size()) out.best = std::move(f);
  }
  out.score = out.best.size();
  out.feasible = check_strict_hadwiger(out.best).is_valid();
  return out;
}

Verdict check_radius5_packing(const BallFamily& family) {
  Verdict v;
  const Space& space = family.space;
  auto fail = [&](std::string reason, std::vector<size_t> idx) {
    v.status = VerdictStatus::invalid;
    v.reason = std::move(reason);
    v.indices = std::move(idx);
    return v;
  };
  if (!space.is_euclidean_l2()) return fail("packings live in Euclidean l2 space", {});
  const Point o = origin(space);
  bool pinned = false;
  for (size_t i = 0; i < family.size(); ++i) {
    const Ball& b = family.balls[i];
    if (b.radius != 1.0) return fail("ball " + std::to_string(i) + " is not a unit ball", {i});
    if (!(distance(space, o, b.center) <= 4.0)) return fail("center " + std::to_string(i) + " lies outside B(0,4)", {i});
    pinned |= b.center == o;
  }
  if (!pinned) return fail("no center at the origin", {});
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = i + 1; j < family.size(); ++j) {
      const double d = distance(space, family.balls[i].center, family.balls[j].center);
      if (d + tolerance().slack(2.0) < 2.0) {
        return fail("open balls " + std::to_string(i) + " and " + std::to_string(j) + " overlap", {i, j});
      }
    }
  return v;
}

SearchResult pack_unit_balls_radius5(int dim, const SearchConfig& config) {
  validate_config(config);
  if (dim < 1) throw InputError("dimension must be >= 1");
  SearchResult out;
  const Space space = Space::euclidean(dim);
  out.best.space = space;
  std::vector<Vec> centers;
  if (dim == 1) {
    centers = {{0.0}, {-2.0}, {2.0}, {-4.0}, {4.0}};
  } else if (dim == 2) {
    // Origin, a ring of 6 at radius 2 and a ring of 12 at radius 3.95.
    centers.push_back({0.0, 0.0});
    for (int k = 0; k < 6; ++k) {
      const double a = std::numbers::pi / 12.0 + std::numbers::pi / 3.0 * k;
      centers.push_back({2.0 * std::cos(a), 2.0 * std::sin(a)});
    }
    for (int k = 0; k < 12; ++k) {
      const double a = std::numbers::pi / 6.0 * k;
      centers.push_back({3.95 * std::cos(a), 3.95 * std::sin(a)});
    }
  } else {
    // Checkerboard lattice D_n at minimum distance 2, shrunk by 1e-10 so the
    // radius-4 shell stays inside B(0,4) exactly.
    const double scale = std::sqrt(2.0) * (1.0 - 1e-10);
    Vec z(dim, 0.0);
    std::function<void(int, int, int)> walk = [&](int k, int norm, int parity) {
      if (norm > 8) return;
      if (k == dim) {
        if (parity % 2 != 0) return;
        Vec c(dim);
        for (int q = 0; q < dim; ++q) c[q] = scale * z[q];
        if (norm2(c) <= 4.0) centers.push_back(std::move(c));
        return;
      }
      for (int v = -2; v <= 2; ++v) {
        z[k] = v;
        walk(k + 1, norm + v * v, parity + (v < 0 ? -v : v));
      }
      z[k] = 0;
    };
    walk(0, 0, 0);
    // Random insertions into the remaining room.
    std::mt19937_64 rng(restart_seed(config.seed, 0));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int64_t it = 0; it < config.budget; ++it) {
      Vec c = random_direction(dim, rng);
      const double rho = 4.0 * std::pow(unif(rng), 1.0 / dim);
      for (double& x : c) x *= rho;
      if (!(norm2(c) <= 4.0)) continue;
      const bool room = std::all_of(centers.begin(), centers.end(), [&](const Vec& e) {
        double s = 0.0;
        for (int q = 0; q < dim; ++q) s += (c[q] - e[q]) * (c[q] - e[q]);
        return std::sqrt(s) >= 2.0;
      });
      if (room) centers.push_back(std::move(c));
    }
  }
  for (auto& c : centers) out.best.balls.push_back(Ball{Point{c}, 1.0});
  out.score = out.best.size();
  out.trace = {out.score};
  out.feasible = check_radius5_packing(out.best).is_valid();
  if (!out.feasible) throw std::logic_error("radius-5 packing failed its check");
  if (static_cast<int64_t>(out.score) > power_of_five(dim)) throw std::logic_error("packing exceeds 5^n");
  return out;
}

CipResult cip_check(const BallFamily& family, int m, double s) {
  validate_family(family);
  if (m < 1) throw InputError("m must be >= 1");
  if (!(s > 0.0 && s < 1.0)) throw InputError("shrink factor s must lie in (0, 1)");
  if (family.size() < static_cast<size_t>(2 * m + 1)) throw InputError("the family needs at least 2m + 1 balls");
  const CommonPointResult cp = find_common_point(family);
  if (cp.status != CommonPointStatus::found) throw PreconditionError("the balls have no verified common point");
  const Point& y = *cp.point;
  if (family.space.is_euclidean_l2() && family.space.dim() == 2) {
    if (auto r = sector_route(family, y, m, s)) return *r;
  }
  if (auto r = grid_route(family, y, m, s)) return *r;
  return CipResult{};
}

std::vector<double> shrink_grid() {
  std::vector<double> g;
  for (int k = 10; k <= 19; ++k) g.push_back(k / 20.0);
  g.push_back(0.99);
  return g;
}

std::optional<double> cip_largest_shrink(const BallFamily& family, int m) {
  const std::vector<double> g = shrink_grid();
  for (auto it = g.rbegin(); it != g.rend(); ++it) {
    if (cip_check(family, m, *it).found) return *it;
  }
  return std::nullopt;
}

BallFamily random_cip_family(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  BallFamily f{Space::euclidean(2), {}, {}};
  for (int i = 0; i < 2 * m + 1; ++i) {
    const double r = 0.9 + 0.1 * unif(rng);
    const double a = 2.0 * std::numbers::pi * unif(rng);
    const double rho = unif(rng) < 0.5 ? r : r * std::sqrt(unif(rng));
    f.balls.push_back(Ball{Point{{rho * std::cos(a), rho * std::sin(a)}}, r});
  }
  return f;
}

CipTrialStats cip_monte_carlo(int m, double s, int trials, uint64_t seed) {
  if (trials < 1) throw InputError("trials must be >= 1");
  CipTrialStats st;
  st.m = m;
  st.s = s;
  st.trials = trials;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const BallFamily f = random_cip_family(m, rng);
    const CipResult r = cip_check(f, m, s);
    if (!r.found) continue;
    ++st.found;
    st.sector_route += r.route == "sector";
    if (r.indices.size() == static_cast<size_t>(m + 1) && in_shrunk(f, r.indices, *r.witness, s)) ++st.verified;
  }
  return st;
}

SearchResult satellite_max_search(const Space& space, double tau, double lambda, const SearchConfig& config) {
  validate_config(config);
  if (!(tau > 1.0 && tau <= 2.0)) throw InputError("tau must lie in (1, 2]");
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw InputError("lambda must be a finite value >= 1");
  const double inj = injectivity_radius(space);
  const double rmin = 0.1;
  const double rmax = std::min(1.0, inj / 8.0);
  const double reach = std::min(4.0, 0.9 * inj);
  const Point y = origin(space);
  const int dim = space.dim();
  auto anchor_of = [&](const Vec& t) {
    if (space.kind() == SpaceKind::euclidean) return Point{t};
    return exp_map(space, Tangent{y, tangent_at_origin(space, t)});
  };
  auto length = [&](const Vec& t) { return space.kind() == SpaceKind::euclidean ? tangent_norm(space, t) : norm2(t); };

  struct State {
    std::vector<Vec> t;
    std::vector<double> r;
  };
  // Lambda-free energy on the inner balls (diameter 2r), so the trajectory is
  // the same for every lambda.
  auto energy_of = [&](const State& s, const std::vector<Point>& a) {
    const size_t k = s.r.size();
    double e = 0.0;
    for (size_t i = 0; i < k; ++i)
      for (size_t j = i + 1; j < k; ++j) {
        e += std::max(0.0, (1.0 + kMargin) * s.r[i] - distance(space, a[j], a[i]));
        e += std::max(0.0, 2.0 * s.r[j] - (1.0 - kMargin) * tau * 2.0 * s.r[i]);
      }
    double central = kInfinity;
    for (size_t c = 0; c < k; ++c) {
      double ec = 0.0;
      for (size_t i = 0; i < k; ++i) {
        if (i == c) continue;
        ec += std::max(0.0, distance(space, a[c], a[i]) - (1.0 - kMargin) * (s.r[c] + s.r[i]));
        ec += std::max(0.0, 2.0 * s.r[c] - (1.0 - kMargin) * tau * 2.0 * s.r[i]);
      }
      central = std::min(central, ec);
    }
    return e + (k == 0 ? 0.0 : central);
  };
  auto sets_of = [&](const State& s, const std::vector<Point>& a) {
    std::vector<QuasiRoundSet> sets;
    for (size_t i = 0; i < s.r.size(); ++i) sets.push_back(QuasiRoundSet{a[i], s.r[i], lambda, 2.0 * s.r[i]});
    return sets;
  };

  SearchResult out;
  out.best.space = space;
  const int64_t budget = per_restart_budget(config);
  for (int restart = 0; restart < config.restarts; ++restart) {
    std::mt19937_64 rng(restart_seed(config.seed, restart));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_set = [&](Vec& t, double& r) {
      r = rmin + (rmax - rmin) * unif(rng);
      t = random_direction(dim, rng);
      const double len = length(t);
      const double target = reach * unif(rng);
      for (double& x : t) x *= target / len;
    };
    State s;
    Vec t0;
    double r0;
    random_set(t0, r0);
    s.t.push_back(t0);
    s.r.push_back(r0);
    std::vector<Point> anchors{anchor_of(t0)};
    double energy = energy_of(s, anchors);
    size_t restart_best = 0;
    SearchResult local;
    auto visit = [&]() {
      const auto sets = sets_of(s, anchors);
      if (sets.size() <= restart_best) return;
      const Verdict v = is_tau_satellite_configuration(space, sets, anchors, tau);
      if (!v.is_valid()) return;
      restart_best = sets.size();
      local.sets = sets;
      local.points = anchors;
      local.central_index = v.central_index;
    };
    visit();
    double temperature = config.initial_temperature;
    for (int64_t it = 0; it < budget; ++it) {
      if (energy == 0.0 && s.r.size() < kMaxGrowth) {
        Vec t;
        double r;
        random_set(t, r);
        s.t.push_back(t);
        s.r.push_back(r);
        anchors.push_back(anchor_of(t));
        energy = energy_of(s, anchors);
        temperature = config.initial_temperature;
        visit();
        continue;
      }
      const size_t k = s.r.size();
      const size_t i = std::uniform_int_distribution<size_t>(0, k - 1)(rng);
      State next = s;
      const double u = unif(rng);
      if (u < 0.02) {
        random_set(next.t[i], next.r[i]);
      } else if (u < 0.72) {
        for (double& x : next.t[i]) x += config.step * next.r[i] * gauss(rng);
        const double len = length(next.t[i]);
        if (len > reach) {
          for (double& x : next.t[i]) x *= reach / len;
        }
      } else {
        next.r[i] = std::clamp(next.r[i] * std::exp(0.5 * config.step * gauss(rng)), rmin, rmax);
      }
      std::vector<Point> next_anchors = anchors;
      next_anchors[i] = anchor_of(next.t[i]);
      const double e = energy_of(next, next_anchors);
      if (e <= energy || unif(rng) < std::exp(-(e - energy) / std::max(temperature, 1e-300))) {
        s = std::move(next);
        anchors = std::move(next_anchors);
        energy = e;
        visit();
      }
      temperature *= config.decay;
    }
    out.trace.push_back(restart_best);
    if (restart_best > out.score) {
      out.score = restart_best;
      out.sets = local.sets;
      out.points = local.points;
      out.central_index = local.central_index;
    }
  }
  out.best.balls.clear();
  for (const auto& set : out.sets) out.best.balls.push_back(set.inner());
  out.feasible = out.score > 0;
  return out;
}

std::string reference_value_text(const ConstantsRow& row) {
  if (!row.reference_low) return "n/a";
  if (*row.reference_low == *row.reference_high) return std::to_string(*row.reference_low);
  return "[" + std::to_string(*row.reference_low) + "," + std::to_string(*row.reference_high) + "]";
}

std::vector<ConstantsRow> constants_report(const std::vector<int>& dims, const SearchConfig& config) {
  validate_config(config);
  for (int d : dims) {
    if (d < 1 || d > 4) throw InputError("constants are tabulated for dims 1-4 only");
  }
  std::vector<ConstantsRow> rows;
  for (int dim : dims) {
    const Space space = Space::euclidean(dim);
    const SearchResult w = search_max_besicovitch_family(space, 0.5, 1.0, config);
    int64_t hstar = 0;
    std::string hstar_method;
    if (dim <= 3) {
      hstar = static_cast<int64_t>(construct_strict_hadwiger(dim).size());
      hstar_method = "explicit layout, tangency and strict disjointness verified";
    } else {
      hstar = static_cast<int64_t>(search_strict_hadwiger(dim, config).score);
      hstar_method = "annealed spherical code, verified";
    }
    const SearchResult k = search_max_k_configuration(space, 0.5, 1.0, config);
    const int64_t w_achieved = static_cast<int64_t>(w.score);
    const int64_t k_achieved = std::max<int64_t>(static_cast<int64_t>(k.score), w_achieved);
    const SearchResult beta = pack_unit_balls_radius5(dim, config);

    auto row = [&](const std::string& name, int64_t achieved, std::string method) {
      const ReferenceEntry p = reference_entry(name, dim);
      ConstantsRow r{name, dim, p.low, p.high, achieved, std::move(method)};
      if (r.reference_high && r.achieved > *r.reference_high) {
        throw std::logic_error("achieved " + name + " exceeds the reference upper end");
      }
      rows.push_back(r);
    };
    row("w", w_achieved, "annealed Besicovitch family, validated");
    row("Hstar", hstar, hstar_method);
    row("K", k_achieved, "max of annealed K-configuration and w");
    row("alpha", k_achieved, "bounded below by K");
    row("beta", static_cast<int64_t>(beta.score), dim <= 2 ? "explicit layout, verified" : "lattice layout plus insertions, verified");

    const size_t first = rows.size() - 5;
    std::vector<std::optional<int64_t>> lows, highs, achieved;
    for (size_t i = first; i < rows.size(); ++i) {
      if (rows[i].name == "Hstar") continue;
      lows.push_back(rows[i].reference_low);
      highs.push_back(rows[i].reference_high);
      achieved.push_back(rows[i].achieved);
    }
    check_chain(lows, power_of_five(dim), "reference lower ends");
    check_chain(highs, power_of_five(dim), "reference upper ends");
    check_chain(achieved, power_of_five(dim), "achieved values");
  }
  return rows;
}

}  // namespace besicover
