#include "besicover/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "besicover/errors.hpp"
#include "besicover/tolerance.hpp"

namespace besicover {

namespace {

bool is_euclidean_1d(const Space& space) {
  return space.kind() == SpaceKind::euclidean && space.dim() == 1;
}

double max_radius(const BallFamily& family) {
  double r = 0.0;
  for (const auto& b : family.balls) r = std::max(r, b.radius);
  return r;
}

double max_violation(const BallFamily& family, const Point& p) {
  double worst = -kInfinity;
  for (const auto& b : family.balls) {
    worst = std::max(worst, distance(family.space, p, b.center) - b.radius);
  }
  return worst;
}

bool in_all(const BallFamily& family, const Point& p) {
  return std::all_of(family.balls.begin(), family.balls.end(),
                     [&](const Ball& b) { return ball_contains(family.space, b, p); });
}

size_t smallest_ball(const BallFamily& family) {
  size_t k = 0;
  for (size_t i = 1; i < family.size(); ++i) {
    if (family.balls[i].radius < family.balls[k].radius) k = i;
  }
  return k;
}

// ---- Euclidean minimax machinery ------------------------------------------

// Subgradient of the l^p norm at d with dual norm 1 (0 at d = 0).
Vec norm_subgradient(std::span<const double> d, double p) {
  Vec w(d.size(), 0.0);
  if (p == 1.0) {
    for (size_t k = 0; k < d.size(); ++k) w[k] = d[k] > 0 ? 1.0 : (d[k] < 0 ? -1.0 : 0.0);
    return w;
  }
  double m = 0.0;
  for (double x : d) m = std::max(m, std::fabs(x));
  if (m == 0.0) return w;
  double s = 0.0;
  for (double x : d) s += std::pow(std::fabs(x) / m, p);
  const double norm = m * std::pow(s, 1.0 / p);
  for (size_t k = 0; k < d.size(); ++k) {
    const double a = std::fabs(d[k]) / norm;
    w[k] = std::copysign(std::pow(a, p - 1.0), d[k]);
  }
  return w;
}

double dual_norm(std::span<const double> v, double p) {
  if (p == 1.0) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  const double q = p / (p - 1.0);
  if (q == 2.0) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x) / m, q);
  return m * std::pow(s, 1.0 / q);
}

struct Smoothed {
  double value;
  Vec grad;
  Vec weights;
};

// mu log sum exp(g_i / mu), with its gradient and softmax weights.
Smoothed smoothed_max(const BallFamily& family, const Point& p, double mu) {
  const size_t n = family.size();
  const size_t dim = p.coords.size();
  std::vector<double> g(n);
  std::vector<Vec> w(n);
  double gmax = -kInfinity;
  for (size_t i = 0; i < n; ++i) {
    Vec d(dim);
    for (size_t k = 0; k < dim; ++k) d[k] = p.coords[k] - family.balls[i].center.coords[k];
    g[i] = distance(family.space, p, family.balls[i].center) - family.balls[i].radius;
    w[i] = norm_subgradient(d, family.space.pnorm());
    gmax = std::max(gmax, g[i]);
  }
  Smoothed out{0.0, Vec(dim, 0.0), Vec(n)};
  double z = 0.0;
  for (size_t i = 0; i < n; ++i) {
    out.weights[i] = std::exp((g[i] - gmax) / mu);
    z += out.weights[i];
  }
  for (size_t i = 0; i < n; ++i) {
    out.weights[i] /= z;
    for (size_t k = 0; k < dim; ++k) out.grad[k] += out.weights[i] * w[i][k];
  }
  out.value = gmax + mu * std::log(z);
  return out;
}

Point minimize_max_violation(const BallFamily& family, Point p, double scale) {
  const size_t dim = p.coords.size();
  Point best = p;
  double best_f = max_violation(family, p);
  if (best_f <= 0.0) return best;
  double step = 0.1 * scale;
  for (double mu = 0.1 * scale; mu >= 1e-11 * scale; mu *= 0.1) {
    for (int iter = 0; iter < 400; ++iter) {
      Smoothed s = smoothed_max(family, p, mu);
      double gn = 0.0;
      for (double x : s.grad) gn += x * x;
      if (gn < 1e-30) break;
      bool moved = false;
      while (step > 1e-16 * scale) {
        Point q = p;
        for (size_t k = 0; k < dim; ++k) q.coords[k] -= step * s.grad[k];
        const double fq = smoothed_max(family, q, mu).value;
        if (fq <= s.value - 1e-4 * step * gn) {
          p = std::move(q);
          step *= 2.0;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      const double f = max_violation(family, p);
      if (f < best_f) {
        best_f = f;
        best = p;
      }
      if (best_f <= 0.0) return best;
    }
    step = std::max(step, mu);
  }
  return best;
}

// Lower bound on min_q max_i g_i(q) from weights lambda on the simplex:
// sum lambda_i g_i(p) - rho * ||sum lambda_i w_i||_*, rho bounding |q - p| on
// the intersection.
double dual_lower_bound(const std::vector<double>& g, const std::vector<Vec>& w,
                        const std::vector<double>& lambda, double rho, double p) {
  const size_t dim = w.empty() ? 0 : w[0].size();
  Vec s(dim, 0.0);
  double avg = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    avg += lambda[i] * g[i];
    for (size_t k = 0; k < dim; ++k) s[k] += lambda[i] * w[i][k];
  }
  return avg - rho * dual_norm(s, p);
}

// Minimum-norm point of conv{w_i : i in active} by Frank-Wolfe.
std::vector<double> min_norm_weights(const std::vector<Vec>& w, const std::vector<size_t>& active) {
  const size_t n = w.size();
  const size_t dim = w.empty() ? 0 : w[0].size();
  std::vector<double> lambda(n, 0.0);
  for (size_t i : active) lambda[i] = 1.0 / active.size();
  for (int iter = 0; iter < 2000; ++iter) {
    Vec s(dim, 0.0);
    for (size_t i : active)
      for (size_t k = 0; k < dim; ++k) s[k] += lambda[i] * w[i][k];
    size_t j = active.front();
    double best = kInfinity;
    for (size_t i : active) {
      double ip = 0.0;
      for (size_t k = 0; k < dim; ++k) ip += w[i][k] * s[k];
      if (ip < best) {
        best = ip;
        j = i;
      }
    }
    double ss = 0.0, num = 0.0, den = 0.0;
    for (size_t k = 0; k < dim; ++k) {
      ss += s[k] * s[k];
      const double diff = s[k] - w[j][k];
      num += diff * s[k];
      den += diff * diff;
    }
    if (num <= 1e-18 * std::max(ss, 1e-300) || den == 0.0) break;
    const double gamma = std::clamp(num / den, 0.0, 1.0);
    for (size_t i : active) lambda[i] *= (1.0 - gamma);
    lambda[j] += gamma;
  }
  return lambda;
}

std::optional<double> certify_empty(const BallFamily& family, const Point& p, double scale) {
  const size_t n = family.size();
  const size_t dim = p.coords.size();
  const double pn = family.space.pnorm();
  std::vector<double> g(n);
  std::vector<Vec> w(n);
  double rho = kInfinity;
  for (size_t i = 0; i < n; ++i) {
    const auto& b = family.balls[i];
    Vec d(dim);
    for (size_t k = 0; k < dim; ++k) d[k] = p.coords[k] - b.center.coords[k];
    const double dist = distance(family.space, p, b.center);
    g[i] = dist - b.radius;
    w[i] = norm_subgradient(d, pn);
    rho = std::min(rho, dist + b.radius);
  }
  const double fmax = *std::max_element(g.begin(), g.end());
  double best = -kInfinity;
  for (double delta : {0.0, 1e-9, 1e-6, 1e-3, 1e-1, 1.0}) {
    std::vector<size_t> active;
    for (size_t i = 0; i < n; ++i)
      if (g[i] >= fmax - delta * scale) active.push_back(i);
    best = std::max(best, dual_lower_bound(g, w, min_norm_weights(w, active), rho, pn));
  }
  Smoothed s = smoothed_max(family, p, 1e-6 * scale);
  best = std::max(best, dual_lower_bound(g, w, s.weights, rho, pn));
  // Rounding in the bound itself is far below the predicate slack.
  if (best > tolerance().slack(scale)) return best;
  return std::nullopt;
}

Point cyclic_projection_l2(const BallFamily& family, double scale) {
  Point p = family.balls[smallest_ball(family)].center;
  const size_t dim = p.coords.size();
  for (int sweep = 0; sweep < 10000; ++sweep) {
    double moved = 0.0;
    for (const auto& b : family.balls) {
      double d2 = 0.0;
      for (size_t k = 0; k < dim; ++k) {
        const double t = p.coords[k] - b.center.coords[k];
        d2 += t * t;
      }
      const double d = std::sqrt(d2);
      if (d > b.radius) {
        const double f = b.radius / d;
        for (size_t k = 0; k < dim; ++k) {
          p.coords[k] = b.center.coords[k] + (p.coords[k] - b.center.coords[k]) * f;
        }
        moved = std::max(moved, d - b.radius);
      }
    }
    if (moved <= 1e-10 * scale) break;
  }
  return p;
}

// Planar l2 only: the intersection of disks, when it is a single point or a
// thin lens, has a boundary crossing of two circles as a vertex.
std::optional<Point> planar_vertex_l2(const BallFamily& family) {
  const size_t n = family.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const auto& a = family.balls[i];
      const auto& b = family.balls[j];
      const double dx = b.center.coords[0] - a.center.coords[0];
      const double dy = b.center.coords[1] - a.center.coords[1];
      const double d = std::hypot(dx, dy);
      if (d == 0.0) continue;
      const double along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
      const double h = std::sqrt(std::max(0.0, a.radius * a.radius - along * along));
      const double mx = a.center.coords[0] + along * dx / d, my = a.center.coords[1] + along * dy / d;
      for (double sign : {1.0, -1.0}) {
        Point q{{mx - sign * h * dy / d, my + sign * h * dx / d}};
        if (in_all(family, q)) return q;
      }
    }
  }
  return std::nullopt;
}

Point grid_refine_curved(const BallFamily& family) {
  const Space& space = family.space;
  std::vector<Point> candidates;
  for (const auto& b : family.balls) candidates.push_back(b.center);
  for (size_t i = 0; i < family.size(); ++i) {
    for (size_t j = i + 1; j < family.size(); ++j) {
      const auto& a = family.balls[i];
      const auto& b = family.balls[j];
      const double rs = a.radius + b.radius;
      if (rs <= 0.0) continue;
      try {
        candidates.push_back(geodesic_interpolate(space, a.center, b.center, a.radius / rs));
      } catch (const DomainError&) {
      }
    }
  }
  std::mt19937_64 rng(0x5eedULL);
  const Ball& small = family.balls[smallest_ball(family)];
  for (int k = 0; k < 64; ++k) candidates.push_back(random_point_in_ball(space, small, rng));

  Point p = candidates.front();
  double best = kInfinity;
  for (const auto& c : candidates) {
    const double v = max_violation(family, c);
    if (v < best) {
      best = v;
      p = c;
    }
  }
  const double scale = std::max(1.0, max_radius(family));
  for (int sweep = 0; sweep < 10000; ++sweep) {
    double moved = 0.0;
    for (const auto& b : family.balls) {
      const double d = distance(space, p, b.center);
      if (d > b.radius) {
        try {
          p = geodesic_interpolate(space, p, b.center, (d - b.radius) / d);
        } catch (const DomainError&) {
          return p;
        }
        moved = std::max(moved, d - b.radius);
      }
    }
    if (moved <= 1e-10 * scale) break;
  }
  return p;
}

}  // namespace

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::valid: return "valid";
    case VerdictStatus::invalid: return "invalid";
    case VerdictStatus::indeterminate: return "indeterminate";
  }
  return "unknown";
}

void validate_family(const BallFamily& family) {
  if (!family.labels.empty() && family.labels.size() != family.balls.size()) {
    throw InputError("labels must be empty or one per ball");
  }
  for (size_t i = 0; i < family.balls.size(); ++i) {
    try {
      validate_ball(family.space, family.balls[i]);
    } catch (const InputError& e) {
      throw InputError("ball " + std::to_string(i) + ": " + e.what());
    }
  }
}

void validate_quasi_round(const Space& space, const QuasiRoundSet& set) {
  validate_point(space, set.anchor);
  if (!(set.inner_radius > 0.0) || !std::isfinite(set.inner_radius)) {
    throw InputError("quasi-round set needs a positive inner radius");
  }
  if (!(set.lambda >= 1.0) || !std::isfinite(set.lambda)) throw InputError("quasi-round lambda must be >= 1");
  if (!(set.diameter >= set.inner_radius) || !(set.diameter <= 2.0 * set.lambda * set.inner_radius)) {
    throw InputError("quasi-round diameter must lie in [r, 2 lambda r]");
  }
}

bool ball_contains(const Space& space, const Ball& ball, const Point& p) {
  return within(distance(space, ball.center, p), ball.radius);
}

bool balls_intersect(const Space& space, const Ball& a, const Ball& b) {
  return within(distance(space, a.center, b.center), a.radius + b.radius);
}

bool balls_disjoint(const Space& space, const Ball& a, const Ball& b) {
  return strictly_beyond(distance(space, a.center, b.center), a.radius + b.radius);
}

CommonPointResult find_common_point(const BallFamily& family) {
  CommonPointResult out;
  if (family.empty()) {
    out.status = CommonPointStatus::found;
    return out;
  }
  const Space& space = family.space;
  const double scale = std::max(1.0, max_radius(family));

  // A strictly disjoint pair certifies emptiness in any metric space.
  for (size_t i = 0; i < family.size(); ++i) {
    for (size_t j = i + 1; j < family.size(); ++j) {
      const auto& a = family.balls[i];
      const auto& b = family.balls[j];
      const double d = distance(space, a.center, b.center);
      if (strictly_beyond(d, a.radius + b.radius)) {
        out.status = CommonPointStatus::empty;
        out.lower_bound = 0.5 * (d - a.radius - b.radius);
        return out;
      }
    }
  }

  Point p;
  if (is_euclidean_1d(space)) {
    double lo = -kInfinity, hi = kInfinity;
    for (const auto& b : family.balls) {
      lo = std::max(lo, b.center.coords[0] - b.radius);
      hi = std::min(hi, b.center.coords[0] + b.radius);
    }
    p = Point{{lo <= hi ? 0.5 * (lo + hi) : 0.5 * (lo + hi)}};
  } else if (space.is_euclidean_l2()) {
    p = cyclic_projection_l2(family, scale);
  } else if (space.kind() == SpaceKind::euclidean) {
    Point start{Vec(space.dim(), 0.0)};
    for (const auto& b : family.balls)
      for (int k = 0; k < space.dim(); ++k) start.coords[k] += b.center.coords[k] / family.size();
    p = minimize_max_violation(family, start, scale);
  } else {
    p = grid_refine_curved(family);
  }

  if (in_all(family, p)) {
    out.status = CommonPointStatus::found;
    out.max_violation = max_violation(family, p);
    out.point = std::move(p);
    return out;
  }
  if (space.is_euclidean_l2() && space.dim() == 2) {
    if (auto v = planar_vertex_l2(family)) {
      out.status = CommonPointStatus::found;
      out.max_violation = max_violation(family, *v);
      out.point = std::move(*v);
      return out;
    }
  }
  if (space.kind() == SpaceKind::euclidean) {
    Point q = minimize_max_violation(family, p, scale);
    if (in_all(family, q)) {
      out.status = CommonPointStatus::found;
      out.max_violation = max_violation(family, q);
      out.point = std::move(q);
      return out;
    }
    if (auto lb = certify_empty(family, q, scale)) {
      out.status = CommonPointStatus::empty;
      out.lower_bound = *lb;
      out.max_violation = max_violation(family, q);
      out.point = std::move(q);
      return out;
    }
    p = std::move(q);
  }
  out.status = CommonPointStatus::indeterminate;
  out.max_violation = max_violation(family, p);
  out.point = std::move(p);
  return out;
}

Verdict is_besicovitch_family(const BallFamily& family) {
  validate_family(family);
  Verdict v;
  const Space& space = family.space;
  for (size_t i = 0; i < family.size(); ++i) {
    for (size_t j = i + 1; j < family.size(); ++j) {
      const auto& a = family.balls[i];
      const auto& b = family.balls[j];
      const double d = distance(space, a.center, b.center);
      if (!strictly_beyond(d, b.radius)) {
        v.status = VerdictStatus::invalid;
        v.reason = "center of ball " + std::to_string(i) + " lies in ball " + std::to_string(j);
        v.indices = {i, j};
        v.witness = a.center;
        return v;
      }
      if (!strictly_beyond(d, a.radius)) {
        v.status = VerdictStatus::invalid;
        v.reason = "center of ball " + std::to_string(j) + " lies in ball " + std::to_string(i);
        v.indices = {j, i};
        v.witness = b.center;
        return v;
      }
    }
  }
  CommonPointResult cp = find_common_point(family);
  switch (cp.status) {
    case CommonPointStatus::found:
      v.status = VerdictStatus::valid;
      v.witness = cp.point;
      return v;
    case CommonPointStatus::empty:
      v.status = VerdictStatus::invalid;
      v.reason = "balls have no common point";
      return v;
    case CommonPointStatus::indeterminate:
      v.status = VerdictStatus::indeterminate;
      v.reason = "common point search neither found a point nor certified emptiness";
      v.witness = cp.point;
      return v;
  }
  return v;
}

Verdict is_k_configuration(const BallFamily& family) {
  validate_family(family);
  Verdict v;
  for (size_t i = 0; i < family.size(); ++i) {
    for (size_t j = i + 1; j < family.size(); ++j) {
      const auto& a = family.balls[i];
      const auto& b = family.balls[j];
      const double d = distance(family.space, a.center, b.center);
      if (!within(d, a.radius + b.radius)) {
        v.status = VerdictStatus::invalid;
        v.reason = "balls " + std::to_string(i) + " and " + std::to_string(j) + " do not intersect";
        v.indices = {i, j};
        return v;
      }
      if (!strictly_beyond(d, std::max(a.radius, b.radius))) {
        v.status = VerdictStatus::invalid;
        v.reason = "balls " + std::to_string(i) + " and " + std::to_string(j) + " contain a center";
        v.indices = {i, j};
        return v;
      }
    }
  }
  return v;
}

OverlapProfile overlap_profile(const BallFamily& family, std::span<const Point> probes) {
  if (probes.empty()) throw InputError("probe mode needs at least one probe point");
  OverlapProfile out;
  out.histogram.assign(family.size() + 1, 0);
  for (const auto& p : probes) {
    size_t depth = 0;
    for (const auto& b : family.balls) depth += ball_contains(family.space, b, p) ? 1 : 0;
    ++out.histogram[depth];
    if (depth > out.max_overlap || !out.witness) {
      if (depth > out.max_overlap || depth == 0) out.witness = p;
      out.max_overlap = std::max(out.max_overlap, depth);
    }
  }
  return out;
}

OverlapProfile overlap_profile_exact_1d(const BallFamily& family) {
  if (!is_euclidean_1d(family.space)) {
    throw UnsupportedFeature("exact overlap sweep needs a 1-dimensional Euclidean family");
  }
  struct Event {
    double x;
    int delta;
  };
  std::vector<Event> events;
  events.reserve(2 * family.size());
  for (const auto& b : family.balls) {
    events.push_back({b.center.coords[0] - b.radius, +1});
    events.push_back({b.center.coords[0] + b.radius, -1});
  }
  // Closed intervals: openings at a coordinate precede closings there.
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.x < b.x || (a.x == b.x && a.delta > b.delta);
  });
  OverlapProfile out;
  out.exact = true;
  out.histogram.assign(family.size() + 1, 0);
  size_t depth = 0;
  size_t i = 0;
  while (i < events.size()) {
    const double x = events[i].x;
    while (i < events.size() && events[i].x == x && events[i].delta > 0) {
      ++depth;
      ++i;
    }
    ++out.histogram[depth];
    if (depth > out.max_overlap) {
      out.max_overlap = depth;
      out.witness = Point{{x}};
    }
    while (i < events.size() && events[i].x == x) {
      --depth;
      ++i;
    }
  }
  return out;
}

OverlapProfile overlap_profile_auto(const BallFamily& family, std::span<const Point> probes) {
  if (is_euclidean_1d(family.space)) return overlap_profile_exact_1d(family);
  if (probes.empty()) {
    OverlapProfile out;
    out.histogram.assign(family.size() + 1, 0);
    return out;
  }
  return overlap_profile(family, probes);
}

std::vector<Point> epsilon_net_greedy(const Space& space, std::span<const Point> points, double eps,
                                      bool strict) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  std::vector<Point> net;
  for (const auto& p : points) {
    bool keep = true;
    for (const auto& q : net) {
      const double d = distance(space, p, q);
      if (strict ? !(d > eps) : !(d >= eps)) {
        keep = false;
        break;
      }
    }
    if (keep) net.push_back(p);
  }
  return net;
}

size_t covering_number(const Space& space, const Ball& target, double eps, int64_t budget, uint64_t seed) {
  validate_ball(space, target);
  if (budget < space.dim() + 1) throw InputError("sample budget must be at least dim + 1");
  if (!(eps > 0.0) || !(eps < target.radius)) throw InputError("eps must lie in (0, target radius)");
  std::mt19937_64 rng(seed);
  std::vector<Point> sample;
  sample.reserve(static_cast<size_t>(budget));
  sample.push_back(target.center);
  while (static_cast<int64_t>(sample.size()) < budget) sample.push_back(random_point_in_ball(space, target, rng));
  return epsilon_net_greedy(space, sample, eps, false).size();
}

Verdict is_alpha_configuration(const BallFamily& family, const Ball& target, double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw InputError("alpha must lie in (1/2, 1)");
  validate_family(family);
  validate_ball(family.space, target);
  Verdict v;
  for (size_t i = 0; i < family.size(); ++i) {
    const Ball& b = family.balls[i];
    if (!balls_intersect(family.space, b, target)) {
      v.status = VerdictStatus::invalid;
      v.reason = "ball " + std::to_string(i) + " does not meet the target ball";
      v.indices = {i};
      return v;
    }
    const double bound = alpha * b.radius;
    if (!(target.radius < bound - tolerance().slack(bound))) {
      v.status = VerdictStatus::invalid;
      v.reason = "target radius is not below alpha times the radius of ball " + std::to_string(i);
      v.indices = {i};
      return v;
    }
  }
  return v;
}

Verdict is_tau_satellite_configuration(const Space& space, std::span<const QuasiRoundSet> sets,
                                       std::span<const Point> points, double tau) {
  if (sets.size() != points.size()) throw InputError("sets and points must have the same length");
  if (!(tau > 1.0)) throw InputError("tau must exceed 1");
  for (size_t i = 0; i < sets.size(); ++i) {
    try {
      validate_quasi_round(space, sets[i]);
      validate_point(space, points[i]);
    } catch (const InputError& e) {
      throw InputError("set " + std::to_string(i) + ": " + e.what());
    }
  }
  Verdict v;
  v.status = VerdictStatus::invalid;
  if (sets.empty()) {
    v.reason = "empty configuration has no central index";
    return v;
  }
  const size_t n = sets.size();
  auto strictly_less = [](double a, double b) { return a < b - tolerance().slack(b); };
  // (1) a_i in S_i, certain only inside the inner ball.
  for (size_t i = 0; i < n; ++i) {
    if (!ball_contains(space, sets[i].inner(), points[i])) {
      v.reason = "condition 1: point " + std::to_string(i) + " is not inside the inner ball of its set";
      v.indices = {i};
      return v;
    }
  }
  // (4) for i < j: a_j not in S_i (violated only inside the inner ball) and
  // diam S_j < tau diam S_i.
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (ball_contains(space, sets[i].inner(), points[j])) {
        v.reason = "condition 4: point " + std::to_string(j) + " lies in set " + std::to_string(i);
        v.indices = {i, j};
        return v;
      }
      if (!strictly_less(sets[j].diameter, tau * sets[i].diameter)) {
        v.reason = "condition 4: diameter of set " + std::to_string(j) + " is not below tau times set " +
                   std::to_string(i);
        v.indices = {i, j};
        return v;
      }
    }
  }
  // (2), (3) for a central index; intersection tested on outer balls.
  for (size_t c = 0; c < n; ++c) {
    bool ok = true;
    for (size_t i = 0; i < n && ok; ++i) {
      if (i == c) continue;
      ok = balls_intersect(space, sets[c].outer(), sets[i].outer()) &&
           strictly_less(sets[c].diameter, tau * sets[i].diameter);
    }
    if (ok) {
      v.status = VerdictStatus::valid;
      v.central_index = c;
      return v;
    }
  }
  v.reason = "conditions 2-3: no central index";
  return v;
}

int64_t strict_net_bound(double alpha, int dim) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw InputError("alpha must lie in (1/2, 1)");
  if (dim < 1) throw InputError("dimension must be >= 1");
  const long double v = std::pow(2.0L * alpha + 3.0L, static_cast<long double>(dim));
  if (v > static_cast<long double>(std::numeric_limits<int64_t>::max())) {
    throw InputError("strict net bound overflows");
  }
  return static_cast<int64_t>(std::floor(v));
}

}  // namespace besicover
