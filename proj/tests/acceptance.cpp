// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "besicover/cli.hpp"
#include "besicover/scene.hpp"
#include "besicover/search.hpp"
#include "besicover/selection.hpp"

using namespace besicover;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- interval oracles ----------------------------------------------------------

using Interval = std::pair<double, double>;

std::vector<Interval> intervals(const BallFamily& f) {
  std::vector<Interval> iv;
  for (const auto& b : f.balls) iv.push_back({b.center.coords[0] - b.radius, b.center.coords[0] + b.radius});
  return iv;
}

// Closed intervals pairwise disjoint: sorted by left end, each starts after
// the running right end.
bool sweep_disjoint(std::vector<Interval> iv) {
  std::sort(iv.begin(), iv.end());
  double reach = -kInfinity;
  for (auto [lo, hi] : iv) {
    if (lo <= reach) return false;
    reach = std::max(reach, hi);
  }
  return true;
}

bool sweep_covers(std::vector<Interval> iv, std::vector<double> points) {
  std::sort(iv.begin(), iv.end());
  std::sort(points.begin(), points.end());
  size_t k = 0;
  double reach = -kInfinity;
  for (double p : points) {
    while (k < iv.size() && iv[k].first <= p) reach = std::max(reach, iv[k++].second);
    if (p > reach) return false;
  }
  return true;
}

// Largest number of closed intervals sharing a point (opens before closes).
size_t sweep_depth(const std::vector<Interval>& iv) {
  std::vector<std::pair<double, int>> ev;
  for (auto [lo, hi] : iv) {
    ev.push_back({lo, 0});
    ev.push_back({hi, 1});
  }
  std::sort(ev.begin(), ev.end());
  size_t depth = 0, best = 0;
  for (auto [x, kind] : ev) {
    if (kind == 0) {
      best = std::max(best, ++depth);
    } else {
      --depth;
    }
  }
  return best;
}

double euclid(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

std::string run_cli(const std::vector<std::string>& args, int* code = nullptr) {
  std::ostringstream out, err;
  const int c = run_command(args, out, err);
  if (code) *code = c;
  return out.str();
}

// ---- criteria --------------------------------------------------------------------

void one_dimensional_cover() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> pos(-1e6, 1e6), decades(-2.0, 2.0), size_exp(0.0, 4.0);
  const int kFamilies = 100000;
  int bad = 0;
  size_t max_families = 0;
  int64_t total = 0;
  double slowest_large = 0.0;
  auto check = [&](size_t n, OneDMethod method) {
    BallFamily f{Space::euclidean(1), {}, {}};
    std::vector<double> centers(n);
    for (size_t i = 0; i < n; ++i) {
      centers[i] = pos(rng);
      f.balls.push_back(Ball{Point{{centers[i]}}, std::pow(10.0, decades(rng))});
    }
    const auto t0 = Clock::now();
    const DisjointPartition p = besicovitch_cover_1d(f, centers, method);
    const double dt = seconds_since(t0);
    if (n >= 5000) slowest_large = std::max(slowest_large, dt * 10000.0 / n);
    bool ok = p.families.size() <= 2;
    std::vector<Interval> all;
    for (const auto& fam : p.families) {
      const auto iv = intervals(fam);
      ok = ok && sweep_disjoint(iv);
      all.insert(all.end(), iv.begin(), iv.end());
    }
    ok = ok && sweep_covers(all, centers);
    max_families = std::max(max_families, p.families.size());
    total += static_cast<int64_t>(n);
    bad += !ok;
  };
  for (int t = 0; t < kFamilies; ++t) {
    const size_t n = std::min<size_t>(10000, static_cast<size_t>(std::pow(10.0, size_exp(rng))));
    check(n, t % 10 == 9 ? OneDMethod::anchored : OneDMethod::greedy);
  }
  for (int t = 0; t < 10; ++t) check(10000, OneDMethod::greedy);
  report(1, bad == 0 && max_families <= 2 && slowest_large < 1.0, "1-D two-family cover",
         fmt("%d families (%lld intervals, every 10th anchored), %d failures, max %zu families, slowest %.3f s per 1e4 intervals",
             kFamilies + 10, static_cast<long long>(total), bad, max_families, slowest_large));
}

void line_wbcp() {
  int twos = 0, threes = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    SearchConfig c;
    c.seed = seed;
    const SearchResult r = search_max_besicovitch_family(Space::euclidean(1), 0.5, 1.0, c);
    twos += r.score == 2 && r.feasible;
    threes += r.score >= 3;
  }
  // Exhaustive grid over normalized triples: common point 0, largest radius 1,
  // r1 = 1 >= r2 >= r3 on step 0.05, centers x_i = r_i u_i with u1 >= 0.
  BallFamily f{Space::euclidean(1), std::vector<Ball>(3), {}};
  int64_t checked = 0, valid = 0;
  for (int a = 1; a <= 20; ++a)
    for (int b = 1; b <= a; ++b) {
      const double r2 = a * 0.05, r3 = b * 0.05;
      for (int i = 0; i <= 20; ++i)
        for (int j = -20; j <= 20; ++j)
          for (int k = -20; k <= 20; ++k) {
            f.balls[0] = Ball{Point{{i * 0.05}}, 1.0};
            f.balls[1] = Ball{Point{{r2 * j * 0.05}}, r2};
            f.balls[2] = Ball{Point{{r3 * k * 0.05}}, r3};
            ++checked;
            valid += is_besicovitch_family(f).is_valid();
          }
    }
  report(2, twos == 100 && threes == 0 && valid == 0, "w(1) = 2",
         fmt("100 seeds: %d scored 2, %d scored >= 3; grid: %lld triples checked, %lld valid", twos, threes,
             static_cast<long long>(checked), static_cast<long long>(valid)));
}

void plane_wbcp() {
  int code = 0;
  const std::string out = run_cli({"search", "--what", "wbcp", "--dim", "2", "--seed", "0"}, &code);
  const auto rep = nlohmann::json::parse(out);
  const SceneFile scene = parse_scene(rep["result"]["scene"].dump());
  const bool revalidated = is_besicovitch_family(scene.family()).is_valid();
  const size_t score = scene.balls.size();
  int six = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    SearchConfig c;
    c.seed = seed;
    six += search_besicovitch_of_size(Space::euclidean(2), 6, 0.5, 1.0, c).feasible;
  }
  report(3, code == 0 && score >= 5 && revalidated && six == 0, "w(2) >= 5",
         fmt("default-budget family of %zu balls, re-validated from serialized output: %s; 6-ball searches succeeded for %d of 100 seeds",
             score, revalidated ? "yes" : "no", six));
}

void hadwiger() {
  bool ok = true;
  std::string sizes;
  for (int dim = 1; dim <= 3; ++dim) {
    const BallFamily f = construct_strict_hadwiger(dim);
    const Vec zero(dim, 0.0);
    double worst_tangency = 0.0, closest = kInfinity;
    for (size_t i = 0; i < f.size(); ++i) {
      worst_tangency = std::max(worst_tangency, std::fabs(euclid(f.balls[i].center.coords, zero) - 2.0));
      ok = ok && f.balls[i].radius == 1.0;
      for (size_t j = i + 1; j < f.size(); ++j)
        closest = std::min(closest, euclid(f.balls[i].center.coords, f.balls[j].center.coords));
    }
    ok = ok && worst_tangency < 1e-12 && closest > 2.0;
    sizes += fmt("%sdim %d: %zu balls, tangency error %.1e, min gap %.6f", dim > 1 ? "; " : "", dim, f.size(),
                 worst_tangency, closest);
  }
  const size_t expected[] = {2, 5, 12};
  for (int dim = 1; dim <= 3; ++dim) ok = ok && construct_strict_hadwiger(dim).size() == expected[dim - 1];
  report(4, ok, "strict Hadwiger constructions", sizes);
}

void packing_and_chain() {
  bool ok = true;
  size_t beta[2] = {0, 0};
  for (int dim = 1; dim <= 2; ++dim) {
    const SearchResult r = pack_unit_balls_radius5(dim, SearchConfig{});
    beta[dim - 1] = r.score;
    const Vec zero(dim, 0.0);
    bool pinned = false;
    for (size_t i = 0; i < r.best.size(); ++i) {
      const Vec& c = r.best.balls[i].center.coords;
      pinned |= c == zero;
      ok = ok && euclid(c, zero) <= 4.0;
      for (size_t j = i + 1; j < r.best.size(); ++j) ok = ok && euclid(c, r.best.balls[j].center.coords) >= 2.0 - 1e-9;
    }
    ok = ok && pinned;
  }
  ok = ok && beta[0] == 5 && beta[1] == 19;

  std::vector<ConstantsRow> rows;
  bool chain = true;
  std::string note;
  try {
    rows = constants_report({1, 2, 3, 4}, SearchConfig{});
  } catch (const std::logic_error& e) {
    chain = false;
    note = e.what();
  }
  // Recheck the chain here, per dimension and per kind of value.
  for (int dim = 1; dim <= 4 && chain; ++dim) {
    std::vector<const ConstantsRow*> ordered;
    for (const char* name : {"w", "K", "alpha", "beta"})
      for (const auto& r : rows)
        if (r.dim == dim && r.name == name) ordered.push_back(&r);
    const double cap = std::pow(5.0, dim);
    for (int kind = 0; kind < 3; ++kind) {
      double prev = -1.0;
      for (const ConstantsRow* r : ordered) {
        std::optional<int64_t> v = kind == 0 ? r->reference_low : kind == 1 ? r->reference_high : std::optional<int64_t>(r->achieved);
        if (!v) continue;
        chain = chain && static_cast<double>(*v) >= prev && static_cast<double>(*v) <= cap;
        prev = static_cast<double>(*v);
      }
    }
    for (const auto& r : rows)
      if (r.dim == dim && r.reference_high) chain = chain && r.achieved <= *r.reference_high;
  }
  std::string achieved;
  for (const auto& r : rows) achieved += fmt("%s%s(%d)=%lld", achieved.empty() ? "" : " ", r.name.c_str(), r.dim, static_cast<long long>(r.achieved));
  report(5, ok && chain && rows.size() == 20, "beta(1) = 5, beta(2) = 19, constants chain",
         fmt("beta(1)=%zu beta(2)=%zu; chain on %zu rows: %s; achieved %s", beta[0], beta[1], rows.size(),
             chain ? "holds" : ("fails " + note).c_str(), achieved.c_str()));
}

void cip() {
  bool ok = true;
  std::string detail;
  for (int m = 1; m <= 4; ++m) {
    std::mt19937_64 rng(1000 + m);
    const double s = 0.95;
    int found = 0, verified = 0;
    const auto t0 = Clock::now();
    for (int t = 0; t < 1000; ++t) {
      const BallFamily f = random_cip_family(m, rng);
      const CipResult r = cip_check(f, m, s);
      if (!r.found) continue;
      ++found;
      bool inside = r.indices.size() == static_cast<size_t>(m + 1) && r.witness.has_value();
      std::vector<size_t> idx = r.indices;
      std::sort(idx.begin(), idx.end());
      inside = inside && std::adjacent_find(idx.begin(), idx.end()) == idx.end();
      for (size_t i : r.indices)
        inside = inside && euclid(r.witness->coords, f.balls[i].center.coords) <= s * f.balls[i].radius + 1e-9;
      verified += inside;
    }
    const double dt = seconds_since(t0);
    ok = ok && found == 1000 && verified == 1000 && dt < 10.0;
    detail += fmt("%sm=%d: %d/1000 found, %d re-verified, %.2f s", m > 1 ? "; " : "", m, found, verified, dt);
  }
  report(6, ok, "CIP with 2m+1 balls, s = 0.95", detail);
}

// Largest subset of the grid {-4, -3.5, ..., 4} with pairwise gaps >= 1, by
// enumerating all 2^17 subsets.
int exhaustive_line_net() {
  const int n = 17;
  int best = 0;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    int count = 0;
    double last = -kInfinity;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1u)) continue;
      const double x = -4.0 + 0.5 * i;
      ok = x - last >= 1.0;
      last = x;
      ++count;
    }
    if (ok) best = std::max(best, count);
  }
  return best;
}

struct Criterion7Output {
  std::vector<BallFamily> selected;
  std::vector<std::vector<double>> centers;
  std::vector<size_t> overlaps;
};

Criterion7Output selection(int c0) {
  Criterion7Output out;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int bad = 0, spans = 0;
  size_t worst = 0;
  double mean = 0.0;
  bool bound_matches = true;
  const int64_t c2 = 2 * c0 + 1;
  for (int t = 0; t < 1000; ++t) {
    const size_t n = 30 + static_cast<size_t>(unif(rng) * 270);
    const double width = 2.0 + 30.0 * unif(rng);
    BallFamily f{Space::euclidean(1), {}, {}};
    std::vector<double> centers;
    for (size_t i = 0; i < n; ++i) {
      // Bands (1/2^k, 1/2^(k-1)] for k = 1..4; the first three balls force bands 1-3.
      const int band = i < 3 ? static_cast<int>(i) + 1 : 1 + static_cast<int>(unif(rng) * 4);
      const double top = std::pow(0.5, band - 1);
      const double r = i == 0 ? 1.0 : top * (0.5 + 0.5 * (1.0 - unif(rng)));
      const double x = width * (2.0 * unif(rng) - 1.0);
      f.balls.push_back(Ball{Point{{x}}, r});
      centers.push_back(x);
    }
    std::vector<int> bands;
    for (const auto& b : f.balls) bands.push_back(static_cast<int>(std::ceil(-std::log2(b.radius) - 1e-12)));
    std::sort(bands.begin(), bands.end());
    spans += std::unique(bands.begin(), bands.end()) - bands.begin() >= 3;

    std::vector<Point> pts;
    for (double x : centers) pts.push_back(Point{{x}});
    const SubcoverResult r = select_bounded_overlap_subcover(f, pts, 0.5);
    const auto iv = intervals(r.selected);
    const size_t depth = sweep_depth(iv);
    bound_matches = bound_matches && r.overlap_bound && *r.overlap_bound == c2;
    bad += !(sweep_covers(iv, centers) && static_cast<int64_t>(depth) <= c2);
    worst = std::max(worst, depth);
    mean += static_cast<double>(depth) / 1000.0;
    out.selected.push_back(r.selected);
    out.centers.push_back(centers);
    out.overlaps.push_back(depth);
  }
  report(7, bad == 0 && spans == 1000 && bound_matches, "scale-band selection",
         fmt("1000 families (%d span >= 3 bands), %d failures; C0 = %d by exhaustive net enumeration, bound 2*C0+1 = %lld; exact overlap max %zu, mean %.2f",
             spans, bad, c0, static_cast<long long>(c2), worst, mean));
  return out;
}

void partition(const Criterion7Output& in) {
  int bad = 0;
  size_t most = 0;
  const int64_t net = strict_net_bound(0.75, 1);
  for (size_t t = 0; t < in.selected.size(); ++t) {
    const DisjointPartition p = partition_into_disjoint_families(in.selected[t], 0.75);
    bool ok = std::none_of(p.assignment.begin(), p.assignment.end(), [](size_t a) { return a == kUnassigned; });
    std::vector<Interval> all;
    for (const auto& fam : p.families) {
      const auto iv = intervals(fam);
      ok = ok && sweep_disjoint(iv);
      all.insert(all.end(), iv.begin(), iv.end());
    }
    ok = ok && sweep_covers(all, in.centers[t]);
    ok = ok && static_cast<int64_t>(p.families.size()) <= static_cast<int64_t>(in.overlaps[t]) * net + 1;
    most = std::max(most, p.families.size());
    bad += !ok;
  }
  report(8, bad == 0, "disjoint-family partition",
         fmt("%zu selections partitioned, %d failures, at most %zu families (bound overlap*%lld+1)", in.selected.size(),
             bad, most, static_cast<long long>(net)));
}

void geometry() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::vector<Space> spaces = {Space::euclidean(2),  Space::euclidean(3, 1.5), Space::sphere(2),
                                     Space::sphere(3, 2.0), Space::hyperbolic(2),    Space::hyperbolic(3)};
  double worst = 0.0;
  for (const Space& space : spaces) {
    const double reach = std::min(3.0, 0.95 * injectivity_radius(space));
    for (int t = 0; t < 10000; ++t) {
      const Point base = random_point_in_ball(space, Ball{origin(space), reach}, rng);
      Vec v = random_unit_tangent(space, base, rng);
      const double len = reach * unif(rng);
      for (double& x : v) x *= len;
      const Point q = exp_map(space, Tangent{base, v});
      const Tangent back = log_map(space, base, q);
      double res = 0.0;
      for (size_t k = 0; k < v.size(); ++k) res = std::max(res, std::fabs(back.vector[k] - v[k]));
      worst = std::max(worst, res);
    }
  }
  double vol_err = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double r = std::numbers::pi * k / 100.0;
    vol_err = std::max(vol_err, std::fabs(ball_volume(Space::sphere(2), r) - 2.0 * std::numbers::pi * (1.0 - std::cos(r))));
  }
  const Space s2 = Space::sphere(2);
  const double alpha = 0.75;
  const int64_t bound = strict_net_bound(alpha, 2);
  size_t largest = 0;
  int over = 0;
  for (int t = 0; t < 1000; ++t) {
    const Point x = random_point_in_ball(s2, Ball{origin(s2), std::numbers::pi}, rng);
    const double r = (0.01 + 0.99 * unif(rng)) * injectivity_radius(s2) / 4.0;
    std::vector<Point> pts;
    for (int k = 0; k < 400; ++k) pts.push_back(random_point_in_ball(s2, Ball{x, r + r / alpha}, rng));
    const auto net = epsilon_net_greedy(s2, pts, r / alpha, true);
    largest = std::max(largest, net.size());
    over += static_cast<int64_t>(net.size()) > bound;
  }
  report(9, worst < 1e-8 && vol_err <= 1e-9 && over == 0, "model-space geometry",
         fmt("exp/log max residual %.2e over 6 spaces x 1e4; S2 volume max error %.2e; strict nets on 1000 sphere balls: largest %zu, bound %lld, %d over",
             worst, vol_err, largest, static_cast<long long>(bound), over));
}

void determinism() {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "besicover_acceptance";
  std::filesystem::create_directories(dir);
  const std::string scene = (dir / "line.json").string();
  {
    SceneFile s;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-50.0, 50.0), r(0.1, 5.0);
    for (int i = 0; i < 300; ++i) s.balls.push_back(Ball{Point{{u(rng)}}, r(rng)});
    std::ofstream(scene) << serialize_scene(s);
  }
  const std::vector<std::vector<std::string>> commands = {
      {"search", "--what", "wbcp", "--dim", "2", "--seed", "3"},
      {"search", "--what", "wbcp", "--space", "sphere:2", "--seed", "3", "--rmin", "0.2", "--rmax", "0.78"},
      {"search", "--what", "hadwiger", "--dim", "4", "--seed", "3"},
      {"search", "--what", "pack5", "--dim", "3", "--seed", "3"},
      {"search", "--what", "satellite", "--dim", "2", "--seed", "3", "--budget", "20000"},
      {"cip", "--m", "2", "--trials", "200", "--seed", "3"},
      {"constants", "--dims", "1,2,3", "--seed", "3"},
      {"constants", "--dims", "1,2", "--seed", "3", "--format", "markdown"},
      {"select", scene},
      {"partition", scene},
      {"oned", scene, "--method", "anchored"},
      {"net", scene, "--eps", "2"},
  };
  int same = 0;
  std::string differing;
  for (const auto& cmd : commands) {
    const std::string a = run_cli(cmd), b = run_cli(cmd);
    if (a == b && !a.empty()) {
      ++same;
    } else {
      differing += " " + cmd[0];
    }
  }
  std::filesystem::remove_all(dir);
  report(10, same == static_cast<int>(commands.size()), "determinism",
         fmt("%d of %zu commands byte-identical on re-run%s", same, commands.size(), differing.c_str()));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  one_dimensional_cover();
  line_wbcp();
  plane_wbcp();
  hadwiger();
  packing_and_chain();
  cip();
  const Criterion7Output sel = selection(exhaustive_line_net());
  partition(sel);
  geometry();
  determinism();
  std::printf("%s: %d of 10 criteria failed (%.1f s)\n", failures ? "FAIL" : "PASS", failures, seconds_since(t0));
  return failures ? 1 : 0;
}
