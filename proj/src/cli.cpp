#include "besicover/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "besicover/errors.hpp"
#include "besicover/scene.hpp"
#include "besicover/search.hpp"
#include "besicover/selection.hpp"
#include "besicover/tolerance.hpp"

namespace besicover {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kToolVersion = "1.0.0";

struct Outcome {
  Json result;
  bool ok = true;
  std::optional<uint64_t> seed;
  std::string text;  // replaces the JSON report when set (markdown output)
};

struct Input {
  std::string path;
  std::string bytes;
  SceneFile scene;
};

Input read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read scene file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Input input{path, buf.str(), {}};
  input.scene = parse_scene(input.bytes);
  return input;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json point_json(const Point& p) { return Json(p.coords); }

Json verdict_json(const Verdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  j["reason"] = v.reason;
  j["indices"] = v.indices;
  j["witness"] = v.witness ? point_json(*v.witness) : Json(nullptr);
  if (v.central_index) j["central_index"] = *v.central_index;
  return j;
}

Json scene_json(const SceneFile& scene) { return Json::parse(serialize_scene(scene)); }

// Index lists per family, read from the assignment.
Json families_json(const DisjointPartition& p) {
  Json fams = Json::array();
  for (size_t f = 0; f < p.families.size(); ++f) {
    Json idx = Json::array();
    for (size_t i = 0; i < p.assignment.size(); ++i)
      if (p.assignment[i] == f) idx.push_back(i);
    fams.push_back(idx);
  }
  return fams;
}

bool pairwise_disjoint(const BallFamily& f) {
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = i + 1; j < f.size(); ++j)
      if (!balls_disjoint(f.space, f.balls[i], f.balls[j])) return false;
  return true;
}

bool centers_covered(const std::vector<BallFamily>& families, const BallFamily& input) {
  for (const auto& b : input.balls) {
    bool hit = false;
    for (const auto& f : families) {
      for (const auto& c : f.balls) {
        if (ball_contains(input.space, c, b.center)) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    if (!hit) return false;
  }
  return true;
}

// ---- subcommands -------------------------------------------------------------

struct ValidateArgs {
  std::string scene, what = "besicovitch";
  double alpha = 0.75, tau = 1.5;
};

Outcome run_validate(const ValidateArgs& a, const Input& in) {
  const SceneFile& s = in.scene;
  Verdict v;
  if (a.what == "besicovitch") {
    v = is_besicovitch_family(s.family());
  } else if (a.what == "k-config") {
    v = is_k_configuration(s.family());
  } else if (a.what == "alpha-config") {
    if (!s.target) throw InputError("alpha-config needs a 'target' ball in the scene");
    v = is_alpha_configuration(s.family(), *s.target, a.alpha);
  } else {
    v = is_tau_satellite_configuration(s.space, s.sets, s.points, a.tau);
  }
  Outcome o;
  o.result["what"] = a.what;
  if (a.what == "alpha-config") o.result["alpha"] = a.alpha;
  if (a.what == "satellite") o.result["tau"] = a.tau;
  o.result["verdict"] = verdict_json(v);
  o.ok = v.is_valid();
  return o;
}

Outcome run_select(double beta, const Input& in) {
  const BallFamily f = in.scene.family();
  std::vector<Point> centers;
  for (const auto& b : f.balls) centers.push_back(b.center);
  const SubcoverResult r = select_bounded_overlap_subcover(f, centers, beta);
  const bool all = std::all_of(r.covered_centers.begin(), r.covered_centers.end(), [](bool b) { return b; });
  Outcome o;
  o.result["beta"] = beta;
  o.result["selected_indices"] = r.selected_indices;
  o.result["selected_count"] = r.selected_indices.size();
  o.result["all_centers_covered"] = all;
  o.result["max_overlap"] = r.overlap.max_overlap;
  o.result["overlap_exact"] = r.overlap.exact;
  o.result["overlap_bound"] = r.overlap_bound ? Json(*r.overlap_bound) : Json(nullptr);
  o.result["bands"] = r.bands;
  o.ok = all && !(r.overlap_bound && r.overlap.exact && static_cast<int64_t>(r.overlap.max_overlap) > *r.overlap_bound);
  return o;
}

Outcome partition_outcome(const DisjointPartition& p, const BallFamily& f) {
  bool disjoint = std::all_of(p.families.begin(), p.families.end(), pairwise_disjoint);
  const bool covered = centers_covered(p.families, f);
  const bool within_bound = !p.bound || static_cast<int64_t>(p.families.size()) <= *p.bound;
  Outcome o;
  o.result["families"] = families_json(p);
  o.result["family_count"] = p.families.size();
  o.result["bound"] = p.bound ? Json(*p.bound) : Json(nullptr);
  o.result["bound_note"] = p.bound_note;
  o.result["pairwise_disjoint"] = disjoint;
  o.result["all_centers_covered"] = covered;
  o.ok = disjoint && covered && within_bound;
  return o;
}

Outcome run_partition(double alpha, const Input& in) {
  const BallFamily f = in.scene.family();
  Outcome o = partition_outcome(partition_into_disjoint_families(f, alpha), f);
  o.result["alpha"] = alpha;
  return o;
}

Outcome run_oned(const std::string& method, const Input& in) {
  const BallFamily f = in.scene.family();
  if (f.space.kind() != SpaceKind::euclidean || f.space.dim() != 1) {
    throw UnsupportedFeature("oned works on the real line only");
  }
  std::vector<double> centers;
  for (const auto& b : f.balls) centers.push_back(b.center.coords[0]);
  const DisjointPartition p = besicovitch_cover_1d(f, centers, oned_method_from_string(method));
  Outcome o = partition_outcome(p, f);
  o.result["method"] = method;
  o.ok = o.ok && p.families.size() <= 2;
  return o;
}

Outcome run_net(double eps, bool strict, const Input& in) {
  const SceneFile& s = in.scene;
  std::vector<Point> pts = s.points;
  if (pts.empty())
    for (const auto& b : s.balls) pts.push_back(b.center);
  const std::vector<Point> net = epsilon_net_greedy(s.space, pts, eps, strict);
  bool separated = true;
  for (size_t i = 0; i < net.size() && separated; ++i)
    for (size_t j = i + 1; j < net.size() && separated; ++j) {
      const double d = distance(s.space, net[i], net[j]);
      separated = strict ? d > eps : d >= eps;
    }
  Outcome o;
  o.result["eps"] = eps;
  o.result["strict"] = strict;
  o.result["input_points"] = pts.size();
  o.result["net_size"] = net.size();
  o.result["net"] = Json::array();
  for (const auto& p : net) o.result["net"].push_back(point_json(p));
  o.result["separated"] = separated;
  o.ok = separated;
  return o;
}

struct SearchArgs {
  std::string what = "wbcp", space;
  int dim = 2;
  int64_t budget = 100000;
  int restarts = 8;
  uint64_t seed = 0;
  double rmin = 0.5, rmax = 1.0, tau = 1.5, lambda = 1.0;
  size_t size = 0;
};

Outcome run_search(const SearchArgs& a) {
  SearchConfig c;
  c.seed = a.seed;
  c.budget = a.budget;
  c.restarts = a.restarts;
  const Space space = a.space.empty() ? Space::euclidean(a.dim) : parse_space_spec(a.space);
  SearchResult r;
  SceneFile out;
  std::function<bool(const SceneFile&)> recheck;
  if (a.what == "wbcp") {
    r = a.size ? search_besicovitch_of_size(space, a.size, a.rmin, a.rmax, c)
               : search_max_besicovitch_family(space, a.rmin, a.rmax, c);
    recheck = [](const SceneFile& s) { return is_besicovitch_family(s.family()).is_valid(); };
  } else if (a.what == "hadwiger") {
    if (!space.is_euclidean_l2()) throw UnsupportedFeature("hadwiger search runs in Euclidean l2 space");
    if (space.dim() <= 3) {
      r.best = construct_strict_hadwiger(space.dim());
      r.score = r.best.size();
      r.feasible = true;
      r.trace = {r.score};
    } else {
      r = search_strict_hadwiger(space.dim(), c);
    }
    recheck = [](const SceneFile& s) { return check_strict_hadwiger(s.family()).is_valid(); };
  } else if (a.what == "pack5") {
    if (!space.is_euclidean_l2()) throw UnsupportedFeature("pack5 runs in Euclidean l2 space");
    r = pack_unit_balls_radius5(space.dim(), c);
    recheck = [](const SceneFile& s) { return check_radius5_packing(s.family()).is_valid(); };
  } else {
    r = satellite_max_search(space, a.tau, a.lambda, c);
    const double tau = a.tau;
    recheck = [tau](const SceneFile& s) { return is_tau_satellite_configuration(s.space, s.sets, s.points, tau).is_valid(); };
  }
  out.space = r.best.space;
  out.balls = r.best.balls;
  out.sets = r.sets;
  out.points = r.points;
  const bool revalidated = recheck(parse_scene(serialize_scene(out)));

  Outcome o;
  o.seed = a.seed;
  o.result["what"] = a.what;
  o.result["space"] = space_spec(space);
  o.result["budget"] = a.budget;
  o.result["restarts"] = a.restarts;
  if (a.what == "wbcp") {
    o.result["rmin"] = a.rmin;
    o.result["rmax"] = a.rmax;
    if (a.size) o.result["size"] = a.size;
  }
  if (a.what == "satellite") {
    o.result["tau"] = a.tau;
    o.result["lambda"] = a.lambda;
    o.result["central_index"] = r.central_index ? Json(*r.central_index) : Json(nullptr);
  }
  o.result["score"] = r.score;
  o.result["feasible"] = r.feasible;
  o.result["revalidated"] = revalidated;
  o.result["trace"] = r.trace;
  o.result["scene"] = scene_json(out);
  o.ok = r.feasible && revalidated;
  return o;
}

struct CipArgs {
  std::string scene;
  int m = 1;
  double shrink = 0.95;
  int trials = 1000;
  uint64_t seed = 0;
};

Outcome run_cip(const CipArgs& a, const std::optional<Input>& in) {
  Outcome o;
  o.result["m"] = a.m;
  o.result["shrink"] = a.shrink;
  if (in) {
    const BallFamily f = in->scene.family();
    const CipResult r = cip_check(f, a.m, a.shrink);
    o.result["found"] = r.found;
    o.result["indices"] = r.indices;
    o.result["witness"] = r.witness ? point_json(*r.witness) : Json(nullptr);
    o.result["route"] = r.route;
    const auto largest = cip_largest_shrink(f, a.m);
    o.result["largest_shrink"] = largest ? Json(*largest) : Json(nullptr);
    o.ok = r.found;
    return o;
  }
  if (!(a.shrink > 0.0 && a.shrink < 1.0)) throw InputError("shrink factor must lie in (0, 1)");
  if (a.m < 1) throw InputError("m must be >= 1");
  const CipTrialStats st = cip_monte_carlo(a.m, a.shrink, a.trials, a.seed);
  o.seed = a.seed;
  o.result["trials"] = st.trials;
  o.result["found"] = st.found;
  o.result["verified"] = st.verified;
  o.result["sector_route"] = st.sector_route;
  o.result["found_rate"] = static_cast<double>(st.found) / st.trials;
  o.ok = st.found == st.trials && st.verified == st.found;
  return o;
}

struct ConstantsArgs {
  std::vector<int> dims{1, 2, 3, 4};
  uint64_t seed = 0;
  int64_t budget = 100000;
  std::string format = "json";
};

std::string markdown_table(const std::vector<ConstantsRow>& rows, uint64_t seed) {
  std::ostringstream md;
  md << "seed: " << seed << "\n\n";
  md << "| constant | dim | reference | achieved | method |\n";
  md << "|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    md << "| " << r.name << " | " << r.dim << " | " << reference_value_text(r) << " | " << r.achieved << " | " << r.method
       << " |\n";
  }
  return md.str();
}

Outcome run_constants(const ConstantsArgs& a) {
  SearchConfig c;
  c.seed = a.seed;
  c.budget = a.budget;
  Outcome o;
  o.seed = a.seed;
  std::vector<ConstantsRow> rows;
  try {
    rows = constants_report(a.dims, c);
  } catch (const std::logic_error& e) {
    o.ok = false;
    o.result["error"] = e.what();
    return o;
  }
  o.result["dims"] = a.dims;
  o.result["budget"] = a.budget;
  o.result["rows"] = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["name"] = r.name;
    j["dim"] = r.dim;
    j["reference"] = reference_value_text(r);
    j["reference_low"] = r.reference_low ? Json(*r.reference_low) : Json(nullptr);
    j["reference_high"] = r.reference_high ? Json(*r.reference_high) : Json(nullptr);
    j["achieved"] = r.achieved;
    j["method"] = r.method;
    o.result["rows"].push_back(j);
  }
  o.result["chain_holds"] = true;
  if (a.format == "markdown") o.text = markdown_table(rows, a.seed);
  return o;
}

Outcome run_volume(const std::string& spec, double r) {
  const Space space = parse_space_spec(spec);
  Outcome o;
  o.result["space"] = space_spec(space);
  o.result["r"] = r;
  o.result["volume"] = ball_volume(space, r);
  return o;
}

std::string join(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << text;
    if (!f.flush()) throw InputError("cannot write '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot write '" + path + "': " + ec.message());
}

class ToleranceGuard {
 public:
  ToleranceGuard() : saved_(tolerance()) {}
  ~ToleranceGuard() { set_tolerance(saved_); }

 private:
  Tolerance saved_;
};

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ToleranceGuard guard;
  CLI::App app{"Besicovitch covering toolkit", "besicover"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  bool timing = false;
  std::optional<double> tol;
  app.add_option("--out", out_path, "Write the report to this file");
  app.add_flag("--timing", timing, "Add wall time to the report");
  app.add_option("--tol", tol, "Absolute and relative predicate tolerance")->check(CLI::PositiveNumber);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check a scene against a configuration definition");
  validate->add_option("scene", va.scene)->required();
  validate->add_option("--what", va.what)->check(CLI::IsMember({"besicovitch", "alpha-config", "satellite", "k-config"}));
  validate->add_option("--alpha", va.alpha);
  validate->add_option("--tau", va.tau);

  std::string scene_path;
  double beta = 0.5;
  auto* select = app.add_subcommand("select", "Bounded-overlap subcover of the scene's balls");
  select->add_option("scene", scene_path)->required();
  select->add_option("--beta", beta);

  double alpha = 0.75;
  auto* partition = app.add_subcommand("partition", "Split the scene's balls into disjoint families");
  partition->add_option("scene", scene_path)->required();
  partition->add_option("--alpha", alpha);

  std::string method = "greedy";
  auto* oned = app.add_subcommand("oned", "Two disjoint interval families covering all centers");
  oned->add_option("scene", scene_path)->required();
  oned->add_option("--method", method)->check(CLI::IsMember({"greedy", "anchored"}));

  double eps = 1.0;
  bool strict = false;
  auto* net = app.add_subcommand("net", "Greedy eps-net of the scene's points (or centers)");
  net->add_option("scene", scene_path)->required();
  net->add_option("--eps", eps)->required();
  net->add_flag("--strict", strict);

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Configuration searches");
  search->add_option("--what", sa.what)->check(CLI::IsMember({"wbcp", "hadwiger", "pack5", "satellite"}));
  search->add_option("--dim", sa.dim);
  search->add_option("--space", sa.space, "kind:dim[:param]; overrides --dim");
  search->add_option("--budget", sa.budget);
  search->add_option("--restarts", sa.restarts);
  search->add_option("--seed", sa.seed);
  search->add_option("--rmin", sa.rmin);
  search->add_option("--rmax", sa.rmax);
  search->add_option("--size", sa.size, "Fixed family size (wbcp)");
  search->add_option("--tau", sa.tau);
  search->add_option("--lambda", sa.lambda);

  CipArgs ca;
  auto* cip = app.add_subcommand("cip", "Contraction check on a scene, or Monte Carlo without one");
  cip->add_option("scene", ca.scene);
  cip->add_option("--m", ca.m);
  cip->add_option("--shrink", ca.shrink);
  cip->add_option("--trials", ca.trials);
  cip->add_option("--seed", ca.seed);

  ConstantsArgs ka;
  auto* constants = app.add_subcommand("constants", "Reference constants against achieved lower bounds");
  constants->add_option("--dims", ka.dims)->delimiter(',');
  constants->add_option("--seed", ka.seed);
  constants->add_option("--budget", ka.budget);
  constants->add_option("--format", ka.format)->check(CLI::IsMember({"json", "markdown"}));

  std::string space_arg;
  double radius = 1.0;
  auto* volume = app.add_subcommand("volume", "Volume of a geodesic ball");
  volume->add_option("--space", space_arg)->required();
  volume->add_option("--r", radius)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (tol) set_tolerance(Tolerance{*tol, *tol});
    std::optional<Input> input;
    Outcome o;
    if (*validate) {
      input = read_input(va.scene);
      o = run_validate(va, *input);
    } else if (*select) {
      input = read_input(scene_path);
      o = run_select(beta, *input);
    } else if (*partition) {
      input = read_input(scene_path);
      o = run_partition(alpha, *input);
    } else if (*oned) {
      input = read_input(scene_path);
      o = run_oned(method, *input);
    } else if (*net) {
      input = read_input(scene_path);
      o = run_net(eps, strict, *input);
    } else if (*search) {
      o = run_search(sa);
    } else if (*cip) {
      if (!ca.scene.empty()) input = read_input(ca.scene);
      o = run_cip(ca, input);
    } else if (*constants) {
      o = run_constants(ka);
    } else {
      o = run_volume(space_arg, radius);
    }

    std::string text;
    if (!o.text.empty()) {
      text = o.text;
      if (!o.ok) text += "chain check failed\n";
    } else {
      Json report;
      report["tool"] = "besicover";
      report["tool_version"] = kToolVersion;
      report["command"] = join(args);
      report["input_digest"] = input ? Json("fnv1a64:" + hex64(fnv1a64(input->bytes))) : Json(nullptr);
      report["seed"] = o.seed ? Json(*o.seed) : Json(nullptr);
      if (tol) report["tolerance"] = *tol;
      report["status"] = o.ok ? "ok" : "violation";
      report["result"] = o.result;
      if (timing) {
        report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
      text = report.dump(2) + "\n";
    }
    if (out_path.empty()) {
      out << text;
    } else {
      write_atomically(out_path, text);
    }
    return o.ok ? kExitOk : kExitViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    err << "internal check failed: " << e.what() << "\n";
    return kExitViolation;
  }
}

}  // namespace besicover
