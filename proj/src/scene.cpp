#include "besicover/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "besicover/errors.hpp"

namespace besicover {

namespace {

using Json = nlohmann::ordered_json;

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(where + " must be finite");
  return v;
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + " is missing '" + key + "'");
  return *it;
}

Point point(const Json& j, const Space& space, const std::string& where) {
  if (!j.is_array()) throw InputError(where + " must be an array of numbers");
  Point p;
  for (size_t k = 0; k < j.size(); ++k) p.coords.push_back(number(j[k], where + "[" + std::to_string(k) + "]"));
  try {
    validate_point(space, p);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  return p;
}

Space space_of(const Json& j) {
  const std::string kind = field(j, "kind", "space").is_string() ? j["kind"].get<std::string>() : "";
  const Json& dj = field(j, "dim", "space");
  if (!dj.is_number_integer()) throw InputError("space.dim must be an integer");
  const int dim = dj.get<int>();
  if (kind == "euclidean") return Space::euclidean(dim, j.contains("pnorm") ? number(j["pnorm"], "space.pnorm") : 2.0);
  if (kind == "sphere") return Space::sphere(dim, j.contains("radius") ? number(j["radius"], "space.radius") : 1.0);
  if (kind == "hyperbolic") return Space::hyperbolic(dim);
  throw InputError("space.kind must be euclidean, sphere or hyperbolic");
}

Ball ball(const Json& j, const Space& space, const std::string& where) {
  Ball b{point(field(j, "center", where), space, where + ".center"), number(field(j, "radius", where), where + ".radius")};
  try {
    validate_ball(space, b);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  return b;
}

const Json& array_field(const Json& doc, const char* key) {
  const Json& a = doc[key];
  if (!a.is_array()) throw InputError(std::string(key) + " must be an array");
  return a;
}

Json point_json(const Point& p) { return Json(p.coords); }

Json ball_json(const Ball& b) {
  Json j;
  j["center"] = point_json(b.center);
  j["radius"] = b.radius;
  return j;
}

}  // namespace

SceneFile parse_scene(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("scene is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("scene must be a JSON object");
  const Json& version = field(doc, "version", "scene");
  if (!version.is_number_integer() || version.get<int64_t>() != kSceneVersion) {
    throw InputError("scene version must be the integer 1");
  }
  SceneFile scene;
  scene.space = space_of(field(doc, "space", "scene"));
  field(doc, "balls", "scene");
  const Json& balls = array_field(doc, "balls");
  for (size_t i = 0; i < balls.size(); ++i) scene.balls.push_back(ball(balls[i], scene.space, "ball " + std::to_string(i)));
  if (doc.contains("points")) {
    const Json& pts = array_field(doc, "points");
    for (size_t i = 0; i < pts.size(); ++i) scene.points.push_back(point(pts[i], scene.space, "point " + std::to_string(i)));
  }
  if (doc.contains("sets")) {
    const Json& sets = array_field(doc, "sets");
    for (size_t i = 0; i < sets.size(); ++i) {
      const std::string where = "set " + std::to_string(i);
      QuasiRoundSet q;
      q.anchor = point(field(sets[i], "anchor", where), scene.space, where + ".anchor");
      q.inner_radius = number(field(sets[i], "inner_radius", where), where + ".inner_radius");
      q.lambda = number(field(sets[i], "lambda", where), where + ".lambda");
      q.diameter = number(field(sets[i], "diameter", where), where + ".diameter");
      try {
        validate_quasi_round(scene.space, q);
      } catch (const InputError& e) {
        throw InputError(where + ": " + e.what());
      }
      scene.sets.push_back(std::move(q));
    }
  }
  if (doc.contains("target")) scene.target = ball(doc["target"], scene.space, "target");
  return scene;
}

SceneFile load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read scene file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

std::string serialize_scene(const SceneFile& scene) {
  Json doc;
  doc["version"] = kSceneVersion;
  Json space;
  space["kind"] = to_string(scene.space.kind());
  space["dim"] = scene.space.dim();
  if (scene.space.kind() == SpaceKind::euclidean) space["pnorm"] = scene.space.pnorm();
  if (scene.space.kind() == SpaceKind::sphere) space["radius"] = scene.space.radius();
  doc["space"] = space;
  doc["balls"] = Json::array();
  for (const auto& b : scene.balls) doc["balls"].push_back(ball_json(b));
  if (!scene.points.empty()) {
    doc["points"] = Json::array();
    for (const auto& p : scene.points) doc["points"].push_back(point_json(p));
  }
  if (!scene.sets.empty()) {
    doc["sets"] = Json::array();
    for (const auto& s : scene.sets) {
      Json j;
      j["anchor"] = point_json(s.anchor);
      j["inner_radius"] = s.inner_radius;
      j["lambda"] = s.lambda;
      j["diameter"] = s.diameter;
      doc["sets"].push_back(j);
    }
  }
  if (scene.target) doc["target"] = ball_json(*scene.target);
  return doc.dump(2) + "\n";
}

Space parse_space_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() < 2 || parts.size() > 3) throw InputError("space spec must look like kind:dim[:param]");
  int dim = 0;
  double param = 0.0;
  try {
    size_t used = 0;
    dim = std::stoi(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("dim");
    if (parts.size() == 3) {
      param = std::stod(parts[2], &used);
      if (used != parts[2].size()) throw std::invalid_argument("param");
    }
  } catch (const std::logic_error&) {
    throw InputError("space spec '" + spec + "' has a malformed number");
  }
  const SpaceKind kind = space_kind_from_string(parts[0]);
  if (kind == SpaceKind::euclidean) return Space::euclidean(dim, parts.size() == 3 ? param : 2.0);
  if (kind == SpaceKind::sphere) return Space::sphere(dim, parts.size() == 3 ? param : 1.0);
  if (parts.size() == 3) throw InputError("hyperbolic space takes no parameter");
  return Space::hyperbolic(dim);
}

std::string space_spec(const Space& space) {
  std::string s = to_string(space.kind()) + ":" + std::to_string(space.dim());
  std::ostringstream extra;
  extra.precision(17);
  if (space.kind() == SpaceKind::euclidean && space.pnorm() != 2.0) extra << ":" << space.pnorm();
  if (space.kind() == SpaceKind::sphere && space.radius() != 1.0) extra << ":" << space.radius();
  return s + extra.str();
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace besicover
