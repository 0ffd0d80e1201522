#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "besicover/kernel.hpp"

namespace besicover {

constexpr int kSceneVersion = 1;

// Input document: a space, a ball family and optional extras.
struct SceneFile {
  Space space;
  std::vector<Ball> balls;
  std::vector<Point> points;
  std::vector<QuasiRoundSet> sets;
  std::optional<Ball> target;  // for alpha-configuration checks

  BallFamily family() const { return BallFamily{space, balls, {}}; }

  friend bool operator==(const SceneFile&, const SceneFile&) = default;
};

// Throws InputError naming the offending entry.
SceneFile parse_scene(std::string_view text);
SceneFile load_scene(const std::string& path);
// Two-space indented JSON, shortest round-trip numbers.
std::string serialize_scene(const SceneFile& scene);

// "euclidean:2", "euclidean:3:1.5", "sphere:2", "sphere:2:3.0", "hyperbolic:2".
Space parse_space_spec(const std::string& spec);
std::string space_spec(const Space& space);

// FNV-1a, 64 bit.
uint64_t fnv1a64(std::string_view bytes);

}  // namespace besicover
