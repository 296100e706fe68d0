#pragma once

// Scene files: flat sections of typed key = value lines.
//
//   # comment
//   [geometry]
//   kind = "cusp"
//   exponent = 0.5
//   centre = [0, 0, 1.5]
//
// Values are quoted strings, numbers, true/false, or bracketed arrays of
// numbers or of strings. Keys are addressed as "section.key".

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bicap/biharm.hpp"
#include "bicap/models.hpp"
#include "bicap/wiener.hpp"

namespace bicap {

struct SceneError : std::runtime_error {
  SceneError(const std::string& key, const std::string& what)
      : std::runtime_error(key.empty() ? what : "scene key '" + key + "': " + what), key(key) {}
  std::string key;  // "section.key", empty for errors not tied to a key
};

using SceneValue =
    std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>>;

class Scene {
 public:
  Scene() = default;
  /// Throws SceneError with the line number for malformed input.
  static Scene parse(std::string_view text, const std::string& origin = "<scene>");
  /// Throws SceneError if the file cannot be read.
  static Scene load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, SceneValue>& values() const { return values_; }
  std::vector<std::string> keys(const std::string& section) const;
  const std::string& text() const { return text_; }
  const std::string& origin() const { return origin_; }
  /// FNV-1a 64 of the raw text, as 16 hex digits.
  std::string hash() const;

  // Typed access; a missing key yields the fallback, or throws SceneError
  // naming the key when there is none. Wrong types always throw.
  double number(const std::string& key, std::optional<double> fallback = std::nullopt) const;
  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) const;
  bool flag(const std::string& key, std::optional<bool> fallback = std::nullopt) const;
  std::string text(const std::string& key, std::optional<std::string> fallback) const;
  std::vector<double> numbers(const std::string& key,
                              std::optional<std::vector<double>> fallback = std::nullopt) const;

  /// Throws SceneError naming the first key of `section` not in `allowed`.
  void expect_keys(const std::string& section, const std::vector<std::string>& allowed) const;

  void set(const std::string& key, SceneValue v) { values_[key] = std::move(v); }

 private:
  const SceneValue& lookup(const std::string& key) const;

  std::map<std::string, SceneValue> values_;
  std::string text_;
  std::string origin_;
};

std::string scene_hash(std::string_view text);

// Builders from the [geometry], [domain], [solver], [load] and [green]
// sections. Each validates ranges and reports the offending key.

CompactumSpec compactum_from_scene(const Scene& s);
CapacityDomain capacity_domain_from_scene(const Scene& s, const CompactumSpec& k);
CuspProfile cusp_from_scene(const Scene& s);

/// Layer family for the wiener pipeline. Kinds: cusp (layer j of the
/// profile at unit scale), cone (the thickened cone section in every
/// layer), shell (a holed shell in every or every other layer).
struct SceneLayers {
  LayerFamily family;
  int j_min = 0;
  std::string description;
};
SceneLayers layers_from_scene(const Scene& s, double a);

VoxelDomain voxel_domain_from_scene(const Scene& s, int n, std::uint64_t seed);
/// Right-hand side of the Dirichlet problem, zero off the domain.
VoxelField load_from_scene(const Scene& s, const VoxelDomain& d);

}  // namespace bicap
