#include "bicap/scene.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bicap {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

// Comment start outside quotes, or npos.
std::size_t comment_start(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return i;
    }
  }
  return std::string_view::npos;
}

class ValueParser {
 public:
  ValueParser(std::string_view s, std::string where) : s_(s), where_(std::move(where)) {}

  SceneValue parse() {
    skip();
    SceneValue v;
    if (peek() == '[') {
      v = array();
    } else if (peek() == '"') {
      v = string();
    } else {
      v = scalar_word();
    }
    skip();
    if (pos_ != s_.size()) fail("trailing characters after the value");
    return v;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const { throw SceneError(where_, what); }

  std::string string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') {
        if (++pos_ >= s_.size()) break;
        const char c = s_[pos_];
        if (c == 'n') out += '\n';
        else if (c == 't') out += '\t';
        else out += c;
      } else {
        out += s_[pos_];
      }
      ++pos_;
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::string_view word() {
    const std::size_t b = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != ' ' &&
           s_[pos_] != '\t') {
      ++pos_;
    }
    return s_.substr(b, pos_ - b);
  }

  double number(std::string_view w) const {
    double v = 0.0;
    const char* first = w.data();
    if (!w.empty() && w.front() == '+') ++first;
    const auto [end, ec] = std::from_chars(first, w.data() + w.size(), v);
    if (ec != std::errc() || end != w.data() + w.size() || w.empty()) {
      fail("expected a number, a quoted string, true/false or an array, got '" + std::string(w) + "'");
    }
    if (!std::isfinite(v)) fail("number is not finite");
    return v;
  }

  SceneValue scalar_word() {
    const std::string_view w = word();
    if (w == "true") return true;
    if (w == "false") return false;
    return number(w);
  }

  SceneValue array() {
    ++pos_;
    std::vector<double> nums;
    std::vector<std::string> strs;
    skip();
    if (peek() == ']') {
      ++pos_;
      return nums;
    }
    for (;;) {
      skip();
      if (peek() == '"') {
        if (!nums.empty()) fail("array mixes numbers and strings");
        strs.push_back(string());
      } else {
        if (!strs.empty()) fail("array mixes numbers and strings");
        nums.push_back(number(word()));
      }
      skip();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ']') {
        ++pos_;
        break;
      }
      fail("expected ',' or ']' in array");
    }
    if (!strs.empty()) return strs;
    return nums;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::string where_;
};

const char* type_name(const SceneValue& v) {
  switch (v.index()) {
    case 0: return "number";
    case 1: return "boolean";
    case 2: return "string";
    case 3: return "number array";
    default: return "string array";
  }
}

Vec3 vec3(const Scene& s, const std::string& key, std::optional<Vec3> fallback = std::nullopt) {
  if (!s.has(key) && fallback) return *fallback;
  const auto v = s.numbers(key);
  if (v.size() != 3) throw SceneError(key, "expected 3 numbers");
  return {v[0], v[1], v[2]};
}

double positive(const Scene& s, const std::string& key, std::optional<double> fallback = std::nullopt) {
  const double v = s.number(key, fallback);
  if (!(v > 0.0)) throw SceneError(key, "must be positive");
  return v;
}

}  // namespace

Scene Scene::parse(std::string_view text, const std::string& origin) {
  Scene sc;
  sc.text_ = std::string(text);
  sc.origin_ = origin;
  std::string section;
  std::istringstream in(sc.text_);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    std::string_view line(raw);
    if (const auto c = comment_start(line); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw SceneError("", where + ": malformed section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!is_identifier(name)) throw SceneError("", where + ": invalid section name");
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw SceneError("", where + ": expected 'key = value'");
    const std::string_view name = trim(line.substr(0, eq));
    if (!is_identifier(name)) {
      throw SceneError("", where + ": invalid key '" + std::string(name) + "'");
    }
    if (section.empty()) {
      throw SceneError(std::string(name), where + ": key outside a [section]");
    }
    const std::string key = section + "." + std::string(name);
    if (sc.values_.count(key)) throw SceneError(key, where + ": duplicate key");
    sc.values_[key] = ValueParser(line.substr(eq + 1), key).parse();
  }
  return sc;
}

Scene Scene::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneError("", "cannot read scene file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

std::vector<std::string> Scene::keys(const std::string& section) const {
  std::vector<std::string> out;
  const std::string prefix = section + ".";
  for (const auto& [k, v] : values_) {
    if (k.compare(0, prefix.size(), prefix) == 0) out.push_back(k.substr(prefix.size()));
  }
  return out;
}

std::string scene_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string Scene::hash() const { return scene_hash(text_); }

const SceneValue& Scene::lookup(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw SceneError(key, "missing");
  return it->second;
}

double Scene::number(const std::string& key, std::optional<double> fallback) const {
  if (!has(key) && fallback) return *fallback;
  const SceneValue& v = lookup(key);
  if (const double* d = std::get_if<double>(&v)) return *d;
  throw SceneError(key, std::string("expected a number, got a ") + type_name(v));
}

int Scene::integer(const std::string& key, std::optional<int> fallback) const {
  if (!has(key) && fallback) return *fallback;
  const double d = number(key);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw SceneError(key, "expected an integer");
  return static_cast<int>(d);
}

bool Scene::flag(const std::string& key, std::optional<bool> fallback) const {
  if (!has(key) && fallback) return *fallback;
  const SceneValue& v = lookup(key);
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  throw SceneError(key, std::string("expected true or false, got a ") + type_name(v));
}

std::string Scene::text(const std::string& key, std::optional<std::string> fallback) const {
  if (!has(key) && fallback) return *fallback;
  const SceneValue& v = lookup(key);
  if (const std::string* s = std::get_if<std::string>(&v)) return *s;
  throw SceneError(key, std::string("expected a string, got a ") + type_name(v));
}

std::vector<double> Scene::numbers(const std::string& key,
                                   std::optional<std::vector<double>> fallback) const {
  if (!has(key) && fallback) return *fallback;
  const SceneValue& v = lookup(key);
  if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
  if (const double* d = std::get_if<double>(&v)) return {*d};
  throw SceneError(key, std::string("expected a number array, got a ") + type_name(v));
}

void Scene::expect_keys(const std::string& section, const std::vector<std::string>& allowed) const {
  for (const auto& k : keys(section)) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == k;
    if (!ok) throw SceneError(section + "." + k, "unknown key");
  }
}

// ---------------------------------------------------------------------------

CuspProfile cusp_from_scene(const Scene& s) {
  const std::string family = s.text("geometry.family", std::nullopt);
  try {
    CuspProfile p;
    if (family == "power") {
      p = CuspProfile::power(s.number("geometry.coefficient", 1.0), s.number("geometry.exponent"),
                             s.number("geometry.c", 1.0));
    } else if (family == "inverse_log") {
      p = CuspProfile::inverse_log(s.number("geometry.exponent"), s.number("geometry.c", 0.5));
    } else {
      throw SceneError("geometry.family", "expected \"power\" or \"inverse_log\", got \"" + family + "\"");
    }
    p.validate();
    return p;
  } catch (const std::invalid_argument& e) {
    throw SceneError("geometry.exponent", e.what());
  }
}

CompactumSpec compactum_from_scene(const Scene& s) {
  const std::string kind = s.text("geometry.kind", std::nullopt);
  if (kind == "ball") {
    s.expect_keys("geometry", {"kind", "centre", "radius"});
    return CompactumSpec(BallShape{vec3(s, "geometry.centre"), positive(s, "geometry.radius")});
  }
  if (kind == "shell") {
    s.expect_keys("geometry", {"kind", "r_inner", "r_outer", "opening"});
    ShellShape sh{positive(s, "geometry.r_inner"), positive(s, "geometry.r_outer"),
                  s.number("geometry.opening", 0.0)};
    if (!(sh.r_outer > sh.r_inner)) throw SceneError("geometry.r_outer", "must exceed r_inner");
    if (sh.opening < 0.0 || sh.opening >= kPi) throw SceneError("geometry.opening", "must lie in [0, pi)");
    return CompactumSpec(sh);
  }
  if (kind == "cone") {
    s.expect_keys("geometry", {"kind", "b", "r_inner", "r_outer", "thickness"});
    const auto b = s.numbers("geometry.b");
    if (b.size() != 4) throw SceneError("geometry.b", "expected 4 numbers");
    ConeSectionShape c{{b[0], b[1], b[2], b[3]}, positive(s, "geometry.r_inner"),
                       positive(s, "geometry.r_outer"), s.number("geometry.thickness", 0.0)};
    if (!(c.r_outer > c.r_inner)) throw SceneError("geometry.r_outer", "must exceed r_inner");
    if (c.thickness < 0.0) throw SceneError("geometry.thickness", "must be nonnegative");
    return CompactumSpec(c);
  }
  if (kind == "points") {
    s.expect_keys("geometry", {"kind", "points", "radii"});
    const auto p = s.numbers("geometry.points");
    if (p.empty() || p.size() % 3 != 0) throw SceneError("geometry.points", "expected 3 numbers per point");
    PointSetShape ps;
    for (std::size_t i = 0; i < p.size(); i += 3) ps.points.push_back({p[i], p[i + 1], p[i + 2]});
    ps.radii = s.numbers("geometry.radii", std::vector<double>{});
    if (!ps.radii.empty() && ps.radii.size() != ps.points.size()) {
      throw SceneError("geometry.radii", "expected one radius per point");
    }
    return CompactumSpec(ps);
  }
  if (kind == "cusp") {
    s.expect_keys("geometry", {"kind", "family", "coefficient", "exponent", "c", "s", "a"});
    const CuspProfile h = cusp_from_scene(s);
    const double sc = positive(s, "geometry.s", 0.25);
    const double a = s.number("geometry.a", 2.0);
    if (!(a > 1.0)) throw SceneError("geometry.a", "must exceed 1");
    if (!(a * sc <= h.c)) throw SceneError("geometry.s", "layer leaves the profile's domain (0, c)");
    return CompactumSpec(CuspLayerShape{h.h, sc, a});
  }
  if (kind == "mask") {
    s.expect_keys("geometry", {"kind", "file", "threshold"});
    const std::string path = s.text("geometry.file", std::nullopt);
    if (!std::filesystem::exists(path)) throw SceneError("geometry.file", "file '" + path + "' does not exist");
    const double thr = s.number("geometry.threshold", 0.5);
    const VoxelField f = read_field(path);
    VoxelMaskShape m{f.grid, std::vector<std::uint8_t>(f.size(), 0)};
    for (std::size_t i = 0; i < f.size(); ++i) m.mask[i] = f[i] > thr;
    return CompactumSpec(m);
  }
  throw SceneError("geometry.kind", "unknown kind \"" + kind + "\"");
}

CapacityDomain capacity_domain_from_scene(const Scene& s, const CompactumSpec& k) {
  const std::string kind = s.text("domain.kind", "annulus");
  if (kind == "annulus") {
    s.expect_keys("domain", {"kind", "r_inner", "r_outer"});
    const auto [lo, hi] = k.bounding_radii();
    AnnulusDomain d{s.number("domain.r_inner", lo / 2.0), s.number("domain.r_outer", 2.0 * hi)};
    if (!(d.r_inner > 0.0) || !(d.r_outer > d.r_inner)) {
      throw SceneError("domain.r_outer", "annulus needs 0 < r_inner < r_outer");
    }
    return d;
  }
  if (kind == "box") {
    s.expect_keys("domain", {"kind", "half_width", "centre", "puncture"});
    return BoxDomain{positive(s, "domain.half_width"), vec3(s, "domain.centre", Vec3{0, 0, 0}),
                     s.flag("domain.puncture", true)};
  }
  if (kind == "slab") {
    s.expect_keys("domain", {"kind", "lo", "hi", "puncture"});
    SlabDomain d{vec3(s, "domain.lo"), vec3(s, "domain.hi"), s.flag("domain.puncture", true)};
    for (int a = 0; a < 3; ++a) {
      if (!(d.hi[a] > d.lo[a])) throw SceneError("domain.hi", "must exceed lo in every coordinate");
    }
    return d;
  }
  throw SceneError("domain.kind", "unknown kind \"" + kind + "\"");
}

SceneLayers layers_from_scene(const Scene& s, double a) {
  const std::string kind = s.text("geometry.kind", std::nullopt);
  SceneLayers out;
  if (kind == "cusp") {
    s.expect_keys("geometry", {"kind", "family", "coefficient", "exponent", "c"});
    const CuspProfile h = cusp_from_scene(s);
    // First layer [a^-j, a^-j+1] inside (0, c].
    out.j_min = static_cast<int>(std::ceil(1.0 - std::log(h.c) / std::log(a) - 1e-12));
    auto fn = h.h;
    out.family = [fn, a](int j) -> std::optional<CompactumSpec> {
      const double s0 = std::pow(a, -j);
      return CompactumSpec(CuspLayerShape{[fn, s0](double r) { return fn(s0 * r); }, 1.0, a});
    };
    out.description = "cusp layers, " + s.text("geometry.family", std::nullopt) + " profile";
  } else if (kind == "cone") {
    s.expect_keys("geometry", {"kind", "b", "thickness"});
    const auto b = s.numbers("geometry.b");
    if (b.size() != 4) throw SceneError("geometry.b", "expected 4 numbers");
    const double th = s.number("geometry.thickness", 0.0);
    if (th < 0.0) throw SceneError("geometry.thickness", "must be nonnegative");
    ConeSectionShape c{{b[0], b[1], b[2], b[3]}, 1.0, a, th};
    out.j_min = 1;
    out.family = [c](int) -> std::optional<CompactumSpec> { return CompactumSpec(c); };
    out.description = "cone section in every layer";
  } else if (kind == "shell") {
    s.expect_keys("geometry", {"kind", "inner", "outer", "opening", "pattern"});
    const double in = s.number("geometry.inner", 1.0 + 0.25 * (a - 1.0));
    const double outer = s.number("geometry.outer", 1.0 + 0.75 * (a - 1.0));
    if (!(in >= 1.0 && outer > in && outer <= a)) {
      throw SceneError("geometry.outer", "shell must satisfy 1 <= inner < outer <= a");
    }
    const double opening = s.number("geometry.opening", 0.0);
    const std::string pattern = s.text("geometry.pattern", "every");
    if (pattern != "every" && pattern != "alternate") {
      throw SceneError("geometry.pattern", "expected \"every\" or \"alternate\"");
    }
    const bool alt = pattern == "alternate";
    out.j_min = 1;
    out.family = [in, outer, opening, alt](int j) -> std::optional<CompactumSpec> {
      if (alt && j % 2 != 0) return std::nullopt;
      return CompactumSpec(ShellShape{in, outer, opening});
    };
    out.description = "shells, " + pattern + " layer";
  } else {
    throw SceneError("geometry.kind", "the wiener pipeline needs kind cusp, cone or shell, got \"" + kind + "\"");
  }
  if (s.has("task.j_min")) out.j_min = s.integer("task.j_min");
  return out;
}

VoxelDomain voxel_domain_from_scene(const Scene& s, int n, std::uint64_t seed) {
  const std::string kind = s.text("domain.kind", "punctured_ball");
  if (n < 8) throw SceneError("solver.grid", "at least 8 cells are required");
  if (kind == "punctured_ball") {
    s.expect_keys("domain", {"kind"});
    return punctured_ball_domain(n);
  }
  if (kind == "box") {
    s.expect_keys("domain", {"kind", "half_width"});
    return box_domain(positive(s, "domain.half_width", 1.0), n);
  }
  if (kind == "blob") {
    s.expect_keys("domain", {"kind", "seed"});
    const int sd = s.integer("domain.seed", static_cast<int>(seed));
    if (sd < 0) throw SceneError("domain.seed", "must be nonnegative");
    return blob_domain(static_cast<std::uint64_t>(sd), n);
  }
  throw SceneError("domain.kind", "unknown voxel domain \"" + kind + "\"");
}

VoxelField load_from_scene(const Scene& s, const VoxelDomain& d) {
  const std::string kind = s.text("load.kind", "gaussian");
  VoxelField f(d.grid);
  if (kind == "gaussian") {
    s.expect_keys("load", {"kind", "centre", "width", "amplitude"});
    const Vec3 c = vec3(s, "load.centre", Vec3{0.3, 0.0, 0.0});
    const double w = positive(s, "load.width", 0.1);
    const double amp = s.number("load.amplitude", 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!d.mask[i]) continue;
      const Vec3 x = d.grid.node(i) - c;
      f[i] = amp * std::exp(-dot(x, x) / (2.0 * w * w));
    }
  } else if (kind == "constant") {
    s.expect_keys("load", {"kind", "value"});
    const double v = s.number("load.value", 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = d.mask[i] ? v : 0.0;
  } else {
    throw SceneError("load.kind", "unknown load \"" + kind + "\"");
  }
  return f;
}

}  // namespace bicap
