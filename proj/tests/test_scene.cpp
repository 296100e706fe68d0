#include <doctest.h>

#include <string>

#include "bicap/scene.hpp"

using namespace bicap;

namespace {

std::string error_key(const std::string& text) {
  try {
    const Scene s = Scene::parse(text);
    compactum_from_scene(s);
  } catch (const SceneError& e) {
    return e.key;
  }
  return "";
}

}  // namespace

TEST_CASE("typed values") {
  const Scene s = Scene::parse(R"(# header
[geometry]
kind = "ball"   # trailing
centre = [0, 0, 1.5]
radius = 0.25
[solver]
flag = true
names = ["a", "b # not a comment"]
count = 12
)");
  CHECK(s.text("geometry.kind", std::nullopt) == "ball");
  CHECK(s.numbers("geometry.centre") == std::vector<double>{0.0, 0.0, 1.5});
  CHECK(s.number("geometry.radius") == 0.25);
  CHECK(s.flag("solver.flag"));
  CHECK(s.integer("solver.count") == 12);
  CHECK(std::get<std::vector<std::string>>(s.values().at("solver.names"))[1] == "b # not a comment");
  CHECK(s.keys("geometry") == std::vector<std::string>{"centre", "kind", "radius"});
  CHECK(s.number("solver.tol", 1e-8) == 1e-8);
  CHECK_THROWS_AS(s.number("solver.tol"), SceneError);
  CHECK_THROWS_AS(s.number("geometry.kind"), SceneError);
  CHECK_THROWS_AS(s.integer("geometry.radius"), SceneError);
  const CompactumSpec k = compactum_from_scene(s);
  CHECK(k.kind() == "ball");
}

TEST_CASE("syntax errors") {
  CHECK_THROWS_AS(Scene::parse("x = 1\n"), SceneError);
  CHECK_THROWS_AS(Scene::parse("[a]\nx = 1\nx = 2\n"), SceneError);
  CHECK_THROWS_AS(Scene::parse("[a\n"), SceneError);
  CHECK_THROWS_AS(Scene::parse("[a]\nx = \"open\n"), SceneError);
  CHECK_THROWS_AS(Scene::parse("[a]\nx = [1, 2\n"), SceneError);
  CHECK_THROWS_AS(Scene::parse("[a]\nx 1\n"), SceneError);
  CHECK_THROWS_AS(Scene::load("/nonexistent/scene"), SceneError);
}

TEST_CASE("semantic errors name the key") {
  CHECK(error_key("[geometry]\nkind = \"ball\"\ncentre = [0, 0, 1]\nradius = \"large\"\n") == "geometry.radius");
  CHECK(error_key("[geometry]\nkind = \"ball\"\ncentre = [0, 0]\nradius = 1\n") == "geometry.centre");
  CHECK(error_key("[geometry]\nkind = \"ball\"\ncentre = [0, 0, 1]\nradius = -1\n") == "geometry.radius");
  CHECK(error_key("[geometry]\nkind = \"ball\"\ncentre = [0, 0, 1]\nradius = 1\ncolour = 2\n") == "geometry.colour");
  CHECK(error_key("[geometry]\nkind = \"torus\"\n") == "geometry.kind");
  CHECK(error_key("[geometry]\nkind = \"shell\"\nr_inner = 2\nr_outer = 1\n") == "geometry.r_outer");
  CHECK(error_key("[geometry]\nkind = \"cusp\"\nfamily = \"power\"\nexponent = 0.5\ns = 0.6\n") == "geometry.s");
  try {
    Scene::parse("[geometry]\nradius = \"large\"\n").number("geometry.radius");
  } catch (const SceneError& e) {
    CHECK(std::string(e.what()).find("geometry.radius") != std::string::npos);
  }
}

TEST_CASE("hash is stable and content sensitive") {
  CHECK(scene_hash("") == "cbf29ce484222325");
  CHECK(scene_hash("a") == "af63dc4c8601ec8c");
  const Scene a = Scene::parse("[x]\ny = 1\n");
  const Scene b = Scene::parse("[x]\ny = 2\n");
  CHECK(a.hash() != b.hash());
  CHECK(a.hash().size() == 16);
}

TEST_CASE("builders") {
  const Scene s = Scene::parse(R"([geometry]
kind = "cusp"
family = "inverse_log"
exponent = 0.5
c = 0.5
[domain]
kind = "annulus"
)");
  const CuspProfile h = cusp_from_scene(s);
  CHECK(h.family == CuspFamily::InverseLog);
  CHECK(h.c == 0.5);
  const SceneLayers l = layers_from_scene(s, 2.0);
  CHECK(l.j_min == 2);  // a^(1 - j) <= c
  CHECK(l.family(3).has_value());
  const Scene box = Scene::parse("[domain]\nkind = \"box\"\nhalf_width = 1\n");
  const VoxelDomain d = voxel_domain_from_scene(box, 16, 1);
  CHECK(d.grid.dims()[0] == d.grid.dims()[2]);
  CHECK(d.mask.size() == d.grid.size());
}
