#include <doctest.h>

#include "lapnum/config.hpp"

#include <string>

using namespace lapnum;

TEST_CASE("config: typed lookups, defaults and dotted overrides") {
  Config cfg = load_config_text("grid:\n  extent: 128\n  spacing: 0.25\npotential:\n  name: coulomb_like\n  c: -2\n");
  CHECK(get_double(cfg, "grid.extent", 0.0) == 128.0);
  CHECK(get_int(cfg, "grid.dim", 1) == 1);
  CHECK(get_params(cfg, "potential", {"name"}).at("c") == -2.0);
  apply_override(cfg, "grid.extent=64");
  apply_override(cfg, "suite.eps=[1, 0.1]");
  apply_override(cfg, "suite.lambda.values=2.5");
  CHECK(get_double(cfg, "grid.extent", 0.0) == 64.0);
  CHECK(get_doubles(cfg, "suite.eps", {}) == std::vector<double>{1.0, 0.1});
  CHECK(get_double(cfg, "suite.lambda.values", 0.0) == 2.5);
  CHECK(get_double(cfg, "grid.spacing", 0.0) == 0.25);
  const RadialGrid g = grid_from(cfg);
  CHECK(g.extent == doctest::Approx(64.0));
  CHECK(potential_from(cfg).name == "coulomb_like");
}

TEST_CASE("config: diagnostics carry the field and line") {
  const Config cfg = load_config_text("grid:\n  extent: wide\n", "cfg.yaml");
  try {
    get_double(cfg, "grid.extent", 1.0);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cfg.yaml:2") != std::string::npos);
    CHECK(msg.find("grid.extent") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config_text("grid: [1, 2\n"), ConfigError);
  CHECK_THROWS_AS(load_config_text("gird:\n  extent: 1\n"), ConfigError);
  Config ok = load_config_text("grid:\n  extent: 1\n");
  CHECK_THROWS_AS(apply_override(ok, "grid.extent"), ConfigError);
  CHECK_THROWS_AS(apply_override(ok, "grid.extent.x=1"), ConfigError);
}

TEST_CASE("config: snapshot round-trips") {
  Config cfg = load_config_text("potential:\n  name: well\n  depth: 5\n");
  apply_override(cfg, "potential.depth=3");
  const Config back = load_config_text(snapshot(cfg));
  CHECK(get_double(back, "potential.depth", 0.0) == 3.0);
  CHECK(get_string(back, "potential.name", "") == "well");
}
