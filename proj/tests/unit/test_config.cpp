#include <cmath>
#include <string>

#include "catch_amalgamated.hpp"
#include "vibctl/cli/config.hpp"
#include "vibctl/units.hpp"

using namespace vibctl::cli;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("Configuration text with units and comments", "[config]") {
  const auto c = parse_config(R"(
# chessboard control scan
[control]
intensity = 5e13 W/cm2
fwhm = 5 fs       ; intensity FWHM
tau = 0.293 ps
carrier_phase = 90 deg

[propagation]
dt = 0.02 fs
absorber = off

[scan]
states = 12
method = window

[model]
clock_taus = 293, 306 fs
)", "run.cfg");
  REQUIRE(c.control.intensity_w_cm2 == 5e13);
  REQUIRE(c.control.fwhm_fs == 5.0);
  REQUIRE(c.control.tau_fs == Approx(293.0));
  REQUIRE(c.control.carrier_phase == Approx(vibctl::units::kPi / 2));
  REQUIRE(c.propagation.dt_au == Approx(0.02 / vibctl::units::kFsPerAu));
  REQUIRE_FALSE(c.propagation.absorber);
  REQUIRE(c.scan.states == 12);
  REQUIRE(c.scan.method == "window");
  REQUIRE(c.model.clock_taus == std::vector<double>{293.0, 306.0});
  REQUIRE(c.sections.count("control"));
  REQUIRE_FALSE(c.sections.count("probe"));
  REQUIRE(c.origins.at("control.tau") == "run.cfg:6");
  // Untouched keys keep their defaults.
  REQUIRE(c.probe.intensity_w_cm2 == 4e14);
  REQUIRE(c.grid.points == 2048);
  REQUIRE_NOTHROW(validate(c));
}

TEST_CASE("Configuration errors name the line", "[config]") {
  REQUIRE_THROWS_WITH(parse_config("[control]\nfwhm = 5 ns\n", "a.cfg"),
                      ContainsSubstring("a.cfg:2") && ContainsSubstring("bad unit 'ns'"));
  REQUIRE_THROWS_WITH(parse_config("[control]\nfwhm_fs = 5\n", "a.cfg"),
                      ContainsSubstring("a.cfg:2") && ContainsSubstring("unknown key 'fwhm_fs'"));
  REQUIRE_THROWS_WITH(parse_config("\n\n[laser]\n", "a.cfg"),
                      ContainsSubstring("a.cfg:3") && ContainsSubstring("unknown section [laser]"));
  REQUIRE_THROWS_WITH(parse_config("[control]\ntau = 1\ntau = 2\n", "a.cfg"),
                      ContainsSubstring("a.cfg:3") && ContainsSubstring("duplicate key"));
  REQUIRE_THROWS_WITH(parse_config("[scan]\nstates = 2.5\n", "a.cfg"),
                      ContainsSubstring("non-negative integer"));
  REQUIRE_THROWS_WITH(parse_config("[control]\nfwhm = five\n", "a.cfg"),
                      ContainsSubstring("is not a number"));
  REQUIRE_THROWS_WITH(parse_config("fwhm = 5\n", "a.cfg"), ContainsSubstring("outside any section"));
  REQUIRE_THROWS_WITH(parse_config("[control\n", "a.cfg"), ContainsSubstring("malformed section"));
  REQUIRE_THROWS_WITH(parse_config("[propagation]\nabsorber = maybe\n", "a.cfg"),
                      ContainsSubstring("expected true or false"));
  REQUIRE_THROWS_AS(load_config_file("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("Validation reports where a bad value came from", "[config]") {
  auto c = parse_config("[control]\nfwhm = -5\n", "run.cfg");
  REQUIRE_THROWS_WITH(validate(c), ContainsSubstring("run.cfg:2") &&
                                       ContainsSubstring("control.fwhm must be positive"));

  RunConfig d;
  apply_setting(d, "grid.points", "1000", "--set");
  REQUIRE_THROWS_WITH(validate(d), ContainsSubstring("--set") && ContainsSubstring("power of two"));

  RunConfig e;
  apply_setting(e, "scan.method", "fast", "--method");
  REQUIRE_THROWS_WITH(validate(e), ContainsSubstring("--method"));

  RunConfig w;
  apply_setting(w, "pump.mode", "weighted", "--set");
  REQUIRE_THROWS_WITH(validate(w), ContainsSubstring("weight_file"));

  REQUIRE_THROWS_AS(apply_setting(d, "control", "1", "--set"), ConfigError);
  REQUIRE_THROWS_AS(apply_setting(d, "control.bogus", "1", "--set"), ConfigError);
  REQUIRE_THROWS_AS(require_section(RunConfig{}, "control", "scan-control"), ConfigError);
}

TEST_CASE("Echoed configuration reproduces the run", "[config]") {
  RunConfig c;
  apply_setting(c, "control.tau", "0.306 ps", "--set");
  apply_setting(c, "propagation.dt", "0.013 fs", "--set");
  apply_setting(c, "model.clock_states", "2, 4, 6", "--set");
  apply_setting(c, "pump.ground_well_depth", "4.7 eV", "--set");
  const auto text = echo_config(c);
  const auto back = parse_config(text, "echo");
  REQUIRE(echo_config(back) == text);
  REQUIRE(back.control.tau_fs == c.control.tau_fs);
  REQUIRE(back.propagation.dt_au == c.propagation.dt_au);
  REQUIRE(back.pump.ground_well_depth == c.pump.ground_well_depth);
  REQUIRE(config_entries(back).at("control").at("tau") == "306 fs");
}
