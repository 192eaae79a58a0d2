#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "catch_amalgamated.hpp"
#include "vibctl/curves.hpp"
#include "vibctl/error.hpp"
#include "vibctl/propagator.hpp"
#include "vibctl/units.hpp"

using namespace vibctl;
using Catch::Approx;

namespace {

SampledOperators flat(std::size_t n, double dipole = 0.0) {
  return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, dipole)};
}

PropagationConfig closed(double t_end, double dt = 0.5) {
  PropagationConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.absorber.enabled = false;
  return c;
}

double max_difference(const TwoChannelState& a, const TwoChannelState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.g.size(); ++i) {
    m = std::max({m, std::abs(a.g[i] - b.g[i]), std::abs(a.u[i] - b.u[i])});
  }
  return m;
}

}  // namespace

TEST_CASE("Free Gaussian spreads as the analytic packet", "[propagator]") {
  auto grid = RadialGrid::make(0.1, 60.0, 1024);
  const double mass = 10.0, width = 1.0, k0 = 2.0, t = 40.0;
  const SplitOperatorPropagator prop(grid, flat(grid->size()), mass);
  TwoChannelState s(gaussian_packet(grid, 20.0, width, k0), ChannelField(grid));
  prop.propagate(s, {}, closed(t));

  // <R>(t) = R0 + k0 t / m; width(t)^2 = width^2 (1 + (t / (m width^2))^2)
  REQUIRE(expectation_position(s.g) == Approx(20.0 + k0 * t / mass).epsilon(1e-10));
  double second = 0.0;
  const double mean = expectation_position(s.g);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    second += std::norm(s.g[i]) * (grid->r(i) - mean) * (grid->r(i) - mean) * grid->dr();
  }
  const double spread = 1.0 + std::pow(t / (mass * width * width), 2);
  REQUIRE(2.0 * second == Approx(width * width * spread).epsilon(1e-9));
}

TEST_CASE("Constant dipole with a unipolar pulse is an exact Rabi rotation", "[propagator]") {
  // Infinite mass freezes the nuclei, so each grid point is a two-level system
  // and the g amplitude is cos(d * integral F dt).
  auto grid = RadialGrid::make(0.1, 20.0, 256);
  const double d = 0.8;
  const SplitOperatorPropagator prop(grid, flat(grid->size(), d),
                                     std::numeric_limits<double>::infinity());
  LaserPulse pulse;
  pulse.peak_field = 0.05;
  pulse.omega = 0.0;
  pulse.fwhm = 100.0;
  pulse.center = 1000.0;
  const double area = pulse.peak_field * pulse.fwhm * std::sqrt(std::numbers::pi / (2 * std::numbers::ln2));

  TwoChannelState s(gaussian_packet(grid, 5.0, 1.0), ChannelField(grid));
  const auto initial = s.g;
  auto cfg = closed(2000.0);
  const LaserPulse pulses[] = {pulse};
  prop.propagate(s, pulses, cfg);
  for (std::size_t i = 0; i < grid->size(); i += 11) {
    REQUIRE(std::abs(s.g[i] - initial[i] * std::cos(d * area)) < 1e-12);
    REQUIRE(std::abs(s.u[i] - initial[i] * Complex(0.0, -std::sin(d * area))) < 1e-12);
  }
}

TEST_CASE("Norm is conserved over 10^4 steps with the field on", "[propagator]") {
  auto grid = RadialGrid::make(0.1, 40.0, 512);
  const auto curves = bundled_curves();
  const SplitOperatorPropagator prop(grid, sample_on_grid(curves, *grid), units::kD2ReducedMass);
  TwoChannelState s(gaussian_packet(grid, 2.2, 0.3), ChannelField(grid));
  const LaserPulse pulses[] = {LaserPulse::from_spec({1e14, 790.0, 60.0, 5.0, 0.0})};
  const auto summary = prop.propagate(s, pulses, closed(5000.0));
  REQUIRE(summary.steps == 10000);
  REQUIRE(summary.absorbed == 0.0);
  REQUIRE(std::abs(norm_squared(s) - 1.0) < 1e-10);
  REQUIRE(norm_squared(s.u) > 1e-6);
}

TEST_CASE("Split-step error is second order in dt", "[propagator]") {
  auto grid = RadialGrid::make(0.1, 40.0, 512);
  const SplitOperatorPropagator prop(grid, sample_on_grid(bundled_curves(), *grid),
                                     units::kD2ReducedMass);
  const TwoChannelState start(gaussian_packet(grid, 2.2, 0.3), ChannelField(grid));
  const LaserPulse pulses[] = {LaserPulse::from_spec({1e14, 790.0, 10.0, 3.0, 0.0})};
  auto run = [&](double dt) {
    TwoChannelState s = start;
    prop.propagate(s, pulses, closed(800.0, dt));
    return s;
  };
  const auto reference = run(0.025);
  const double e1 = max_difference(run(0.4), reference);
  const double e2 = max_difference(run(0.2), reference);
  REQUIRE(e1 / e2 > 3.5);
  REQUIRE(e1 / e2 < 4.5);
}

TEST_CASE("Absorber removes outgoing flux and the ledger balances", "[propagator]") {
  auto grid = RadialGrid::make(0.1, 40.0, 512);
  const SplitOperatorPropagator prop(grid, flat(grid->size()), 1000.0);
  const auto mask = prop.absorber_mask({true, 0.1, 0.125});
  std::size_t first_absorbing = 0;
  while (mask[first_absorbing] == 1.0) ++first_absorbing;
  REQUIRE(grid->r(first_absorbing) > 36.0);
  for (std::size_t i = first_absorbing + 1; i < mask.size(); ++i) REQUIRE(mask[i] <= mask[i - 1]);
  const auto off = prop.absorber_mask({false, 0.1, 0.125});
  for (double m : off) REQUIRE(m == 1.0);

  // A packet with momentum 20 at mass 1000 crosses 30 bohr in 1500 a.u.
  TwoChannelState s(gaussian_packet(grid, 10.0, 1.0, 20.0), ChannelField(grid));
  PropagationConfig cfg;
  cfg.t_end = 3000.0;
  const auto summary = prop.propagate(s, {}, cfg);
  REQUIRE(summary.absorbed > 0.99);
  REQUIRE(summary.absorbed + norm_squared(s) == Approx(1.0).margin(1e-12));
}

TEST_CASE("Observer cadence and the step actually used", "[propagator]") {
  auto grid = RadialGrid::make(0.1, 20.0, 256);
  const SplitOperatorPropagator prop(grid, flat(grid->size()), 1000.0);
  TwoChannelState s(gaussian_packet(grid, 5.0, 1.0), ChannelField(grid));
  auto cfg = closed(10.1, 0.5);
  cfg.record_stride = 5;
  std::vector<double> times;
  const auto summary = prop.propagate(s, {}, cfg, [&](const Observation& o, const TwoChannelState&) {
    times.push_back(o.t);
    REQUIRE(o.norm == Approx(1.0));
  });
  REQUIRE(summary.steps == 21);
  REQUIRE(summary.dt == Approx(10.1 / 21));
  // t = 0, every fifth step, and the final step.
  REQUIRE(times.size() == 1 + 4 + 1);
  REQUIRE(times.back() == Approx(10.1));
}

TEST_CASE("Propagator argument checks and non-finite detection", "[propagator]") {
  auto grid = RadialGrid::make(0.1, 20.0, 256);
  auto other = RadialGrid::make(0.1, 30.0, 256);
  REQUIRE_THROWS_AS(SplitOperatorPropagator(grid, flat(100), 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(SplitOperatorPropagator(grid, flat(256), -1.0), std::invalid_argument);
  const SplitOperatorPropagator prop(grid, flat(grid->size()), 1000.0);

  TwoChannelState wrong(other);
  REQUIRE_THROWS_AS(prop.propagate(wrong, {}, closed(1.0)), std::invalid_argument);
  TwoChannelState s(gaussian_packet(grid, 5.0, 1.0), ChannelField(grid));
  REQUIRE_THROWS_AS(prop.propagate(s, {}, closed(1.0, 0.0)), std::invalid_argument);
  auto backwards = closed(1.0);
  backwards.t_start = 2.0;
  REQUIRE_THROWS_AS(prop.propagate(s, {}, backwards), std::invalid_argument);
  auto wide = closed(1.0);
  wide.absorber.fraction = 0.6;
  REQUIRE_THROWS_AS(prop.propagate(s, {}, wide), std::invalid_argument);

  s.g[17] = Complex(std::nan(""), 0.0);
  try {
    prop.propagate(s, {}, closed(5.0));
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    REQUIRE(e.step() == 1);
  }
}
