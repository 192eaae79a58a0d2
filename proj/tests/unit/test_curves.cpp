#include <cmath>
#include <sstream>
#include <string>

#include "catch_amalgamated.hpp"
#include "vibctl/curves.hpp"
#include "vibctl/error.hpp"

using namespace vibctl;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

// Smooth analytic curves on 0.5 .. 10.4 (100 rows), raw energies offset by 0.25.
std::string synthetic_table(std::size_t rows = 100) {
  std::ostringstream out;
  out << "# R Vg Vu d\n";
  out.precision(17);
  for (std::size_t i = 0; i < rows; ++i) {
    const double r = 0.5 + 0.1 * static_cast<double>(i);
    const double vg = 0.25 - 0.1 * std::exp(-(r - 2.0) * (r - 2.0));
    const double vu = 0.25 + 0.3 * std::exp(-r);
    out << r << ' ' << vg << ' ' << vu << ' ' << 0.5 * r + 0.1 * std::exp(-r) << '\n';
  }
  return out.str();
}

PotentialCurveSet parse(const std::string& text) {
  std::istringstream in(text);
  return load_curves(in);
}

}  // namespace

TEST_CASE("Curve table is shifted to the mean asymptote and splined", "[curves]") {
  const auto curves = parse(synthetic_table());
  const double r_last = 0.5 + 0.1 * 99;
  const double raw_g_last = 0.25 - 0.1 * std::exp(-(r_last - 2.0) * (r_last - 2.0));
  const double raw_u_last = 0.25 + 0.3 * std::exp(-r_last);
  REQUIRE(curves.energy_shift() == Approx(0.5 * (raw_g_last + raw_u_last)).epsilon(1e-14));

  // Between knots a natural cubic spline of smooth data is accurate to ~h^4.
  for (double r : {1.23, 2.05, 3.777, 7.31}) {
    const double vg = 0.25 - 0.1 * std::exp(-(r - 2.0) * (r - 2.0)) - curves.energy_shift();
    REQUIRE(curves.v_g_at(r) == Approx(vg).margin(2e-6));
    REQUIRE(curves.dipole_at(r) == Approx(0.5 * r + 0.1 * std::exp(-r)).margin(2e-6));
  }
  REQUIRE(curves.well_minimum_r() == Approx(2.0));
  REQUIRE(curves.well_depth() == Approx(0.1 - 0.25 + curves.energy_shift()).margin(1e-12));
}

TEST_CASE("Curves outside the table", "[curves]") {
  const auto curves = parse(synthetic_table());
  REQUIRE(curves.v_g_at(12.0) == 0.0);
  REQUIRE(curves.v_u_at(50.0) == 0.0);
  REQUIRE(curves.dipole_at(30.0) == 15.0);
  REQUIRE(curves.v_g_at(0.1) == curves.v_g().front());
  REQUIRE(curves.dipole_at(0.2) == curves.dipole().front());
}

TEST_CASE("Curve table errors name the row", "[curves]") {
  REQUIRE_THROWS_WITH(parse(synthetic_table(49)), ContainsSubstring("insufficient samples"));

  auto text = synthetic_table();
  const auto bad_number = text.replace(text.find("0.59999"), 3, "x.5");
  REQUIRE_THROWS_WITH(parse(bad_number), ContainsSubstring("row 2 (line 3)") &&
                                             ContainsSubstring("not a number"));

  std::string three = "# header\n1.0 0.1 0.2\n";
  REQUIRE_THROWS_WITH(parse(three), ContainsSubstring("row 1 (line 2)") &&
                                        ContainsSubstring("expected 4 columns"));

  std::string decreasing = synthetic_table() + "5.0 0.1 0.2 2.5\n";
  REQUIRE_THROWS_WITH(parse(decreasing), ContainsSubstring("row 101") &&
                                             ContainsSubstring("not strictly increasing"));

  std::string crossed = synthetic_table() + "20.0 0.3 0.2 10.0\n";
  REQUIRE_THROWS_WITH(parse(crossed), ContainsSubstring("V_u below V_g"));

  REQUIRE_THROWS_AS(load_curves_file("/nonexistent/curves.dat"), InputError);
}

TEST_CASE("Bundled H2+ curves reproduce the exact two-centre energies", "[curves]") {
  const auto curves = bundled_curves();
  REQUIRE(curves.r().size() >= PotentialCurveSet::kMinSamples);
  // Literature values at R = 2 bohr relative to H(1s) + p, including 1/R:
  // 1s sigma_g  -1.1026342144949 + 0.5 + 0.5, 2p sigma_u -0.6675343922 + 0.5 + 0.5.
  REQUIRE(curves.v_g_at(2.0) + curves.energy_shift() == Approx(-0.1026342144949).margin(1e-9));
  REQUIRE(curves.v_u_at(2.0) + curves.energy_shift() == Approx(0.3324656078).margin(1e-9));
  REQUIRE(curves.well_minimum_r() == Approx(2.0).margin(0.05));
  // The transition dipole approaches R/2 at large separation.
  REQUIRE(curves.dipole_at(20.0) / 10.0 == Approx(1.0).margin(0.005));
  REQUIRE(!bundled_curve_text().empty());
}

TEST_CASE("Morse curve closed forms", "[curves]") {
  const double mass = 918.0;
  const auto m = MorseCurve::from_frequency(0.17, 0.02, 1.4, mass);
  REQUIRE(m.omega_e(mass) == Approx(0.02).epsilon(1e-14));
  REQUIRE(m.omega_e_x_e(mass) == Approx(0.02 * 0.02 / (4 * 0.17)).epsilon(1e-14));
  REQUIRE(m(1.4) == Approx(-0.17));
  REQUIRE(m(1e3) == Approx(0.0).margin(1e-12));
  // lambda = sqrt(2 mu D) / a = 17 exactly: n + 1/2 < 17 gives n = 0..16.
  REQUIRE(m.bound_state_count(mass) == 17);
  REQUIRE(m.eigenvalue(0, mass) == Approx(-0.17 + 0.01 - 0.25 * 0.02 * 0.02 / 0.68));
  REQUIRE_THROWS_AS(MorseCurve(-1.0, 1.0, 1.0), std::invalid_argument);
}
