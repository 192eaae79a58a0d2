#pragma once

#include <cstddef>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vibctl/grid.hpp"
#include "vibctl/units.hpp"

namespace vibctl {

struct MoleculeParams {
  double reduced_mass = units::kD2ReducedMass;  // electron masses
  std::string label = "D2+";
};

/// Born-Oppenheimer curves of the bound (g) and repulsive (u) states and
/// their transition dipole, all in atomic units, interpolated with natural
/// cubic splines.
///
/// Energies are stored relative to the common dissociation limit (the mean
/// of the two curves at the largest tabulated R is shifted to zero).
/// Outside the table: for R beyond the last knot both curves are 0 and
/// d(R) = R/2; below the first knot every quantity is held at its first value.
class PotentialCurveSet {
 public:
  PotentialCurveSet(std::vector<double> r, std::vector<double> v_g, std::vector<double> v_u,
                    std::vector<double> dipole);

  static constexpr std::size_t kMinSamples = 50;

  const std::vector<double>& r() const noexcept { return r_; }
  const std::vector<double>& v_g() const noexcept { return v_g_; }
  const std::vector<double>& v_u() const noexcept { return v_u_; }
  const std::vector<double>& dipole() const noexcept { return d_; }

  /// Amount subtracted from the raw energies on construction.
  double energy_shift() const noexcept { return shift_; }

  double v_g_at(double r) const;
  double v_u_at(double r) const;
  double dipole_at(double r) const;

  /// Position and depth (positive) of the tabulated v_g minimum.
  double well_minimum_r() const;
  double well_depth() const;

 private:
  struct Splines;
  std::vector<double> r_, v_g_, v_u_, d_;
  double shift_ = 0.0;
  std::shared_ptr<const Splines> splines_;
};

/// Parses "R V_g V_u d" rows; '#' starts a comment line. Errors name the row.
PotentialCurveSet load_curves(std::istream& in);
PotentialCurveSet load_curves_file(const std::string& path);

/// The H2+ table compiled into the library.
std::string_view bundled_curve_text();
PotentialCurveSet bundled_curves();

/// Curves sampled on a propagation grid.
struct SampledOperators {
  std::vector<double> v_g;
  std::vector<double> v_u;
  std::vector<double> dipole;
};

SampledOperators sample_on_grid(const PotentialCurveSet& curves, const RadialGrid& grid);

/// V(R) = D_e (1 - exp(-a (R - R_e)))^2 - D_e, with closed-form spectrum.
class MorseCurve {
 public:
  MorseCurve(double well_depth, double width, double r_e);

  /// Width parameter giving harmonic frequency omega_e (hartree) for mass mu.
  static MorseCurve from_frequency(double well_depth, double omega_e, double r_e, double mass);

  double well_depth() const noexcept { return d_e_; }
  double width() const noexcept { return alpha_; }
  double r_e() const noexcept { return r_e_; }

  double operator()(double r) const;
  std::vector<double> sample(const RadialGrid& grid) const;

  double omega_e(double mass) const;
  double omega_e_x_e(double mass) const;
  double eigenvalue(std::size_t n, double mass) const;
  std::size_t bound_state_count(double mass) const;

 private:
  double d_e_;
  double alpha_;
  double r_e_;
};

MorseCurve morse_curve(double well_depth, double width, double r_e);

}  // namespace vibctl
