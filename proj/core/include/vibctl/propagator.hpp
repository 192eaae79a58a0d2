#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "vibctl/curves.hpp"
#include "vibctl/fft.hpp"
#include "vibctl/field.hpp"
#include "vibctl/pulse.hpp"
#include "vibctl/vibrational.hpp"

namespace vibctl {

/// Mask m(R) = cos(pi/2 * s)^exponent over the outermost `fraction` of the
/// grid (s runs 0 -> 1 towards r_max), applied to both channels every step.
struct AbsorberSettings {
  bool enabled = true;
  double fraction = 0.1;
  double exponent = 0.125;
};

struct PropagationConfig {
  double dt = 0.5;  // a.u.
  double t_start = 0.0;
  double t_end = 0.0;
  AbsorberSettings absorber;
  /// Observer cadence in steps; 0 disables recording.
  std::size_t record_stride = 0;
};

struct Observation {
  double t = 0.0;
  double norm = 0.0;    // total norm^2
  double mean_r = 0.0;  // <R> of the g channel
  double pop_g = 0.0;
  double pop_u = 0.0;
};

using Observer = std::function<void(const Observation&, const TwoChannelState&)>;

struct PropagationSummary {
  std::size_t steps = 0;
  double dt = 0.0;  // step actually used: span / ceil(span / requested dt)
  double absorbed = 0.0;
};

/// Where the probability that left the bound g-well manifold went.
struct DissociationLedger {
  double u_population = 0.0;
  double g_continuum_population = 0.0;
  double absorbed_flux = 0.0;

  double total() const noexcept { return u_population + g_continuum_population + absorbed_flux; }
};

/// Symmetric split-step propagator for the coupled g/u channels:
///
///   exp(-i T dt/2) exp(-i H_e dt/2) exp(-i V dt) exp(-i H_e dt/2) exp(-i T dt/2)
///
/// T is applied in k-space, H_e = diag(v_g, v_u) and the dipole coupling V
/// are diagonal in R. The 2x2 coupling exponential is exact:
/// exp(-i theta sigma_x) = cos(theta) - i sin(theta) sigma_x, theta = F d dt.
class SplitOperatorPropagator {
 public:
  SplitOperatorPropagator(std::shared_ptr<const RadialGrid> grid, SampledOperators operators,
                          double mass);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const std::shared_ptr<const RadialGrid>& grid_ptr() const noexcept { return grid_; }
  const SampledOperators& operators() const noexcept { return ops_; }
  double mass() const noexcept { return mass_; }

  /// One unfused step of length dt with field F evaluated at the midpoint.
  void split_step(TwoChannelState& state, double dt, double field) const;

  /// Propagates from config.t_start to config.t_end under the summed field
  /// of all pulses. Throws NumericalError on a non-finite norm.
  PropagationSummary propagate(TwoChannelState& state, std::span<const LaserPulse> pulses,
                               const PropagationConfig& config,
                               const Observer& observer = {}) const;

  std::vector<double> absorber_mask(const AbsorberSettings& settings) const;

 private:
  struct StepTables;
  StepTables tables(double dt) const;
  void kinetic(TwoChannelState& state, std::span<const Complex> phase) const;

  std::shared_ptr<const RadialGrid> grid_;
  SampledOperators ops_;
  double mass_;
  Fft fft_;
};

/// initial_norm - sum over bound states of |<n|psi_g>|^2
double dissociation_yield(const TwoChannelState& state, const VibrationalBasis& basis,
                          double initial_norm = 1.0);

DissociationLedger make_ledger(const TwoChannelState& state, const VibrationalBasis& basis,
                               double absorbed);

Observation observe(const TwoChannelState& state, double t);

}  // namespace vibctl
