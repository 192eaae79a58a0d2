#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vibctl/curves.hpp"
#include "vibctl/field.hpp"
#include "vibctl/parallel.hpp"
#include "vibctl/propagator.hpp"
#include "vibctl/pulse.hpp"
#include "vibctl/vibrational.hpp"

namespace vibctl {

/// Morse fit to the neutral X state used as the pump source.
struct NeutralGroundParams {
  double r_e = 1.40;                 // bohr
  double well_depth = 0.1745;        // hartree
  double omega_e_cm = 3115.0;        // cm^-1
  double mass = units::kD2ReducedMass;
};

/// Normalised ground vibrational state of the neutral Morse well.
ChannelField neutral_ground_state(std::shared_ptr<const RadialGrid> grid,
                                  const NeutralGroundParams& params = {});

enum class PumpMode { franck_condon, weighted };

struct PumpSpec {
  PumpMode mode = PumpMode::franck_condon;
  NeutralGroundParams ground;
  /// w(R) sampled on the ion grid; used in weighted mode.
  std::vector<double> weight;
};

struct PumpResult {
  TwoChannelState state;
  /// <n|psi_g> over the ion's bound states at t = 0.
  std::vector<Complex> coefficients;
};

/// Places d2_ground (optionally times w(R), renormalised) on the g channel.
/// Throws InputError when the weight is non-positive everywhere.
PumpResult franck_condon_pump(const ChannelField& d2_ground, const VibrationalBasis& basis,
                              std::span<const double> weight = {});

/// Grid, propagator and bound basis shared read-only by every scan row.
class Experiment {
 public:
  Experiment(std::shared_ptr<const RadialGrid> grid, const PotentialCurveSet& curves,
             double mass, PropagationConfig propagation = {});

  const std::shared_ptr<const RadialGrid>& grid() const noexcept { return grid_; }
  const SplitOperatorPropagator& propagator() const noexcept { return *propagator_; }
  const VibrationalBasis& basis() const noexcept { return *basis_; }
  const PropagationConfig& propagation() const noexcept { return propagation_; }
  double mass() const noexcept { return mass_; }

  PumpResult pump(const PumpSpec& spec = {}) const;

 private:
  std::shared_ptr<const RadialGrid> grid_;
  double mass_;
  PropagationConfig propagation_;
  std::shared_ptr<const SplitOperatorPropagator> propagator_;
  std::shared_ptr<const VibrationalBasis> basis_;
};

/// Bound-basis matrix M_nm = <n| U(t_end, t_start) |m> of the numerical
/// propagator, g channel in and out. The field is evaluated relative to
/// each pulse's own centre, so the matrix of a window depends only on the
/// window's position relative to its pulses.
Eigen::MatrixXcd window_transfer(const Experiment& experiment, std::span<const LaserPulse> pulses,
                                 double t_start, double t_end, std::size_t workers = 1);

/// window_transfer over [-5W, 5W] of the pulse shape, whatever its centre.
Eigen::MatrixXcd pulse_transfer(const Experiment& experiment, const LaserPulse& pulse,
                                std::size_t workers = 1);

/// Schroedinger-picture coefficients evolved freely: c_n exp(-i E_n (t1 - t0)).
std::vector<Complex> evolve_free(const VibrationalBasis& basis, std::span<const Complex> c,
                                 double t0, double t1);

/// How a scan row crosses a pulse window.
///   transfer: free evolution in the basis, then a precomputed window matrix.
///   window:   free evolution in the basis, then a numerical propagation of
///             the window for this row alone.
///   full:     numerical propagation of the complete pump state from t = 0.
enum class ScanMethod { transfer, window, full };

std::string to_string(ScanMethod method);
ScanMethod parse_scan_method(const std::string& text);

/// (sum_even - sum_odd) / (sum_even + sum_odd) over n <= 8.
/// Throws std::invalid_argument when that sum is zero.
double chessboard_contrast(std::span<const double> populations);

inline constexpr std::size_t kContrastMaxLevel = 8;

struct ScanRow {
  double tau_fs = 0.0;
  std::vector<double> populations;  // |a_n|^2 for the reported states
  double yield = 0.0;               // bound norm lost during the row
  double contrast = 0.0;
  bool ok = true;
  std::string error;
};

struct PopulationMap {
  std::size_t reported_states = 0;
  std::vector<ScanRow> rows;

  std::vector<double> tau_values() const;
  std::vector<double> yields() const;
};

using RowSink = std::function<void(std::size_t index, const ScanRow& row)>;

struct ScanOptions {
  ScanMethod method = ScanMethod::transfer;
  std::size_t workers = 1;
  std::size_t reported_states = 14;
  /// Window matrix of the control template from an earlier call; computed
  /// when absent.
  std::shared_ptr<const Eigen::MatrixXcd> transfer;
  const CancellationToken* cancel = nullptr;
  /// Called on the calling thread, in row order, as rows complete.
  RowSink on_row;
};

/// Evenly spaced, inclusive of both ends (to within half a step).
std::vector<double> delay_range(double first_fs, double last_fs, double step_fs);

/// For each delay: the pump state evolves freely to tau - 5W, crosses the
/// control pulse (centred at tau) and is projected at tau + 5W.
PopulationMap control_scan(const Experiment& experiment, const PumpResult& pump,
                           const LaserPulse& control_template, std::span<const double> tau_fs,
                           const ScanOptions& options = {});

/// Bound coefficients around one control pulse.
struct ControlOutcome {
  LaserPulse control;
  std::vector<Complex> before;  // at control.window_start()
  std::vector<Complex> after;   // at control.window_end()
  double bound_before = 0.0;
  double bound_after = 0.0;

  double yield() const noexcept { return bound_before - bound_after; }
};

ControlOutcome apply_control(const Experiment& experiment, const PumpResult& pump,
                             const LaserPulse& control);

struct YieldSeries {
  std::vector<double> tau_prime_fs;
  /// Bound norm lost to the probe (control-epoch losses excluded).
  std::vector<double> yields;
  double control_yield = 0.0;
  std::vector<std::string> errors;  // empty string for good rows

  double spacing_fs() const;
};

struct YieldRow {
  double tau_prime_fs = 0.0;
  double yield = 0.0;
  bool ok = true;
  std::string error;
};

using YieldSink = std::function<void(std::size_t index, const YieldRow& row)>;

struct ProbeOptions {
  ScanMethod method = ScanMethod::transfer;
  std::size_t workers = 1;
  /// Window matrix of the probe template; computed when absent.
  std::shared_ptr<const Eigen::MatrixXcd> transfer;
  const CancellationToken* cancel = nullptr;
  YieldSink on_row;
};

/// Dissociation yield of a probe pulse at each delay tau'. Rows whose probe
/// window overlaps the control window are propagated numerically through
/// both pulses from the control window start. The full method is not
/// offered here; it is mapped to window.
YieldSeries probe_scan(const Experiment& experiment, const ControlOutcome& control,
                       const LaserPulse& probe_template, std::span<const double> tau_prime_fs,
                       const ProbeOptions& options = {});

}  // namespace vibctl
