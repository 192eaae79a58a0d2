#include "vibctl/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vibctl/error.hpp"
#include "vibctl/units.hpp"

namespace vibctl {

ChannelField neutral_ground_state(std::shared_ptr<const RadialGrid> grid,
                                  const NeutralGroundParams& params) {
  const double omega = params.omega_e_cm / units::kCmInvPerHartree;
  const auto morse = MorseCurve::from_frequency(params.well_depth, omega, params.r_e, params.mass);
  const auto v = morse.sample(*grid);
  auto basis = solve_bound_states(grid, v, params.mass, 1);
  if (basis.size() == 0) throw std::runtime_error("neutral well has no bound state");
  return std::move(basis.states.front());
}

PumpResult franck_condon_pump(const ChannelField& d2_ground, const VibrationalBasis& basis,
                              std::span<const double> weight) {
  ChannelField g = d2_ground;
  if (!weight.empty()) {
    if (weight.size() != g.size()) {
      throw InputError("pump weight has " + std::to_string(weight.size()) +
                       " samples, grid has " + std::to_string(g.size()));
    }
    if (std::none_of(weight.begin(), weight.end(), [](double w) { return w > 0.0; })) {
      throw InputError("pump weight is non-positive everywhere");
    }
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= weight[i];
  }
  const double norm = norm_squared(g);
  if (!(norm > 0.0)) throw InputError("pump state has zero norm");
  g *= 1.0 / std::sqrt(norm);

  PumpResult result{TwoChannelState(g, ChannelField(g.grid_ptr())), {}};
  result.coefficients = project(result.state.g, basis);
  return result;
}

Experiment::Experiment(std::shared_ptr<const RadialGrid> grid, const PotentialCurveSet& curves,
                       double mass, PropagationConfig propagation)
    : grid_(std::move(grid)), mass_(mass), propagation_(propagation) {
  auto ops = sample_on_grid(curves, *grid_);
  basis_ = std::make_shared<const VibrationalBasis>(
      solve_bound_states(grid_, ops.v_g, mass_, kAllBoundStates));
  propagator_ = std::make_shared<const SplitOperatorPropagator>(grid_, std::move(ops), mass_);
}

PumpResult Experiment::pump(const PumpSpec& spec) const {
  const auto ground = neutral_ground_state(grid_, spec.ground);
  if (spec.mode == PumpMode::weighted) return franck_condon_pump(ground, *basis_, spec.weight);
  return franck_condon_pump(ground, *basis_);
}

namespace {

double bound_norm(std::span<const Complex> c) {
  double s = 0.0;
  for (const auto& z : c) s += std::norm(z);
  return s;
}

std::vector<double> populations_of(std::span<const Complex> c) {
  std::vector<double> p(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) p[i] = std::norm(c[i]);
  return p;
}

std::vector<Complex> propagate_window(const Experiment& experiment, TwoChannelState state,
                                      std::span<const LaserPulse> pulses, double t_start,
                                      double t_end) {
  PropagationConfig config = experiment.propagation();
  config.t_start = t_start;
  config.t_end = t_end;
  config.record_stride = 0;
  experiment.propagator().propagate(state, pulses, config);
  return project(state.g, experiment.basis());
}

TwoChannelState bound_state_from(const Experiment& experiment, std::span<const Complex> c) {
  return TwoChannelState(synthesize(experiment.basis(), c),
                         ChannelField(experiment.grid()));
}

std::vector<Complex> apply_matrix(const Eigen::MatrixXcd& m, std::span<const Complex> c) {
  Eigen::Map<const Eigen::VectorXcd> in(c.data(), static_cast<Eigen::Index>(c.size()));
  Eigen::VectorXcd out = m * in;
  return {out.data(), out.data() + out.size()};
}

ScanRow finish_row(double tau_fs, std::span<const Complex> c, double bound_start,
                   std::size_t reported) {
  ScanRow row;
  row.tau_fs = tau_fs;
  auto pops = populations_of(c);
  row.yield = bound_start - bound_norm(c);
  row.contrast = chessboard_contrast(pops);
  pops.resize(std::min(reported, pops.size()));
  pops.resize(reported, 0.0);
  row.populations = std::move(pops);
  return row;
}

}  // namespace

Eigen::MatrixXcd window_transfer(const Experiment& experiment, std::span<const LaserPulse> pulses,
                                 double t_start, double t_end, std::size_t workers) {
  const auto& basis = experiment.basis();
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd m(n, n);
  run_ordered(
      basis.size(), workers,
      [&](std::size_t col) {
        std::vector<Complex> unit(basis.size(), 0.0);
        unit[col] = 1.0;
        return propagate_window(experiment, bound_state_from(experiment, unit), pulses, t_start,
                                t_end);
      },
      [&](std::size_t col, std::vector<Complex> out) {
        for (Eigen::Index r = 0; r < n; ++r) m(r, static_cast<Eigen::Index>(col)) = out[r];
      });
  return m;
}

Eigen::MatrixXcd pulse_transfer(const Experiment& experiment, const LaserPulse& pulse,
                                std::size_t workers) {
  const LaserPulse centred = pulse.shifted_to(0.0);
  return window_transfer(experiment, std::span(&centred, 1), centred.window_start(),
                         centred.window_end(), workers);
}

std::vector<Complex> evolve_free(const VibrationalBasis& basis, std::span<const Complex> c,
                                 double t0, double t1) {
  if (c.size() > basis.size()) throw std::invalid_argument("more coefficients than states");
  std::vector<Complex> out(c.size());
  const double dt = t1 - t0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    out[n] = c[n] * std::polar(1.0, -basis.energies[n] * dt);
  }
  return out;
}

std::string to_string(ScanMethod method) {
  switch (method) {
    case ScanMethod::transfer: return "transfer";
    case ScanMethod::window: return "window";
    case ScanMethod::full: return "full";
  }
  return "transfer";
}

ScanMethod parse_scan_method(const std::string& text) {
  if (text == "transfer") return ScanMethod::transfer;
  if (text == "window") return ScanMethod::window;
  if (text == "full") return ScanMethod::full;
  throw InputError("unknown scan method '" + text + "' (expected transfer, window or full)");
}

double chessboard_contrast(std::span<const double> populations) {
  double even = 0.0;
  double odd = 0.0;
  const std::size_t last = std::min(populations.size(), kContrastMaxLevel + 1);
  for (std::size_t n = 0; n < last; ++n) (n % 2 == 0 ? even : odd) += populations[n];
  if (!(even + odd > 0.0)) throw std::invalid_argument("contrast of an empty population row");
  return (even - odd) / (even + odd);
}

std::vector<double> PopulationMap::tau_values() const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r.tau_fs);
  return v;
}

std::vector<double> PopulationMap::yields() const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r.yield);
  return v;
}

std::vector<double> delay_range(double first_fs, double last_fs, double step_fs) {
  if (!(step_fs > 0.0)) throw InputError("delay step must be positive");
  if (!(last_fs >= first_fs)) throw InputError("delay range is empty");
  const auto count = static_cast<std::size_t>(std::floor((last_fs - first_fs) / step_fs + 0.5)) + 1;
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = first_fs + static_cast<double>(i) * step_fs;
  return v;
}

PopulationMap control_scan(const Experiment& experiment, const PumpResult& pump,
                           const LaserPulse& control_template, std::span<const double> tau_fs,
                           const ScanOptions& options) {
  const auto& basis = experiment.basis();
  const double bound0 = bound_norm(pump.coefficients);
  auto transfer = options.transfer;
  if (options.method == ScanMethod::transfer && !transfer) {
    transfer = std::make_shared<const Eigen::MatrixXcd>(
        pulse_transfer(experiment, control_template, options.workers));
  }

  PopulationMap map;
  map.reported_states = options.reported_states;
  map.rows.reserve(tau_fs.size());

  auto compute = [&](std::size_t i) {
    const double tau = units::fs_to_au(tau_fs[i]);
    const LaserPulse pulse = control_template.shifted_to(tau);
    // A window reaching back before the pump is clipped at t = 0.
    const double start = std::max(0.0, pulse.window_start());
    const double end = pulse.window_end();
    try {
      std::vector<Complex> c;
      if (options.method == ScanMethod::full) {
        c = propagate_window(experiment, pump.state, std::span(&pulse, 1), 0.0, end);
      } else {
        auto c_start = evolve_free(basis, pump.coefficients, 0.0, start);
        if (options.method == ScanMethod::transfer && start == pulse.window_start()) {
          c = apply_matrix(*transfer, c_start);
        } else {
          c = propagate_window(experiment, bound_state_from(experiment, c_start),
                               std::span(&pulse, 1), start, end);
        }
      }
      return finish_row(tau_fs[i], c, bound0, options.reported_states);
    } catch (const std::exception& e) {
      ScanRow row;
      row.tau_fs = tau_fs[i];
      row.populations.assign(options.reported_states, 0.0);
      row.ok = false;
      row.error = e.what();
      return row;
    }
  };
  auto consume = [&](std::size_t i, ScanRow row) {
    if (options.on_row) options.on_row(i, row);
    map.rows.push_back(std::move(row));
  };
  run_ordered(tau_fs.size(), options.workers, compute, consume, options.cancel);
  return map;
}

ControlOutcome apply_control(const Experiment& experiment, const PumpResult& pump,
                             const LaserPulse& control) {
  if (control.window_start() < 0.0) {
    throw InputError("control window starts before the pump (tau < 5 fwhm)");
  }
  ControlOutcome out;
  out.control = control;
  out.before = evolve_free(experiment.basis(), pump.coefficients, 0.0, control.window_start());
  out.after = propagate_window(experiment, bound_state_from(experiment, out.before),
                               std::span(&control, 1), control.window_start(),
                               control.window_end());
  out.bound_before = bound_norm(out.before);
  out.bound_after = bound_norm(out.after);
  return out;
}

double YieldSeries::spacing_fs() const {
  if (tau_prime_fs.size() < 2) throw std::invalid_argument("series has fewer than two samples");
  return (tau_prime_fs.back() - tau_prime_fs.front()) /
         static_cast<double>(tau_prime_fs.size() - 1);
}

YieldSeries probe_scan(const Experiment& experiment, const ControlOutcome& control,
                       const LaserPulse& probe_template, std::span<const double> tau_prime_fs,
                       const ProbeOptions& options) {
  const auto& basis = experiment.basis();
  for (double t : tau_prime_fs) {
    if (!(units::fs_to_au(t) > control.control.center)) {
      throw InputError("probe delay " + std::to_string(t) + " fs is not after the control pulse");
    }
  }

  auto transfer = options.transfer;
  if (options.method == ScanMethod::transfer && !transfer) {
    transfer = std::make_shared<const Eigen::MatrixXcd>(
        pulse_transfer(experiment, probe_template, options.workers));
  }

  YieldSeries series;
  series.control_yield = control.yield();
  series.tau_prime_fs.reserve(tau_prime_fs.size());
  series.yields.reserve(tau_prime_fs.size());

  auto compute = [&](std::size_t i) {
    YieldRow row;
    row.tau_prime_fs = tau_prime_fs[i];
    const LaserPulse probe = probe_template.shifted_to(units::fs_to_au(tau_prime_fs[i]));
    try {
      std::vector<Complex> c;
      if (probe.window_start() < control.control.window_end()) {
        // Overlapping windows: both pulses from the control window start.
        const LaserPulse both[] = {control.control, probe};
        c = propagate_window(experiment, bound_state_from(experiment, control.before), both,
                             control.control.window_start(),
                             std::max(probe.window_end(), control.control.window_end()));
      } else {
        auto c_start = evolve_free(basis, control.after, control.control.window_end(),
                                   probe.window_start());
        if (options.method == ScanMethod::transfer) {
          c = apply_matrix(*transfer, c_start);
        } else {
          c = propagate_window(experiment, bound_state_from(experiment, c_start),
                               std::span(&probe, 1), probe.window_start(), probe.window_end());
        }
      }
      row.yield = control.bound_after - bound_norm(c);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    return row;
  };
  auto consume = [&](std::size_t i, YieldRow row) {
    if (options.on_row) options.on_row(i, row);
    series.tau_prime_fs.push_back(row.tau_prime_fs);
    series.yields.push_back(row.yield);
    series.errors.push_back(row.ok ? std::string() : row.error);
  };
  run_ordered(tau_prime_fs.size(), options.workers, compute, consume, options.cancel);
  return series;
}

}  // namespace vibctl
