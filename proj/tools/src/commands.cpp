#include "vibctl/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vibctl/cli/output.hpp"
#include "vibctl/curves.hpp"
#include "vibctl/error.hpp"
#include "vibctl/perturbative.hpp"
#include "vibctl/pipeline.hpp"
#include "vibctl/spectrum.hpp"
#include "vibctl/units.hpp"

namespace vibctl::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ostream& log_of(const CommandOptions& o) { return o.log ? *o.log : std::clog; }

struct Molecule {
  PotentialCurveSet curves;
  std::string source;
  std::string checksum;
};

Molecule load_molecule(const RunConfig& config) {
  if (config.molecule.curves == "bundled") {
    const auto text = bundled_curve_text();
    return {bundled_curves(), "bundled", hex_digest(fnv1a(text))};
  }
  std::ifstream in(config.molecule.curves, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open curve file '{}'", config.molecule.curves));
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::istringstream parse(text);
  return {load_curves(parse), config.molecule.curves, hex_digest(fnv1a(text))};
}

json config_json(const RunConfig& config) {
  json out = json::object();
  for (const auto& [section, keys] : config_entries(config)) {
    for (const auto& [key, value] : keys) out[section][key] = value;
  }
  return out;
}

PropagationConfig propagation_of(const RunConfig& c) {
  PropagationConfig p;
  p.dt = c.propagation.dt_au;
  p.absorber.enabled = c.propagation.absorber;
  p.absorber.fraction = c.propagation.absorber_fraction;
  p.absorber.exponent = c.propagation.absorber_exponent;
  return p;
}

std::vector<double> load_weight(const RunConfig& c, const RadialGrid& grid) {
  const auto table = read_csv(c.pump.weight_file);
  if (table.columns.size() < 2 || table.rows.size() < 2) {
    throw ConfigError(fmt::format("{}: weight file needs columns R, w and at least two rows",
                                  c.pump.weight_file));
  }
  std::vector<double> r, w;
  for (const auto& row : table.rows) {
    if (!r.empty() && !(row[0] > r.back())) {
      throw ConfigError(fmt::format("{}: R must increase", c.pump.weight_file));
    }
    r.push_back(row[0]);
    w.push_back(row[1]);
  }
  // Linear interpolation, zero outside the tabulated range.
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.r(i);
    if (x < r.front() || x > r.back()) continue;
    const auto hi = static_cast<std::size_t>(std::upper_bound(r.begin(), r.end(), x) - r.begin());
    if (hi >= r.size()) {
      out[i] = w.back();
      continue;
    }
    const std::size_t lo = hi - 1;
    const double s = (x - r[lo]) / (r[hi] - r[lo]);
    out[i] = (1.0 - s) * w[lo] + s * w[hi];
  }
  return out;
}

struct Setup {
  Molecule molecule;
  std::unique_ptr<Experiment> experiment;
  std::optional<PumpResult> pump;
};

Setup make_setup(const RunConfig& c, bool with_pump) {
  Setup s{load_molecule(c), nullptr, std::nullopt};
  auto grid = RadialGrid::make(c.grid.r_min, c.grid.r_max, c.grid.points);
  s.experiment = std::make_unique<Experiment>(grid, s.molecule.curves, c.molecule.reduced_mass,
                                              propagation_of(c));
  if (with_pump) {
    PumpSpec spec;
    spec.ground.r_e = c.pump.ground_r_e;
    spec.ground.well_depth = c.pump.ground_well_depth;
    spec.ground.omega_e_cm = c.pump.ground_omega_e_cm;
    spec.ground.mass = c.molecule.reduced_mass;
    if (c.pump.mode == "weighted") {
      spec.mode = PumpMode::weighted;
      spec.weight = load_weight(c, *grid);
    }
    s.pump = s.experiment->pump(spec);
  }
  return s;
}

fs::path main_output(const CommandOptions& o, const std::string& default_name) {
  return o.out_file.empty() ? o.out_dir / default_name : o.out_file;
}

RunManifest new_manifest(const CommandOptions& o, const Molecule* molecule) {
  RunManifest m(o.command, echo_config(o.config), config_json(o.config));
  if (molecule) m.set_curves(molecule->source, molecule->checksum);
  return m;
}

CommandResult finish(const CommandOptions& o, RunManifest& manifest, const fs::path& output,
                     int exit_code, const std::string& status, fs::path manifest_file = {}) {
  manifest.set_status(status);
  const auto path = manifest_file.empty() ? manifest_path_for(output) : manifest_file;
  manifest.write(path);
  log_of(o) << fmt::format("{}: {} -> {}\n", o.command, status, output.string());
  return {exit_code, output, path};
}

CommandResult run_eigen(const CommandOptions& o) {
  const auto setup = make_setup(o.config, true);
  const auto& basis = setup.experiment->basis();
  const auto& fc = setup.pump->coefficients;
  const auto output = main_output(o, "eigen.csv");
  auto manifest = new_manifest(o, &setup.molecule);
  CsvWriter csv(output, {"n", "energy_hartree", "energy_ev", "fc_population", "beat_period_fs"});
  for (std::size_t n = 0; n < basis.size(); ++n) {
    const double beat = n + 1 < basis.size()
                            ? units::period_fs(basis.energies[n + 1] - basis.energies[n])
                            : std::nan("");
    const double row[] = {static_cast<double>(n), basis.energies[n],
                          basis.energies[n] * units::kEvPerHartree, std::norm(fc[n]), beat};
    csv.row(row);
  }
  manifest.add_output(output);
  auto& s = manifest.summary();
  s["bound_states"] = basis.size();
  if (basis.size() >= 2) s["fundamental_period_fs"] = units::period_fs(basis.energies[1] - basis.energies[0]);
  if (basis.size() >= 5) {
    const auto fit = fit_anharmonic(basis);
    const auto times = predict_interference_times(fit);
    s["omega_e_hartree"] = fit.omega_e;
    s["omega_e_x_e_hartree"] = fit.omega_e_x_e;
    s["d_e_hartree"] = fit.d_e;
    s["fit_residual_hartree"] = fit.residual;
    s["fractional_revival_fs"] = times.fractional_revival_fs;
    s["parity_flip_interval_fs"] = times.parity_flip_interval_fs;
  }
  double bound = 0.0;
  for (const auto& c : fc) bound += std::norm(c);
  s["fc_bound_fraction"] = bound;
  return finish(o, manifest, output, kExitOk, "complete");
}

CommandResult run_propagate(const CommandOptions& o) {
  const auto setup = make_setup(o.config, true);
  const auto& ex = *setup.experiment;
  const auto& c = o.config;
  std::vector<LaserPulse> pulses;
  if (c.sections.count("control")) pulses.push_back(LaserPulse::from_spec(c.control.spec()));
  if (c.sections.count("probe")) pulses.push_back(LaserPulse::from_spec(c.probe.spec()));

  const auto output = main_output(o, "propagate.csv");
  auto manifest = new_manifest(o, &setup.molecule);
  CsvWriter csv(output, {"t_fs", "norm", "mean_R", "pop_g", "pop_u", "yield"});
  manifest.add_output(output);

  double bound0 = 0.0;
  for (const auto& z : setup.pump->coefficients) bound0 += std::norm(z);
  auto config = ex.propagation();
  config.t_start = 0.0;
  config.t_end = units::fs_to_au(c.propagation.t_end_fs);
  config.record_stride = std::max<std::size_t>(1, c.propagation.record_stride);
  auto state = setup.pump->state;
  const auto summary = ex.propagator().propagate(
      state, pulses, config, [&](const Observation& obs, const TwoChannelState& s) {
        const double row[] = {units::au_to_fs(obs.t), obs.norm, obs.mean_r, obs.pop_g, obs.pop_u,
                              dissociation_yield(s, ex.basis(), bound0)};
        csv.row(row);
      });
  const auto ledger = make_ledger(state, ex.basis(), summary.absorbed);
  auto& s = manifest.summary();
  s["steps"] = summary.steps;
  s["dt_au"] = summary.dt;
  s["final_yield"] = dissociation_yield(state, ex.basis(), bound0);
  s["ledger"] = {{"u_population", ledger.u_population},
                 {"g_continuum_population", ledger.g_continuum_population},
                 {"absorbed_flux", ledger.absorbed_flux},
                 {"total", ledger.total()}};
  s["pulses"] = pulses.size();
  return finish(o, manifest, output, kExitOk, "complete");
}

std::vector<std::string> population_columns(std::size_t states) {
  std::vector<std::string> cols{"tau_fs"};
  for (std::size_t n = 0; n < states; ++n) cols.push_back(fmt::format("pop_n{}", n));
  cols.push_back("yield");
  cols.push_back("contrast");
  return cols;
}

struct RowTally {
  std::size_t completed = 0;
  std::vector<std::size_t> failed;
};

std::pair<int, std::string> scan_status(const CommandOptions& o, std::size_t total,
                                        const RowTally& tally) {
  if (tally.completed < total && o.cancel && o.cancel->requested()) {
    return {kExitInterrupted, "interrupted"};
  }
  if (!tally.failed.empty()) return {kExitNumerical, "completed with failed rows"};
  return {kExitOk, "complete"};
}

CommandResult run_control_scan(const CommandOptions& o) {
  const auto& c = o.config;
  const auto setup = make_setup(c, true);
  const auto control = LaserPulse::from_spec(c.control.spec());
  const auto taus = delay_range(c.scan.tau_first, c.scan.tau_last, c.scan.tau_step);
  const auto output = main_output(o, "control_scan.csv");
  auto manifest = new_manifest(o, &setup.molecule);
  CsvWriter csv(output, population_columns(c.scan.states));
  manifest.add_output(output);

  RowTally tally;
  ScanOptions options;
  options.method = parse_scan_method(c.scan.method);
  options.workers = o.workers;
  options.reported_states = c.scan.states;
  options.cancel = o.cancel;
  options.on_row = [&](std::size_t i, const ScanRow& row) {
    std::vector<double> values{row.tau_fs};
    for (double p : row.populations) values.push_back(row.ok ? p : std::nan(""));
    values.push_back(row.ok ? row.yield : std::nan(""));
    values.push_back(row.ok ? row.contrast : std::nan(""));
    csv.row(values);
    ++tally.completed;
    if (!row.ok) {
      tally.failed.push_back(i);
      log_of(o) << fmt::format("row {} (tau {} fs) failed: {}\n", i, row.tau_fs, row.error);
    }
  };
  try {
    control_scan(*setup.experiment, *setup.pump, control, taus, options);
  } catch (const IoError&) {
    manifest.set_rows(taus.size(), tally.completed, tally.failed);
    finish(o, manifest, output, kExitIo, "aborted on I/O error");
    throw;
  }
  manifest.set_rows(taus.size(), tally.completed, tally.failed);
  manifest.summary()["method"] = c.scan.method;
  manifest.summary()["bound_states"] = setup.experiment->basis().size();
  const auto [code, status] = scan_status(o, taus.size(), tally);
  return finish(o, manifest, output, code, status);
}

CommandResult run_probe_scan(const CommandOptions& o) {
  const auto& c = o.config;
  const auto setup = make_setup(c, true);
  const auto control = LaserPulse::from_spec(c.control.spec());
  const auto probe = LaserPulse::from_spec(c.probe.spec());
  const auto taus = delay_range(c.scan.tau_prime_first, c.scan.tau_prime_last,
                                c.scan.tau_prime_step);
  const auto output = main_output(o, "probe_scan.csv");
  auto manifest = new_manifest(o, &setup.molecule);
  const auto outcome = apply_control(*setup.experiment, *setup.pump, control);
  CsvWriter csv(output, {"tau_prime_fs", "yield"});
  manifest.add_output(output);

  RowTally tally;
  ProbeOptions options;
  options.method = parse_scan_method(c.scan.method);
  options.workers = o.workers;
  options.cancel = o.cancel;
  options.on_row = [&](std::size_t i, const YieldRow& row) {
    const double values[] = {row.tau_prime_fs, row.ok ? row.yield : std::nan("")};
    csv.row(values);
    ++tally.completed;
    if (!row.ok) {
      tally.failed.push_back(i);
      log_of(o) << fmt::format("row {} (tau' {} fs) failed: {}\n", i, row.tau_prime_fs, row.error);
    }
  };
  try {
    probe_scan(*setup.experiment, outcome, probe, taus, options);
  } catch (const IoError&) {
    manifest.set_rows(taus.size(), tally.completed, tally.failed);
    finish(o, manifest, output, kExitIo, "aborted on I/O error");
    throw;
  }
  manifest.set_rows(taus.size(), tally.completed, tally.failed);
  auto& s = manifest.summary();
  s["method"] = c.scan.method;
  s["control_tau_fs"] = c.control.tau_fs;
  s["control_yield"] = outcome.yield();
  std::vector<double> pops;
  for (const auto& z : outcome.after) pops.push_back(std::norm(z));
  s["post_control_populations"] = pops;
  s["post_control_contrast"] = chessboard_contrast(pops);
  const auto [code, status] = scan_status(o, taus.size(), tally);
  return finish(o, manifest, output, code, status);
}

CommandResult run_spectrum(const CommandOptions& o) {
  const auto input = o.input_file.empty() ? o.out_dir / "probe_scan.csv" : o.input_file;
  const auto table = read_csv(input);
  const auto t_col = table.column("tau_prime_fs");
  const auto y_col = table.column("yield");
  std::vector<double> t, y;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (!std::isfinite(row[y_col])) {
      throw InputError(fmt::format("{}: row {} has no yield (failed scan row)", input.string(), i + 1));
    }
    t.push_back(row[t_col]);
    y.push_back(row[y_col]);
  }
  const auto density = beat_spectrum(t, y);

  const auto output = main_output(o, "spectrum.csv");
  const auto molecule = load_molecule(o.config);
  auto manifest = new_manifest(o, &molecule);
  manifest.summary()["input"] = input.string();
  CsvWriter csv(output, {"bin", "omega_au", "period_fs", "magnitude"});
  for (std::size_t k = 0; k < density.omega.size(); ++k) {
    const double row[] = {static_cast<double>(k), density.omega[k],
                          k == 0 ? std::nan("") : density.beat_period_fs(k), density.magnitude[k]};
    csv.row(row);
  }
  manifest.add_output(output);

  // Label peaks with the nearest n -> n+2 beat of the configured molecule.
  auto grid = RadialGrid::make(o.config.grid.r_min, o.config.grid.r_max, o.config.grid.points);
  const auto ops = sample_on_grid(molecule.curves, *grid);
  const auto basis = solve_bound_states(grid, ops.v_g, o.config.molecule.reduced_mass, kAllBoundStates);
  auto& s = manifest.summary();
  s["fft_size"] = density.fft_size;
  s["samples"] = density.samples;
  s["spacing_fs"] = density.spacing_fs;
  s["window"] = density.window;
  s["bin_width_au"] = density.bin_width();
  json peaks = json::array();
  for (const auto& p : find_peaks(density, 0.1)) {
    json entry = {{"period_fs", p.period_fs}, {"omega_au", p.omega}, {"magnitude", p.magnitude}};
    for (std::size_t n = 0; n + 2 < basis.size(); ++n) {
      const double w = basis.energies[n + 2] - basis.energies[n];
      if (std::abs(w - p.omega) <= density.bin_width()) entry["pair"] = fmt::format("{}-{}", n, n + 2);
    }
    peaks.push_back(entry);
    if (peaks.size() == 12) break;
  }
  s["peaks"] = peaks;
  return finish(o, manifest, output, kExitOk, "complete");
}

CommandResult run_model(const CommandOptions& o) {
  const auto& c = o.config;
  const auto setup = make_setup(c, true);
  const auto& ex = *setup.experiment;
  const auto& basis = ex.basis();
  const auto& energies = basis.energies;
  const auto coupling = coupling_matrix(basis, ex.propagator().operators().dipole);
  const auto control = LaserPulse::from_spec(c.control.spec());
  const double eref = c.model.reference_energy;
  auto manifest = new_manifest(o, &setup.molecule);

  const auto matrix_out = o.out_dir / "coupling_matrix.csv";
  {
    const std::size_t k = std::min(c.model.matrix_size, coupling.size());
    std::vector<std::string> cols{"n"};
    for (std::size_t m = 0; m < k; ++m) cols.push_back(fmt::format("d2_m{}", m));
    CsvWriter csv(matrix_out, cols);
    for (std::size_t n = 0; n < k; ++n) {
      std::vector<double> row{static_cast<double>(n)};
      for (std::size_t m = 0; m < k; ++m) {
        row.push_back(coupling.d2(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)));
      }
      csv.row(row);
    }
    manifest.add_output(matrix_out);
  }

  const auto clocks_out = o.out_dir / "clocks.csv";
  {
    CsvWriter csv(clocks_out, {"tau_fs", "parent", "n", "amplitude", "phase_rad"});
    for (double tau : c.model.clock_taus) {
      const auto pulse = control.shifted_to(units::fs_to_au(tau));
      for (double parent : c.model.clock_states) {
        const auto p = static_cast<std::size_t>(parent);
        if (p >= coupling.size()) throw ConfigError(fmt::format("clock state {} is not bound", p));
        for (const auto& clock : clock_phases(p, pulse, coupling, energies, eref)) {
          const double row[] = {tau, parent, static_cast<double>(clock.n), clock.amplitude,
                                clock.phase};
          csv.row(row);
        }
      }
    }
    manifest.add_output(clocks_out);
  }

  auto& s = manifest.summary();
  s["reference_energy_hartree"] = eref;
  if (basis.size() >= 8) {
    const auto fit = fit_anharmonic(basis);
    const auto times = predict_interference_times(fit);
    s["fractional_revival_fs"] = times.fractional_revival_fs;
    s["parity_flip_interval_fs"] = times.parity_flip_interval_fs;
    const double lo = c.model.search_first > 0.0 ? c.model.search_first : 0.5 * times.fractional_revival_fs;
    const double hi = c.model.search_last > 0.0 ? c.model.search_last : 1.5 * times.fractional_revival_fs;
    s["phase_condition_tau_fs"] = phase_condition_time(energies, lo, hi);
    s["phase_condition_window_fs"] = {lo, hi};
  }

  // Destructive-interference diagnostic for the strongest impulse of each clock delay.
  json diagnostics = json::array();
  for (double tau : c.model.clock_taus) {
    const auto pulse = control.shifted_to(units::fs_to_au(tau));
    const auto train = impulse_train(pulse);
    if (train.empty() || coupling.size() < 8) break;
    const auto strongest = *std::max_element(
        train.begin(), train.end(),
        [](const Impulse& a, const Impulse& b) { return a.amplitude < b.amplitude; });
    const auto k = kappa_matrix(coupling, energies, strongest.amplitude, units::kPi / pulse.omega, eref);
    for (const auto& d : interference_diagnostic(setup.pump->coefficients, strongest.start, k, energies)) {
      diagnostics.push_back({{"tau_fs", tau},
                             {"n", d.n},
                             {"required_phase", d.required_phase},
                             {"stark_phase", d.stark_phase},
                             {"mismatch", d.mismatch},
                             {"balance", d.balance}});
    }
  }
  s["interference_diagnostic"] = diagnostics;

  fs::path output = clocks_out;
  if (!o.compare_file.empty()) {
    const auto table = read_csv(o.compare_file);
    const auto tau_col = table.column("tau_fs");
    std::size_t states = 0;
    while (states < table.columns.size() &&
           std::find(table.columns.begin(), table.columns.end(), fmt::format("pop_n{}", states)) !=
               table.columns.end()) {
      ++states;
    }
    const auto compare_out = o.out_dir / "model_vs_full.csv";
    CsvWriter csv(compare_out, {"tau_fs", "n", "initial", "full", "model"});
    std::size_t sign_agree = 0, rows = 0;
    const auto& a0 = setup.pump->coefficients;
    for (const auto& row : table.rows) {
      const double tau = row[tau_col];
      const auto model = apply_pulse_model(a0, control.shifted_to(units::fs_to_au(tau)), coupling,
                                           energies, eref);
      std::vector<double> full_pop, model_pop, init_pop;
      for (std::size_t n = 0; n < states && n < model.size(); ++n) {
        const double full = row[table.column(fmt::format("pop_n{}", n))];
        const double values[] = {tau, static_cast<double>(n), std::norm(a0[n]), full,
                                 std::norm(model[n])};
        csv.row(values);
        full_pop.push_back(full);
        model_pop.push_back(std::norm(model[n]));
        init_pop.push_back(std::norm(a0[n]));
      }
      if (full_pop.empty() || !std::isfinite(full_pop.front())) continue;
      const double base = chessboard_contrast(init_pop);
      const double shift_full = chessboard_contrast(full_pop) - base;
      const double shift_model = chessboard_contrast(model_pop) - base;
      ++rows;
      if ((shift_full > 0) == (shift_model > 0)) ++sign_agree;
    }
    s["comparison_rows"] = rows;
    s["contrast_shift_sign_agreement"] = rows ? static_cast<double>(sign_agree) / rows : 0.0;
    manifest.add_output(compare_out);
    output = compare_out;
  }
  return finish(o, manifest, output, kExitOk, "complete", o.out_dir / "model.manifest.json");
}

}  // namespace

CommandResult run_scan(const CommandOptions& options) {
  if (options.command == "scan-control") {
    require_section(options.config, "control", options.command);
    return run_control_scan(options);
  }
  if (options.command == "scan-probe") {
    require_section(options.config, "control", options.command);
    require_section(options.config, "probe", options.command);
    return run_probe_scan(options);
  }
  throw ConfigError(fmt::format("'{}' is not a scan command", options.command));
}

CommandResult execute(const CommandOptions& options) {
  validate(options.config);
  const auto& cmd = options.command;
  if (cmd == "eigen") return run_eigen(options);
  if (cmd == "propagate") return run_propagate(options);
  if (cmd == "scan-control" || cmd == "scan-probe") return run_scan(options);
  if (cmd == "spectrum") return run_spectrum(options);
  if (cmd == "model") return run_model(options);
  throw ConfigError(fmt::format("unknown command '{}'", cmd));
}

int run_command(const CommandOptions& options) {
  auto& log = log_of(options);
  try {
    return execute(options).exit_code;
  } catch (const InputError& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    log << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    log << "failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

std::size_t workers_from_environment() {
  const char* text = std::getenv("VIBCTL_WORKERS");
  if (!text || !*text) return 0;
  char* end = nullptr;
  const long v = std::strtol(text, &end, 10);
  if (*end != '\0' || v < 0) {
    throw ConfigError(fmt::format("VIBCTL_WORKERS: expected a non-negative integer, got '{}'", text));
  }
  return static_cast<std::size_t>(v);
}

}  // namespace vibctl::cli
