// vibctl: coherent vibrational control of D2+ from the command line.
//
//   vibctl scan-control --config fig2.cfg --out-dir results
//   vibctl scan-probe --control-tau 293 --tau-prime-last 1000
//   vibctl spectrum --input results/probe_scan.csv

#include <csignal>
#include <iostream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "vibctl/cli/commands.hpp"
#include "vibctl/cli/config.hpp"
#include "vibctl/cli/output.hpp"

namespace {

vibctl::CancellationToken g_cancel;

extern "C" void on_interrupt(int) { g_cancel.request(); }

struct Override {
  std::string key;
  std::string value;
  std::string flag;
};

struct Invocation {
  std::string config_path;
  std::string out_dir;
  std::string out_file;
  std::string input_file;
  std::string compare_file;
  long workers = -1;
  std::vector<std::string> sets;
  std::vector<Override> overrides;
};

// A flag that writes one configuration key; units are accepted as in the file.
void key_flag(CLI::App* app, Invocation& inv, const std::string& flag, const std::string& key,
              const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&inv, flag, key](const std::string& v) { inv.overrides.push_back({key, v, flag}); },
      help + " [" + key + "]");
}

void common_flags(CLI::App* app, Invocation& inv) {
  app->add_option("--config", inv.config_path, "Configuration file");
  app->add_option("--out-dir", inv.out_dir, "Directory for outputs and manifests");
  app->add_option("--workers", inv.workers,
                  "Parallel workers (default: VIBCTL_WORKERS, then [run] workers, then all cores)");
  app->add_option("--set", inv.sets, "Override any key: section.key=value")->take_all();
  key_flag(app, inv, "--curves", "molecule.curves", "Curve table path or 'bundled'");
  key_flag(app, inv, "--dt", "propagation.dt", "Time step (a.u.)");
}

void pulse_flags(CLI::App* app, Invocation& inv, const std::string& prefix,
                 const std::string& section) {
  key_flag(app, inv, "--" + prefix + "intensity", section + ".intensity", "Peak intensity (W/cm2)");
  key_flag(app, inv, "--" + prefix + "wavelength", section + ".wavelength", "Wavelength (nm)");
  key_flag(app, inv, "--" + prefix + "fwhm", section + ".fwhm", "Intensity FWHM (fs)");
  key_flag(app, inv, "--" + prefix + "cep", section + ".carrier_phase", "Carrier phase (rad)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace vibctl::cli;

  CLI::App app{"Coherent vibrational control of D2+: propagation, delay scans and analysis"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  Invocation inv;

  auto* eigen = app.add_subcommand("eigen", "Bound states, Franck-Condon populations, fitted constants");
  common_flags(eigen, inv);
  eigen->add_option("--out", inv.out_file, "Output CSV");

  auto* propagate = app.add_subcommand("propagate", "Propagate the Franck-Condon packet, optionally with a pulse");
  common_flags(propagate, inv);
  pulse_flags(propagate, inv, "", "control");
  key_flag(propagate, inv, "--tau", "control.tau", "Pulse centre (fs)");
  key_flag(propagate, inv, "--t-end", "propagation.t_end", "End time (fs)");
  key_flag(propagate, inv, "--stride", "propagation.record_stride", "Steps between CSV rows");
  propagate->add_option("--out", inv.out_file, "Output CSV");

  auto* scan_control = app.add_subcommand("scan-control", "Control-delay scan (population map)");
  common_flags(scan_control, inv);
  pulse_flags(scan_control, inv, "", "control");
  key_flag(scan_control, inv, "--tau-first", "scan.tau_first", "First delay (fs)");
  key_flag(scan_control, inv, "--tau-last", "scan.tau_last", "Last delay (fs)");
  key_flag(scan_control, inv, "--tau-step", "scan.tau_step", "Delay step (fs)");
  key_flag(scan_control, inv, "--states", "scan.states", "Reported vibrational states");
  key_flag(scan_control, inv, "--method", "scan.method", "transfer | window | full");
  scan_control->add_option("--out", inv.out_file, "Output CSV");

  auto* scan_probe = app.add_subcommand("scan-probe", "Probe-delay dissociation scan after one control pulse");
  common_flags(scan_probe, inv);
  pulse_flags(scan_probe, inv, "control-", "control");
  key_flag(scan_probe, inv, "--control-tau", "control.tau", "Control delay (fs)");
  pulse_flags(scan_probe, inv, "probe-", "probe");
  key_flag(scan_probe, inv, "--tau-prime-first", "scan.tau_prime_first", "First probe delay (fs)");
  key_flag(scan_probe, inv, "--tau-prime-last", "scan.tau_prime_last", "Last probe delay (fs)");
  key_flag(scan_probe, inv, "--tau-prime-step", "scan.tau_prime_step", "Probe delay step (fs)");
  key_flag(scan_probe, inv, "--method", "scan.method", "transfer | window");
  scan_probe->add_option("--out", inv.out_file, "Output CSV");

  auto* spectrum = app.add_subcommand("spectrum", "Beat spectrum of a probe yield series");
  common_flags(spectrum, inv);
  spectrum->add_option("--input", inv.input_file, "Yield series CSV (default <out-dir>/probe_scan.csv)");
  spectrum->add_option("--out", inv.out_file, "Output CSV");

  auto* model = app.add_subcommand("model", "Second-order impulse model: couplings, clocks, predictions");
  common_flags(model, inv);
  pulse_flags(model, inv, "", "control");
  model->add_option("--compare", inv.compare_file, "Control-scan CSV to compare the model against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CommandOptions options;
  options.command = app.get_subcommands().front()->get_name();
  try {
    options.config = inv.config_path.empty() ? RunConfig{} : load_config_file(inv.config_path);
    for (const auto& o : inv.overrides) apply_setting(options.config, o.key, o.value, o.flag);
    for (const auto& s : inv.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + s + "'");
      apply_setting(options.config, s.substr(0, eq), s.substr(eq + 1), "--set");
    }
    std::size_t workers = inv.workers >= 0 ? static_cast<std::size_t>(inv.workers) : 0;
    if (workers == 0) workers = workers_from_environment();
    if (workers == 0) workers = options.config.workers;
    options.workers = vibctl::resolve_workers(workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  options.out_dir = inv.out_dir.empty() ? options.config.output.directory : inv.out_dir;
  options.out_file = inv.out_file;
  options.input_file = inv.input_file;
  options.compare_file = inv.compare_file;
  options.cancel = &g_cancel;
  options.log = &std::cerr;

  std::signal(SIGINT, on_interrupt);
  std::signal(SIGTERM, on_interrupt);
  return run_command(options);
}
