#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vibctl/error.hpp"
#include "vibctl/pulse.hpp"
#include "vibctl/units.hpp"

namespace vibctl::cli {

/// Invalid configuration text or value; the message carries its origin
/// ("run.cfg:12" or "--fwhm").
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

struct PulseSection {
  double intensity_w_cm2 = 5e13;
  double wavelength_nm = 790.0;
  double fwhm_fs = 5.0;
  double tau_fs = 293.0;
  double carrier_phase = 0.0;  // rad

  PulseSpec spec() const { return {intensity_w_cm2, wavelength_nm, tau_fs, fwhm_fs, carrier_phase}; }
};

/// Effective settings of one run. Times are fs unless named otherwise.
struct RunConfig {
  struct Molecule {
    std::string curves = "bundled";  // path, or "bundled"
    double reduced_mass = units::kD2ReducedMass;
  } molecule;

  struct Grid {
    double r_min = 0.1;
    double r_max = 40.0;
    std::size_t points = 2048;
  } grid;

  struct Propagation {
    double dt_au = 0.5;
    bool absorber = true;
    double absorber_fraction = 0.1;
    double absorber_exponent = 0.125;
    double t_end_fs = 650.0;
    std::size_t record_stride = 20;
  } propagation;

  struct Pump {
    std::string mode = "franck_condon";  // or "weighted"
    std::string weight_file;             // two columns: R, w(R)
    double ground_r_e = 1.40;
    double ground_well_depth = 0.1745;
    double ground_omega_e_cm = 3115.0;
  } pump;

  PulseSection control;
  PulseSection probe{4e14, 790.0, 5.0, 310.0, 0.0};

  struct Scan {
    double tau_first = 0.0;
    double tau_last = 650.0;
    double tau_step = 1.0;
    double tau_prime_first = 310.0;
    double tau_prime_last = 4000.0;
    double tau_prime_step = 1.0;
    std::string method = "transfer";
    std::size_t states = 14;
  } scan;

  struct Model {
    double reference_energy = 0.0;  // hartree; not listed in the docs
    std::vector<double> clock_states{3.0, 5.0};
    std::vector<double> clock_taus{293.0, 306.0};
    std::size_t matrix_size = 14;
    double search_first = 0.0;  // phase-condition window, 0 = automatic
    double search_last = 0.0;
  } model;

  struct Output {
    std::string directory = ".";
    std::string format = "csv";
  } output;

  std::size_t workers = 0;  // 0 = unset

  /// Sections that appeared in the file or were touched by a flag.
  std::set<std::string> sections;
  /// "section.key" -> where the value came from.
  std::map<std::string, std::string> origins;
};

/// Parses INI-style text:
///
///   [control]
///   fwhm = 5 fs        # units optional, checked against the key
///
/// Unknown sections or keys, duplicate keys and malformed values raise
/// ConfigError naming the line. Defaults fill everything not given.
RunConfig parse_config(std::string_view text, std::string_view origin = "config");
RunConfig load_config_file(const std::string& path);

/// Sets "section.key" from text as if it came from `origin`.
void apply_setting(RunConfig& config, std::string_view dotted_key, std::string_view value,
                   std::string_view origin);

/// Range and positivity checks; errors name the key and its origin.
void validate(const RunConfig& config);

/// Throws ConfigError when a section the command needs was never given.
void require_section(const RunConfig& config, const std::string& section,
                     const std::string& command);

/// The effective configuration in the same syntax, canonical units, every
/// key listed. Feeding it back to parse_config reproduces the run.
std::string echo_config(const RunConfig& config);

/// Section -> key -> canonical value text.
std::map<std::string, std::map<std::string, std::string>> config_entries(const RunConfig& config);

}  // namespace vibctl::cli
