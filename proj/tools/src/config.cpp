#include "vibctl/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

namespace vibctl::cli {

namespace {

enum class Dimension { none, time_fs, time_au, intensity, wavelength, length, energy, wavenumber, mass, angle };

struct UnitFactor {
  std::string_view name;
  double factor;  // canonical = value * factor
};

std::vector<UnitFactor> units_of(Dimension d) {
  switch (d) {
    case Dimension::none: return {};
    case Dimension::time_fs: return {{"fs", 1.0}, {"ps", 1000.0}, {"au", units::kFsPerAu}};
    case Dimension::time_au: return {{"au", 1.0}, {"fs", 1.0 / units::kFsPerAu}};
    case Dimension::intensity: return {{"W/cm2", 1.0}, {"W/cm^2", 1.0}};
    case Dimension::wavelength: return {{"nm", 1.0}};
    case Dimension::length: return {{"bohr", 1.0}, {"a0", 1.0}, {"angstrom", 1.0 / 0.529177210903}};
    case Dimension::energy:
      return {{"hartree", 1.0}, {"Eh", 1.0}, {"au", 1.0}, {"eV", 1.0 / units::kEvPerHartree}};
    case Dimension::wavenumber: return {{"cm-1", 1.0}, {"cm^-1", 1.0}};
    case Dimension::mass: return {{"me", 1.0}, {"au", 1.0}};
    case Dimension::angle: return {{"rad", 1.0}, {"deg", units::kPi / 180.0}};
  }
  return {};
}

std::string_view canonical_unit(Dimension d) {
  const auto u = units_of(d);
  return u.empty() ? std::string_view() : u.front().name;
}

struct Key {
  std::string_view section;
  std::string_view name;
  Dimension dimension;
  std::function<void*(RunConfig&)> target;
  enum Type { number, count, flag, text, list } type;
};

#define VIBCTL_KEY(sec, key, dim, type, expr)                                              \
  Key { sec, key, Dimension::dim, [](RunConfig& c) -> void* { return &(c.expr); }, Key::type }

const std::vector<Key>& schema() {
  static const std::vector<Key> keys = {
      VIBCTL_KEY("molecule", "curves", none, text, molecule.curves),
      VIBCTL_KEY("molecule", "reduced_mass", mass, number, molecule.reduced_mass),
      VIBCTL_KEY("grid", "r_min", length, number, grid.r_min),
      VIBCTL_KEY("grid", "r_max", length, number, grid.r_max),
      VIBCTL_KEY("grid", "points", none, count, grid.points),
      VIBCTL_KEY("propagation", "dt", time_au, number, propagation.dt_au),
      VIBCTL_KEY("propagation", "absorber", none, flag, propagation.absorber),
      VIBCTL_KEY("propagation", "absorber_fraction", none, number, propagation.absorber_fraction),
      VIBCTL_KEY("propagation", "absorber_exponent", none, number, propagation.absorber_exponent),
      VIBCTL_KEY("propagation", "t_end", time_fs, number, propagation.t_end_fs),
      VIBCTL_KEY("propagation", "record_stride", none, count, propagation.record_stride),
      VIBCTL_KEY("pump", "mode", none, text, pump.mode),
      VIBCTL_KEY("pump", "weight_file", none, text, pump.weight_file),
      VIBCTL_KEY("pump", "ground_r_e", length, number, pump.ground_r_e),
      VIBCTL_KEY("pump", "ground_well_depth", energy, number, pump.ground_well_depth),
      VIBCTL_KEY("pump", "ground_omega_e", wavenumber, number, pump.ground_omega_e_cm),
      VIBCTL_KEY("control", "intensity", intensity, number, control.intensity_w_cm2),
      VIBCTL_KEY("control", "wavelength", wavelength, number, control.wavelength_nm),
      VIBCTL_KEY("control", "fwhm", time_fs, number, control.fwhm_fs),
      VIBCTL_KEY("control", "tau", time_fs, number, control.tau_fs),
      VIBCTL_KEY("control", "carrier_phase", angle, number, control.carrier_phase),
      VIBCTL_KEY("probe", "intensity", intensity, number, probe.intensity_w_cm2),
      VIBCTL_KEY("probe", "wavelength", wavelength, number, probe.wavelength_nm),
      VIBCTL_KEY("probe", "fwhm", time_fs, number, probe.fwhm_fs),
      VIBCTL_KEY("probe", "tau", time_fs, number, probe.tau_fs),
      VIBCTL_KEY("probe", "carrier_phase", angle, number, probe.carrier_phase),
      VIBCTL_KEY("scan", "tau_first", time_fs, number, scan.tau_first),
      VIBCTL_KEY("scan", "tau_last", time_fs, number, scan.tau_last),
      VIBCTL_KEY("scan", "tau_step", time_fs, number, scan.tau_step),
      VIBCTL_KEY("scan", "tau_prime_first", time_fs, number, scan.tau_prime_first),
      VIBCTL_KEY("scan", "tau_prime_last", time_fs, number, scan.tau_prime_last),
      VIBCTL_KEY("scan", "tau_prime_step", time_fs, number, scan.tau_prime_step),
      VIBCTL_KEY("scan", "method", none, text, scan.method),
      VIBCTL_KEY("scan", "states", none, count, scan.states),
      VIBCTL_KEY("model", "reference_energy", energy, number, model.reference_energy),
      VIBCTL_KEY("model", "clock_states", none, list, model.clock_states),
      VIBCTL_KEY("model", "clock_taus", time_fs, list, model.clock_taus),
      VIBCTL_KEY("model", "matrix_size", none, count, model.matrix_size),
      VIBCTL_KEY("model", "search_first", time_fs, number, model.search_first),
      VIBCTL_KEY("model", "search_last", time_fs, number, model.search_last),
      VIBCTL_KEY("output", "directory", none, text, output.directory),
      VIBCTL_KEY("output", "format", none, text, output.format),
      VIBCTL_KEY("run", "workers", none, count, workers),
  };
  return keys;
}

#undef VIBCTL_KEY

bool known_section(std::string_view s) {
  const auto& keys = schema();
  return std::any_of(keys.begin(), keys.end(), [&](const Key& k) { return k.section == s; });
}

const Key* find_key(std::string_view section, std::string_view name) {
  for (const auto& k : schema()) {
    if (k.section == section && k.name == name) return &k;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::string_view origin, const std::string& message) {
  throw ConfigError(fmt::format("{}: {}", origin, message));
}

std::string unit_list(Dimension d) {
  std::string out;
  for (const auto& u : units_of(d)) {
    if (!out.empty()) out += ", ";
    out += u.name;
  }
  return out.empty() ? "no unit" : out;
}

double parse_quantity(std::string_view text, const Key& key, std::string_view origin) {
  text = trim(text);
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr == begin) {
    fail(origin, fmt::format("[{}] {}: '{}' is not a number", key.section, key.name, text));
  }
  const auto unit = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
  if (unit.empty()) return value;
  for (const auto& u : units_of(key.dimension)) {
    if (u.name == unit) return value * u.factor;
  }
  fail(origin, fmt::format("[{}] {}: bad unit '{}' (expected {})", key.section, key.name, unit,
                           unit_list(key.dimension)));
}

void assign(RunConfig& config, const Key& key, std::string_view value, std::string_view origin) {
  void* target = key.target(config);
  switch (key.type) {
    case Key::number:
      *static_cast<double*>(target) = parse_quantity(value, key, origin);
      break;
    case Key::count: {
      const double v = parse_quantity(value, key, origin);
      if (!(v >= 0.0) || v != std::floor(v)) {
        fail(origin, fmt::format("[{}] {}: expected a non-negative integer, got '{}'", key.section,
                                 key.name, trim(value)));
      }
      *static_cast<std::size_t*>(target) = static_cast<std::size_t>(v);
      break;
    }
    case Key::flag: {
      const auto v = trim(value);
      bool b;
      if (v == "true" || v == "on" || v == "yes" || v == "1") {
        b = true;
      } else if (v == "false" || v == "off" || v == "no" || v == "0") {
        b = false;
      } else {
        fail(origin, fmt::format("[{}] {}: expected true or false, got '{}'", key.section,
                                 key.name, v));
      }
      *static_cast<bool*>(target) = b;
      break;
    }
    case Key::text:
      *static_cast<std::string*>(target) = std::string(trim(value));
      break;
    case Key::list: {
      std::vector<double> items;
      std::string_view rest = value;
      while (!trim(rest).empty()) {
        const auto comma = rest.find(',');
        items.push_back(parse_quantity(rest.substr(0, comma), key, origin));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      *static_cast<std::vector<double>*>(target) = std::move(items);
      break;
    }
  }
  const std::string dotted = fmt::format("{}.{}", key.section, key.name);
  config.origins[dotted] = std::string(origin);
  config.sections.insert(std::string(key.section));
}

std::string format_value(const RunConfig& config, const Key& key) {
  void* target = key.target(const_cast<RunConfig&>(config));
  const auto unit = canonical_unit(key.dimension);
  auto with_unit = [&](double v) {
    return unit.empty() ? fmt::format("{}", v) : fmt::format("{} {}", v, unit);
  };
  switch (key.type) {
    case Key::number: return with_unit(*static_cast<double*>(target));
    case Key::count: return fmt::format("{}", *static_cast<std::size_t*>(target));
    case Key::flag: return *static_cast<bool*>(target) ? "true" : "false";
    case Key::text: return *static_cast<std::string*>(target);
    case Key::list: {
      std::string out;
      for (double v : *static_cast<std::vector<double>*>(target)) {
        if (!out.empty()) out += ", ";
        out += with_unit(v);
      }
      return out;
    }
  }
  return {};
}

std::string origin_of(const RunConfig& config, const std::string& dotted) {
  const auto it = config.origins.find(dotted);
  return it == config.origins.end() ? "default" : it->second;
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view origin) {
  RunConfig config;
  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string where = fmt::format("{}:{}", origin, line_no);
    std::string_view line = raw;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(where, fmt::format("malformed section header '{}'", line));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_section(section)) fail(where, fmt::format("unknown section [{}]", section));
      config.sections.insert(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(where, fmt::format("expected key = value, got '{}'", line));
    const auto name = trim(line.substr(0, eq));
    if (section.empty()) fail(where, fmt::format("key '{}' outside any section", name));
    const Key* key = find_key(section, name);
    if (!key) fail(where, fmt::format("unknown key '{}' in [{}]", name, section));
    const std::string dotted = fmt::format("{}.{}", section, name);
    if (!seen.insert(dotted).second) fail(where, fmt::format("duplicate key '{}' in [{}]", name, section));
    assign(config, *key, line.substr(eq + 1), where);
  }
  return config;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

void apply_setting(RunConfig& config, std::string_view dotted_key, std::string_view value,
                   std::string_view origin) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string_view::npos) {
    fail(origin, fmt::format("expected section.key, got '{}'", dotted_key));
  }
  const auto section = dotted_key.substr(0, dot);
  const auto name = dotted_key.substr(dot + 1);
  if (!known_section(section)) fail(origin, fmt::format("unknown section [{}]", section));
  const Key* key = find_key(section, name);
  if (!key) fail(origin, fmt::format("unknown key '{}' in [{}]", name, section));
  assign(config, *key, value, origin);
}

void validate(const RunConfig& c) {
  auto positive = [&](const char* dotted, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(origin_of(c, dotted), fmt::format("{} must be positive, got {}", dotted, v));
    }
  };
  auto non_negative = [&](const char* dotted, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      fail(origin_of(c, dotted), fmt::format("{} must be >= 0, got {}", dotted, v));
    }
  };
  positive("molecule.reduced_mass", c.molecule.reduced_mass);
  positive("grid.r_min", c.grid.r_min);
  positive("grid.r_max", c.grid.r_max);
  if (!(c.grid.r_max > c.grid.r_min)) {
    fail(origin_of(c, "grid.r_max"), "grid.r_max must exceed grid.r_min");
  }
  const auto n = c.grid.points;
  if (n < 256 || (n & (n - 1)) != 0) {
    fail(origin_of(c, "grid.points"),
         fmt::format("grid.points must be a power of two >= 256, got {}", n));
  }
  positive("propagation.dt", c.propagation.dt_au);
  if (!(c.propagation.absorber_fraction > 0.0 && c.propagation.absorber_fraction < 0.5)) {
    fail(origin_of(c, "propagation.absorber_fraction"),
         "propagation.absorber_fraction must lie in (0, 0.5)");
  }
  positive("propagation.absorber_exponent", c.propagation.absorber_exponent);
  non_negative("propagation.t_end", c.propagation.t_end_fs);
  if (c.pump.mode != "franck_condon" && c.pump.mode != "weighted") {
    fail(origin_of(c, "pump.mode"),
         fmt::format("pump.mode must be franck_condon or weighted, got '{}'", c.pump.mode));
  }
  if (c.pump.mode == "weighted" && c.pump.weight_file.empty()) {
    fail(origin_of(c, "pump.mode"), "pump.mode = weighted needs pump.weight_file");
  }
  positive("pump.ground_r_e", c.pump.ground_r_e);
  positive("pump.ground_well_depth", c.pump.ground_well_depth);
  positive("pump.ground_omega_e", c.pump.ground_omega_e_cm);
  for (const char* s : {"control", "probe"}) {
    const auto& p = std::string_view(s) == "control" ? c.control : c.probe;
    non_negative(fmt::format("{}.intensity", s).c_str(), p.intensity_w_cm2);
    positive(fmt::format("{}.wavelength", s).c_str(), p.wavelength_nm);
    positive(fmt::format("{}.fwhm", s).c_str(), p.fwhm_fs);
    non_negative(fmt::format("{}.tau", s).c_str(), p.tau_fs);
  }
  non_negative("scan.tau_first", c.scan.tau_first);
  positive("scan.tau_step", c.scan.tau_step);
  positive("scan.tau_prime_step", c.scan.tau_prime_step);
  if (c.scan.tau_last < c.scan.tau_first) {
    fail(origin_of(c, "scan.tau_last"), "scan.tau_last is before scan.tau_first");
  }
  if (c.scan.tau_prime_last < c.scan.tau_prime_first) {
    fail(origin_of(c, "scan.tau_prime_last"), "scan.tau_prime_last is before scan.tau_prime_first");
  }
  if (c.scan.method != "transfer" && c.scan.method != "window" && c.scan.method != "full") {
    fail(origin_of(c, "scan.method"),
         fmt::format("scan.method must be transfer, window or full, got '{}'", c.scan.method));
  }
  if (c.scan.states == 0) fail(origin_of(c, "scan.states"), "scan.states must be at least 1");
  if (c.model.matrix_size < 2) {
    fail(origin_of(c, "model.matrix_size"), "model.matrix_size must be at least 2");
  }
  for (double s : c.model.clock_states) {
    if (!(s >= 0.0) || s != std::floor(s)) {
      fail(origin_of(c, "model.clock_states"), "model.clock_states must be level indices");
    }
  }
  if (c.output.format != "csv") {
    fail(origin_of(c, "output.format"),
         fmt::format("output.format '{}' is not supported (csv)", c.output.format));
  }
}

void require_section(const RunConfig& config, const std::string& section,
                     const std::string& command) {
  if (!config.sections.count(section)) {
    throw ConfigError(fmt::format("{} needs a [{}] section (or the matching flags)", command, section));
  }
}

std::map<std::string, std::map<std::string, std::string>> config_entries(const RunConfig& config) {
  std::map<std::string, std::map<std::string, std::string>> out;
  for (const auto& key : schema()) {
    out[std::string(key.section)][std::string(key.name)] = format_value(config, key);
  }
  return out;
}

std::string echo_config(const RunConfig& config) {
  std::string out;
  std::string_view section;
  for (const auto& key : schema()) {
    if (key.section != section) {
      if (!out.empty()) out += '\n';
      out += fmt::format("[{}]\n", key.section);
      section = key.section;
    }
    out += fmt::format("{} = {}\n", key.name, format_value(config, key));
  }
  return out;
}

}  // namespace vibctl::cli
