#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "catch_amalgamated.hpp"
#include "vibctl/cli/commands.hpp"
#include "vibctl/cli/config.hpp"
#include "vibctl/cli/output.hpp"

using namespace vibctl::cli;
namespace fs = std::filesystem;
using Catch::Approx;

namespace {

// Coarse grid and 2 fs pulses: every command runs in about a second.
constexpr const char* kSmallRun = R"(
[grid]
r_max = 20 bohr
points = 512

[control]
intensity = 5e13 W/cm2
fwhm = 2 fs
tau = 40 fs

[probe]
intensity = 2e14 W/cm2
fwhm = 2 fs

[scan]
tau_first = 40 fs
tau_last = 46 fs
tau_step = 1 fs
tau_prime_first = 60 fs
tau_prime_last = 359 fs
states = 6

[propagation]
t_end = 30 fs
record_stride = 200

[model]
clock_taus = 40, 44 fs
)";

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "vibctl_tests" / name;
  fs::remove_all(dir);
  return dir;
}

CommandOptions small(const std::string& command, const fs::path& dir, std::size_t workers = 1) {
  CommandOptions o;
  o.command = command;
  o.config = parse_config(kSmallRun, "small.cfg");
  o.out_dir = dir;
  o.workers = workers;
  static std::ostringstream sink;
  o.log = &sink;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json manifest_of(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("eigen writes the level table and fitted constants", "[cli]") {
  const auto dir = fresh_dir("eigen");
  const auto r = execute(small("eigen", dir));
  REQUIRE(r.exit_code == kExitOk);
  REQUIRE(r.output == dir / "eigen.csv");
  const auto table = read_csv(r.output);
  REQUIRE(table.columns.size() == 5);
  REQUIRE(table.rows.size() > 15);
  REQUIRE(table.rows[0][table.column("energy_hartree")] < table.rows[1][1]);
  const auto m = manifest_of(r.manifest);
  REQUIRE(m["status"] == "complete");
  REQUIRE(m["summary"]["bound_states"] == table.rows.size());
  REQUIRE(m["summary"]["fc_bound_fraction"].get<double>() > 0.95);
  REQUIRE(m["curves"]["source"] == "bundled");
  // The manifest carries the effective configuration, which reparses to the same run.
  const auto echoed = parse_config(m["config_text"].get<std::string>(), "manifest");
  REQUIRE(echo_config(echoed) == m["config_text"].get<std::string>());
}

TEST_CASE("propagate records the packet and the dissociation ledger", "[cli]") {
  const auto dir = fresh_dir("propagate");
  const auto r = execute(small("propagate", dir));
  REQUIRE(r.exit_code == kExitOk);
  const auto table = read_csv(r.output);
  REQUIRE(table.rows.front()[table.column("t_fs")] == 0.0);
  REQUIRE(table.rows.back()[table.column("t_fs")] == Approx(30.0));
  const auto m = manifest_of(r.manifest);
  REQUIRE(m["summary"]["pulses"] == 2);
  const auto& ledger = m["summary"]["ledger"];
  REQUIRE(ledger["total"].get<double>() ==
          Approx(ledger["u_population"].get<double>() +
                 ledger["g_continuum_population"].get<double>() +
                 ledger["absorbed_flux"].get<double>()));
}

TEST_CASE("scan-control matches the frozen small-grid scan", "[cli]") {
  const auto dir = fresh_dir("golden");
  const auto r = execute(small("scan-control", dir));
  REQUIRE(r.exit_code == kExitOk);
  const auto got = read_csv(r.output);
  const auto want = read_csv(fs::path(VIBCTL_GOLDEN_DIR) / "control_scan_small.csv");
  REQUIRE(got.columns == want.columns);
  REQUIRE(got.rows.size() == want.rows.size());
  for (std::size_t i = 0; i < got.rows.size(); ++i) {
    for (std::size_t j = 0; j < got.columns.size(); ++j) {
      INFO("row " << i << ", column " << got.columns[j]);
      REQUIRE(got.rows[i][j] == Approx(want.rows[i][j]).margin(1e-9));
    }
  }
  const auto m = manifest_of(r.manifest);
  REQUIRE(m["rows"]["total"] == 7);
  REQUIRE(m["rows"]["completed"] == 7);
  REQUIRE(m["rows"]["failed"].empty());
}

TEST_CASE("Scan output is byte-identical for 1 and 3 workers", "[cli]") {
  const auto one = execute(small("scan-control", fresh_dir("workers1"), 1));
  const auto three = execute(small("scan-control", fresh_dir("workers3"), 3));
  REQUIRE(slurp(one.output) == slurp(three.output));
  REQUIRE_FALSE(slurp(one.output).empty());

  auto p1 = small("scan-probe", fresh_dir("probe1"), 1);
  auto p3 = small("scan-probe", fresh_dir("probe3"), 3);
  REQUIRE(slurp(execute(p1).output) == slurp(execute(p3).output));
}

TEST_CASE("An interrupted scan keeps its manifest", "[cli]") {
  const auto dir = fresh_dir("interrupt");
  vibctl::CancellationToken stop;
  stop.request();
  auto o = small("scan-control", dir);
  o.cancel = &stop;
  const auto r = execute(o);
  REQUIRE(r.exit_code == kExitInterrupted);
  const auto m = manifest_of(r.manifest);
  REQUIRE(m["status"] == "interrupted");
  REQUIRE(m["rows"]["completed"] == 0);
  REQUIRE(m["rows"]["total"] == 7);
  REQUIRE(read_csv(r.output).rows.empty());
}

TEST_CASE("scan-probe, spectrum and model chain through files", "[cli]") {
  const auto dir = fresh_dir("chain");
  const auto probe = execute(small("scan-probe", dir));
  REQUIRE(probe.exit_code == kExitOk);
  const auto series = read_csv(probe.output);
  REQUIRE(series.rows.size() == 300);
  REQUIRE(manifest_of(probe.manifest)["summary"]["control_yield"].get<double>() > 0.0);

  const auto spec = execute(small("spectrum", dir));
  REQUIRE(spec.exit_code == kExitOk);
  const auto density = read_csv(spec.output);
  REQUIRE(density.rows.size() == 4 * 512 / 2 + 1);
  REQUIRE_FALSE(manifest_of(spec.manifest)["summary"]["peaks"].empty());

  REQUIRE(execute(small("scan-control", dir)).exit_code == kExitOk);
  auto model = small("model", dir);
  model.compare_file = dir / "control_scan.csv";
  const auto r = execute(model);
  REQUIRE(r.exit_code == kExitOk);
  REQUIRE(r.manifest == dir / "model.manifest.json");
  REQUIRE(fs::exists(dir / "coupling_matrix.csv"));
  REQUIRE(read_csv(dir / "clocks.csv").rows.size() > 0);
  const auto m = manifest_of(r.manifest);
  REQUIRE(m["summary"]["comparison_rows"] == 7);
  REQUIRE(m["summary"].contains("fractional_revival_fs"));
}

TEST_CASE("Errors map to exit codes", "[cli]") {
  const auto dir = fresh_dir("errors");
  auto o = small("scan-control", dir);
  o.config = RunConfig{};
  REQUIRE(run_command(o) == kExitConfig);  // no [control] section

  auto bad_curves = small("eigen", dir);
  apply_setting(bad_curves.config, "molecule.curves", "/nonexistent/curves.dat", "--curves");
  REQUIRE(run_command(bad_curves) == kExitConfig);

  auto missing_input = small("spectrum", dir);
  REQUIRE(run_command(missing_input) == kExitConfig);

  fs::create_directories(dir);
  std::ofstream(dir / "blocker") << "x";
  auto unwritable = small("eigen", dir / "blocker" / "sub");
  REQUIRE(run_command(unwritable) == kExitIo);

  auto unknown = small("frobnicate", dir);
  REQUIRE(run_command(unknown) == kExitConfig);
}
