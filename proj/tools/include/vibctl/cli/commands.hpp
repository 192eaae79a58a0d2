#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "vibctl/cli/config.hpp"
#include "vibctl/parallel.hpp"

namespace vibctl::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumerical = 2,
  kExitIo = 3,
  kExitInterrupted = 130,
};

struct CommandOptions {
  /// eigen | propagate | scan-control | scan-probe | spectrum | model
  std::string command;
  RunConfig config;
  std::filesystem::path out_dir = ".";
  /// Main output file; empty means the command's default name in out_dir.
  std::filesystem::path out_file;
  /// spectrum: yield series to analyse (default out_dir/probe_scan.csv).
  std::filesystem::path input_file;
  /// model: control-scan CSV to compare against.
  std::filesystem::path compare_file;
  std::size_t workers = 1;
  const CancellationToken* cancel = nullptr;
  std::ostream* log = nullptr;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::filesystem::path output;
  std::filesystem::path manifest;
};

/// Runs one subcommand. Throws on configuration, numerical and I/O errors;
/// per-row failures in scans are recorded and reflected in exit_code.
CommandResult execute(const CommandOptions& options);

/// scan-control or scan-probe: ordered CSV rows plus a manifest.
CommandResult run_scan(const CommandOptions& options);

/// execute() with every error reported on `log` and mapped to an exit code.
int run_command(const CommandOptions& options);

/// Worker count from VIBCTL_WORKERS, 0 when unset. Throws ConfigError on
/// a malformed value.
std::size_t workers_from_environment();

}  // namespace vibctl::cli
