#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace vibctl::cli {

/// Output file could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 64-bit FNV-1a, printed as 16 hex digits.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex_digest(std::uint64_t value);

/// Shortest text that reads back to the same double; "nan" for NaN.
std::string format_number(double value);

/// Comma-separated rows, flushed as they are written so an interrupted run
/// leaves every completed row on disk.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);

  void row(std::span<const double> values);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws InputError when absent.
  std::size_t column(std::string_view name) const;
};

/// Reads a numeric CSV with one header line. Errors name the line.
CsvTable read_csv(const std::filesystem::path& path);

/// Everything needed to rerun a command exactly.
class RunManifest {
 public:
  RunManifest(std::string command, std::string config_text, nlohmann::json config);

  void set_curves(std::string source, std::string checksum);
  void add_output(const std::filesystem::path& path);
  void set_rows(std::size_t total, std::size_t completed, const std::vector<std::size_t>& failed);
  void set_status(std::string status);
  nlohmann::json& summary() noexcept { return doc_["summary"]; }

  nlohmann::json to_json() const;
  /// Writes the manifest; timing is taken at the moment of writing.
  void write(const std::filesystem::path& path) const;

 private:
  nlohmann::json doc_;
  std::chrono::steady_clock::time_point start_;
};

/// Replaces the extension of `output` with ".manifest.json".
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

std::string version_string();

}  // namespace vibctl::cli
