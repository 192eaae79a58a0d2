#include "vibctl/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <sstream>

#include "vibctl/error.hpp"

#include <fmt/format.h>

#ifndef VIBCTL_VERSION
#define VIBCTL_VERSION "unknown"
#endif

namespace vibctl::cli {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex_digest(std::uint64_t value) { return fmt::format("{:016x}", value); }

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  return fmt::format("{}", value);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : path_(path), columns_(columns.size()) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", path.parent_path().string(), ec.message()));
  }
  out_.open(path);
  if (!out_) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  std::string header;
  for (const auto& c : columns) {
    if (!header.empty()) header += ',';
    header += c;
  }
  out_ << header << '\n';
  out_.flush();
  if (!out_) throw IoError(fmt::format("write to {} failed", path.string()));
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) {
    throw std::logic_error(fmt::format("row has {} values, {} has {} columns", values.size(),
                                       path_.string(), columns_));
  }
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_number(values[i]);
  }
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw IoError(fmt::format("write to {} failed", path_.string()));
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InputError(fmt::format("column '{}' not found", name));
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  auto split = [](const std::string& text) {
    std::vector<std::string> cells;
    std::stringstream ss(text);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    return cells;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.columns.empty()) {
      table.columns = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.columns.size()) {
      throw InputError(fmt::format("{}:{}: {} fields, header has {}", path.string(), line_no,
                                   cells.size(), table.columns.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i] == "nan") {
        row[i] = std::nan("");
        continue;
      }
      const char* b = cells[i].data();
      const char* e = b + cells[i].size();
      const auto [ptr, ec] = std::from_chars(b, e, row[i]);
      if (ec != std::errc() || ptr != e) {
        throw InputError(fmt::format("{}:{}: '{}' is not a number", path.string(), line_no, cells[i]));
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw InputError(fmt::format("{} is empty", path.string()));
  return table;
}

RunManifest::RunManifest(std::string command, std::string config_text, nlohmann::json config)
    : start_(std::chrono::steady_clock::now()) {
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  doc_["tool"] = "vibctl";
  doc_["version"] = version_string();
  doc_["command"] = std::move(command);
  doc_["started_utc"] = stamp;
  doc_["config"] = std::move(config);
  doc_["config_text"] = std::move(config_text);
  doc_["outputs"] = nlohmann::json::array();
  doc_["status"] = "running";
  doc_["summary"] = nlohmann::json::object();
}

void RunManifest::set_curves(std::string source, std::string checksum) {
  doc_["curves"] = {{"source", std::move(source)}, {"fnv1a64", std::move(checksum)}};
}

void RunManifest::add_output(const std::filesystem::path& path) {
  doc_["outputs"].push_back(path.string());
}

void RunManifest::set_rows(std::size_t total, std::size_t completed,
                           const std::vector<std::size_t>& failed) {
  doc_["rows"] = {{"total", total}, {"completed", completed}, {"failed", failed}};
}

void RunManifest::set_status(std::string status) { doc_["status"] = std::move(status); }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json doc = doc_;
  doc["elapsed_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return doc;
}

void RunManifest::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  out << to_json().dump(2) << '\n';
  if (!out) throw IoError(fmt::format("cannot write manifest {}", path.string()));
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  auto p = output;
  p.replace_extension(".manifest.json");
  return p;
}

std::string version_string() { return VIBCTL_VERSION; }

}  // namespace vibctl::cli
