#pragma once

// Run configuration (JSON), CSV tables and run manifests.

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bv/core.hpp"
#include "bv/error.hpp"

namespace bv {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  ExponentConfig exponents;
  GridSpec grid;
  std::string source;  ///< path the config came from, empty for defaults
};

/// Schema: {"n": int, "alpha": float, "beta": float, "grid": {"r0", "rmax", "nodes"}}.
/// Missing keys fall back to (3, 2, 3) and the default grid.
inline RunConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  try {
    const int n = j.value("n", 3);
    const double alpha = j.value("alpha", 2.0);
    const double beta = j.value("beta", 3.0);
    RunConfig cfg{validate_config(n, alpha, beta), GridSpec{}, {}};
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      cfg.grid.r0 = g.value("r0", cfg.grid.r0);
      cfg.grid.rmax = g.value("rmax", cfg.grid.rmax);
      cfg.grid.nodes = g.value("nodes", cfg.grid.nodes);
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "config " + path + ": " + e.what());
  }
  RunConfig cfg = parse_config(j);
  cfg.source = path;
  return cfg;
}

inline nlohmann::json to_json(const RunConfig& cfg) {
  return {{"n", cfg.exponents.n},
          {"alpha", cfg.exponents.alpha},
          {"beta", cfg.exponents.beta},
          {"grid", {{"r0", cfg.grid.r0}, {"rmax", cfg.grid.rmax}, {"nodes", cfg.grid.nodes}}}};
}

/// 17 significant digits: doubles round-trip exactly.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Column-major CSV with a header row.
inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::span<const double>>& columns) {
  if (header.size() != columns.size()) throw Error(ErrorCode::InvalidArgument, "header/column count mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw Error(ErrorCode::InvalidArgument, "CSV columns differ in length");
  }
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << format_double(columns[k][i]);
    out << '\n';
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return columns[k];
    }
    throw Error(ErrorCode::InvalidArgument, "CSV has no column " + name);
  }
};

inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidArgument, "empty CSV");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  table.columns.resize(table.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= table.columns.size()) throw Error(ErrorCode::InvalidArgument, "CSV row longer than header");
      try {
        table.columns[k++].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "bad CSV number: " + cell);
      }
    }
    if (k != table.columns.size()) throw Error(ErrorCode::InvalidArgument, "CSV row shorter than header");
  }
  return table;
}

struct RunManifest {
  std::string config_path;
  std::string subcommand;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> outputs;
  long long seed = 0;
  std::string version = kVersion;
};

inline nlohmann::json to_json(const RunManifest& m) {
  return {{"config", m.config_path}, {"subcommand", m.subcommand}, {"parameters", m.parameters},
          {"outputs", m.outputs},    {"seed", m.seed},             {"version", m.version}};
}

inline std::string manifest_path(const std::string& out) { return out + ".manifest.json"; }

inline void write_manifest(const RunManifest& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  f << to_json(m).dump(2) << '\n';
}

}  // namespace bv
