// SPDX-License-Identifier: Apache-2.0
#include "sntail/cli/emit.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace sntail::cli {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return csv_field(x);
        } else {
          return std::to_string(x);
        }
      },
      cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          // Round through the 12-digit text so JSON and CSV show the same number.
          if (!std::isfinite(x)) return nullptr;
          return std::strtod(format_double(x).c_str(), nullptr);
        } else {
          return x;
        }
      },
      cell);
}

void write_to(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  out << text;
  out.close();
  if (!out) throw IoError("cannot write '" + path + "': " + std::strerror(errno));
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  // snprintf with %g ignores LC_NUMERIC only in the C locale, which the tool never changes.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(std::ostream& out, const ExperimentConfig& config, const Report& report) {
  out << "# tool=" << kToolName << " version=" << kToolVersion << " config_hash=" << config_hash(config)
      << " seed=" << config.seed << " command=" << to_string(config.command) << "\n";
  for (std::size_t i = 0; i < report.table.columns.size(); ++i) out << (i ? "," : "") << report.table.columns[i];
  out << "\n";
  for (const auto& row : report.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << "\n";
  }
}

void write_json(std::ostream& out, const ExperimentConfig& config, const Report& report) {
  nlohmann::ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["config_hash"] = config_hash(config);
  doc["seed"] = config.seed;
  doc["command"] = to_string(config.command);
  doc["results"] = nlohmann::ordered_json::array();
  for (const auto& row : report.table.rows) {
    nlohmann::ordered_json rec;
    for (std::size_t i = 0; i < row.size(); ++i) rec[report.table.columns[i]] = cell_json(row[i]);
    doc["results"].push_back(std::move(rec));
  }
  doc["warnings"] = report.warnings;
  out << doc.dump(2) << "\n";
}

void emit(const ExperimentConfig& config, const Report& report) {
  std::ostringstream text;
  if (config.format == Format::json) {
    write_json(text, config, report);
  } else {
    write_csv(text, config, report);
  }
  write_to(config.output, text.str());
}

void save_config(const ExperimentConfig& config, const std::string& path) { write_to(path, to_ini(config)); }

}  // namespace sntail::cli
