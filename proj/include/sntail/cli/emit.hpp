// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sntail/cli/config.hpp"
#include "sntail/cli/ledger.hpp"

namespace sntail::cli {

struct Report {
  Table table;
  std::vector<std::string> warnings;
  ExitCode code = ExitCode::ok;
};

/// 12 significant digits, C locale, shortest of %g forms.
std::string format_double(double x);

void write_csv(std::ostream& out, const ExperimentConfig& config, const Report& report);
void write_json(std::ostream& out, const ExperimentConfig& config, const Report& report);

/// Writes to config.output ("-" for stdout) in config.format. Throws
/// IoError naming the path on failure.
void emit(const ExperimentConfig& config, const Report& report);

/// Writes the canonical INI of `config` to `path`; throws IoError.
void save_config(const ExperimentConfig& config, const std::string& path);

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace sntail::cli
