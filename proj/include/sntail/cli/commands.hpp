// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sntail/cli/config.hpp"
#include "sntail/cli/emit.hpp"

namespace sntail::cli {

/// Runs the configured command. Library DomainErrors propagate.
Report run_command(const ExperimentConfig& config);

Report run_constants(const ExperimentConfig& config);
Report run_predict(const ExperimentConfig& config);
Report run_bounds(const ExperimentConfig& config);
Report run_oracle(const ExperimentConfig& config);
Report run_mc(const ExperimentConfig& config);
Report run_counterexample(const ExperimentConfig& config);
/// Ledger of printed constants against corrected values and oracles. The
/// code is verification_failure only when two oracles disagree.
Report run_verify(const ExperimentConfig& config);

/// Prints warnings to stderr, emits the report and returns its exit code.
/// Throws IoError.
int finish(const ExperimentConfig& config, const Report& report);

/// Entry point of the tool: parse, run, emit. Returns the process exit code.
int main_entry(const std::vector<std::string>& args);

}  // namespace sntail::cli
