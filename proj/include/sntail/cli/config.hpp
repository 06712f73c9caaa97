// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration shared by every subcommand: command-line flags,
// an optional flat INI file (flags win), and the canonical INI form used for
// --save-config and the config hash.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sntail::cli {

inline constexpr const char* kToolName = "sntail";
inline constexpr const char* kToolVersion = "0.1.0";

enum class ExitCode : int { ok = 0, verification_failure = 1, usage = 2, io = 3 };

enum class Command { constants, predict, bounds, oracle, mc, verify, counterexample };
enum class ModelKind { iid_normal, iid_student_t, iid_folded_normal, gaussian, rademacher, degenerate_first };
enum class VariantChoice { paper, corrected, both };
enum class SideChoice { right, left, two_sided };
enum class OracleChoice { automatic, sphere, region, enumeration, degenerate };
enum class IntegrandChoice { paper, weighted };
enum class StatChoice { sum, max_zn, max_zk };
enum class Format { csv, json };

/// Single value, or `start:end:spacing:count` with spacing geometric|linear.
struct EpsSpec {
  enum class Spacing { single, geometric, linear };
  double start = 0.1;
  double end = 0.1;
  Spacing spacing = Spacing::single;
  int count = 1;

  std::vector<double> values() const;
  std::string text() const;
  bool operator==(const EpsSpec&) const = default;
};

struct ExperimentConfig {
  Command command = Command::predict;
  ModelKind model = ModelKind::iid_normal;
  double mu = 0.0;
  double sigma = 1.0;
  double nu = 5.0;
  double shift = 1.0;
  std::vector<double> mean;  ///< gaussian model, length n
  std::vector<double> cov;   ///< gaussian model, n x n row-major
  int n = 2;
  double beta = 2.0;
  EpsSpec eps;
  SideChoice side = SideChoice::right;
  VariantChoice variant = VariantChoice::both;
  std::optional<double> gamma;
  OracleChoice oracle = OracleChoice::automatic;
  IntegrandChoice integrand = IntegrandChoice::weighted;
  StatChoice stat = StatChoice::sum;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  int workers = 1;
  Format format = Format::csv;
  std::string output = "-";  ///< "-" is standard output

  bool operator==(const ExperimentConfig&) const = default;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;
  ExitCode code = ExitCode::ok;
  std::string help;                 ///< set when --help was requested
  std::optional<std::string> save_config_path;
};

/// Parses `args` (without the program name). On failure `errors` lists every
/// violation found and `code` is usage (or io for an unreadable --config).
ParseResult parse_arguments(const std::vector<std::string>& args);

/// Canonical flat INI. Doubles use 17 significant digits so that parsing the
/// text back yields the same config.
std::string to_ini(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical INI without the presentation keys
/// (format, output, workers), as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Worker default: $SNTAIL_WORKERS when it holds a positive integer, else 1.
int default_workers();

const char* to_string(Command c);
const char* to_string(ModelKind m);
const char* to_string(VariantChoice v);
const char* to_string(SideChoice s);
const char* to_string(OracleChoice o);
const char* to_string(IntegrandChoice i);
const char* to_string(StatChoice s);
const char* to_string(Format f);

}  // namespace sntail::cli
