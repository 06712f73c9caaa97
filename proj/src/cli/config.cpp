// SPDX-License-Identifier: Apache-2.0
#include "sntail/cli/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string_view>
#include <utility>

#include "CLI11.hpp"

namespace sntail::cli {

namespace {

template <class E, std::size_t N>
using NameTable = std::array<std::pair<E, const char*>, N>;

constexpr NameTable<Command, 7> kCommands{{{Command::constants, "constants"},
                                           {Command::predict, "predict"},
                                           {Command::bounds, "bounds"},
                                           {Command::oracle, "oracle"},
                                           {Command::mc, "mc"},
                                           {Command::verify, "verify"},
                                           {Command::counterexample, "counterexample"}}};
constexpr NameTable<ModelKind, 6> kModels{{{ModelKind::iid_normal, "iid-normal"},
                                           {ModelKind::iid_student_t, "iid-student-t"},
                                           {ModelKind::iid_folded_normal, "iid-folded-normal"},
                                           {ModelKind::gaussian, "gaussian"},
                                           {ModelKind::rademacher, "rademacher"},
                                           {ModelKind::degenerate_first, "degenerate-first"}}};
constexpr NameTable<VariantChoice, 3> kVariants{
    {{VariantChoice::paper, "paper"}, {VariantChoice::corrected, "corrected"}, {VariantChoice::both, "both"}}};
constexpr NameTable<SideChoice, 3> kSides{
    {{SideChoice::right, "right"}, {SideChoice::left, "left"}, {SideChoice::two_sided, "two-sided"}}};
constexpr NameTable<OracleChoice, 5> kOracles{{{OracleChoice::automatic, "auto"},
                                               {OracleChoice::sphere, "sphere"},
                                               {OracleChoice::region, "region"},
                                               {OracleChoice::enumeration, "enumeration"},
                                               {OracleChoice::degenerate, "degenerate"}}};
constexpr NameTable<IntegrandChoice, 2> kIntegrands{
    {{IntegrandChoice::paper, "paper"}, {IntegrandChoice::weighted, "weighted"}}};
constexpr NameTable<StatChoice, 3> kStats{
    {{StatChoice::sum, "sum"}, {StatChoice::max_zn, "max-zn"}, {StatChoice::max_zk, "max-zk"}}};
constexpr NameTable<Format, 2> kFormats{{{Format::csv, "csv"}, {Format::json, "json"}}};

template <class E, std::size_t N>
const char* name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [e, name] : table)
    if (e == value) return name;
  return "?";
}

template <class E, std::size_t N>
std::string choices(const NameTable<E, N>& table) {
  std::string out;
  for (const auto& [e, name] : table) {
    if (!out.empty()) out += "|";
    out += name;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double x = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc{} || ptr != end || !std::isfinite(x)) return std::nullopt;
  return x;
}

// Integers may be written in scientific notation (1e7) as long as they are exact.
std::optional<std::uint64_t> to_count(std::string_view s) {
  std::uint64_t u = 0;
  const auto* end = s.data() + s.size();
  if (auto [ptr, ec] = std::from_chars(s.data(), end, u); ec == std::errc{} && ptr == end) return u;
  const auto d = to_double(s);
  if (!d || *d < 0.0 || *d > 0x1.0p53 || std::floor(*d) != *d) return std::nullopt;
  return static_cast<std::uint64_t>(*d);
}

std::string print17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (double x : xs) {
    if (!out.empty()) out += ",";
    out += print17(x);
  }
  return out;
}

// Collects violations while converting the raw strings.
class Validator {
public:
  explicit Validator(CLI::App& app) : app_(app) {}

  bool given(const std::string& key) const { return app_.count("--" + key) > 0; }

  template <class E, std::size_t N>
  void choice(const std::string& key, const std::string& raw, const NameTable<E, N>& table, E& out) {
    if (!given(key)) return;
    for (const auto& [e, name] : table) {
      if (raw == name) {
        out = e;
        return;
      }
    }
    fail(key + ": '" + raw + "' is not one of " + choices(table));
  }

  void real(const std::string& key, const std::string& raw, double& out) {
    if (!given(key)) return;
    if (auto d = to_double(raw)) {
      out = *d;
    } else {
      fail(key + ": '" + raw + "' is not a finite number");
    }
  }

  void count(const std::string& key, const std::string& raw, std::uint64_t& out) {
    if (!given(key)) return;
    if (auto u = to_count(raw)) {
      out = *u;
    } else {
      fail(key + ": '" + raw + "' is not a non-negative integer");
    }
  }

  void list(const std::string& key, const std::vector<std::string>& raw, std::vector<double>& out) {
    if (!given(key)) return;
    out.clear();
    for (const auto& item : raw) {
      if (auto d = to_double(item)) {
        out.push_back(*d);
      } else {
        fail(key + ": '" + item + "' is not a finite number");
      }
    }
  }

  void check(bool ok, const std::string& message) {
    if (!ok) fail(message);
  }

  void fail(std::string message) { errors.push_back(std::move(message)); }

  std::vector<std::string> errors;

private:
  CLI::App& app_;
};

std::optional<EpsSpec> parse_eps(const std::string& raw, std::string& error) {
  EpsSpec spec;
  if (raw.find(':') == std::string::npos) {
    auto d = to_double(raw);
    if (!d) {
      error = "eps: '" + raw + "' is not a finite number";
      return std::nullopt;
    }
    spec.start = spec.end = *d;
    return spec;
  }
  std::vector<std::string> parts;
  std::stringstream ss(raw);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 4) {
    error = "eps: grid must be start:end:spacing:count, got '" + raw + "'";
    return std::nullopt;
  }
  const auto a = to_double(parts[0]);
  const auto b = to_double(parts[1]);
  const auto k = to_count(parts[3]);
  if (!a || !b || !k) {
    error = "eps: grid '" + raw + "' has a malformed number";
    return std::nullopt;
  }
  if (parts[2] == "geometric") {
    spec.spacing = EpsSpec::Spacing::geometric;
  } else if (parts[2] == "linear") {
    spec.spacing = EpsSpec::Spacing::linear;
  } else {
    error = "eps: grid spacing must be geometric or linear, got '" + parts[2] + "'";
    return std::nullopt;
  }
  if (*k < 2 || *k > 1000) {
    error = "eps: grid count must lie in [2, 1000]";
    return std::nullopt;
  }
  spec.start = *a;
  spec.end = *b;
  spec.count = static_cast<int>(*k);
  return spec;
}

constexpr const char* kEpsHelp =
    "distance below the maximum: a number, or a grid start:end:spacing:count with spacing "
    "geometric|linear, e.g. 1e-2:1e-5:geometric:7";

// The file was readable, or CLI11 would have thrown FileError already.
void report_unknown_file_keys(const CLI::App& app, const std::vector<std::string>& args, Validator& v) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    const std::string key = item.fullname();
    if (key == "command" || key == "config" || key == "save-config") continue;
    if (app.get_option_no_throw("--" + key) == nullptr) v.fail("unknown key '" + key + "' in " + path);
  }
}

}  // namespace

std::vector<double> EpsSpec::values() const {
  if (spacing == Spacing::single) return {start};
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    out[i] = spacing == Spacing::geometric ? start * std::pow(end / start, t) : start + (end - start) * t;
  }
  out.back() = end;
  return out;
}

std::string EpsSpec::text() const {
  if (spacing == Spacing::single) return print17(start);
  return print17(start) + ":" + print17(end) + ":" + (spacing == Spacing::geometric ? "geometric" : "linear") + ":" +
         std::to_string(count);
}

int default_workers() {
  if (const char* env = std::getenv("SNTAIL_WORKERS")) {
    if (auto u = to_count(env); u && *u >= 1 && *u <= 256) return static_cast<int>(*u);
  }
  return 1;
}

ParseResult parse_arguments(const std::vector<std::string>& args) {
  CLI::App app{"Tail of self-normalized sums near the Hoelder maximum: constants, asymptotic predictions, "
               "non-asymptotic bounds, exact oracles and Monte Carlo, with a verification ledger.",
               kToolName};
  app.allow_extras();
  // Unknown file keys are reported by name below, all of them at once.
  app.allow_config_extras(CLI::config_extras_mode::ignore);

  std::string command, model, mu, sigma, nu, shift, n, beta, eps, side, variant, gamma, oracle, integrand, stat,
      trials, seed, workers, format, output;
  std::vector<std::string> mean, cov;
  std::string save_path;

  app.add_option("command", command, "constants|predict|bounds|oracle|mc|verify|counterexample")->required();
  app.add_option("--model", model, "distribution of the coordinates: " + choices(kModels));
  app.add_option("--mu", mu, "iid-normal location");
  app.add_option("--sigma", sigma, "iid-normal scale");
  app.add_option("--nu", nu, "iid-student-t degrees of freedom (> 2)");
  app.add_option("--shift", shift, "iid-folded-normal shift: coordinates are shift + |Z|");
  app.add_option("--mean", mean, "gaussian mean, comma separated")->delimiter(',');
  app.add_option("--cov", cov, "gaussian covariance, row-major, comma separated")->delimiter(',');
  app.add_option("--n", n, "sample size (>= 2)");
  app.add_option("--beta", beta, "norm exponent (> 1)");
  app.add_option("--eps", eps, kEpsHelp);
  app.add_option("--side", side, choices(kSides));
  app.add_option("--variant", variant, choices(kVariants));
  app.add_option("--gamma", gamma, "profile exponent for the vanishing-profile law (> 1 - n)");
  app.add_option("--oracle", oracle, choices(kOracles));
  app.add_option("--integrand", integrand, "region quadrature integrand: " + choices(kIntegrands));
  app.add_option("--stat", stat, choices(kStats));
  app.add_option("--trials", trials, "Monte Carlo trials, scientific notation allowed");
  app.add_option("--seed", seed, "Monte Carlo seed");
  app.add_option("--workers", workers, "threads (default $SNTAIL_WORKERS or 1); results do not depend on it");
  app.add_option("--format", format, choices(kFormats));
  app.add_option("--output", output, "output path, - for stdout");
  app.add_option("--save-config", save_path, "write the effective configuration as INI and continue");
  app.set_config("--config", "", "flat key=value file; command-line flags override it");

  ParseResult result;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.help = app.help();
    return result;
  } catch (const CLI::FileError& e) {
    result.errors.emplace_back(e.what());
    result.code = ExitCode::io;
    return result;
  } catch (const CLI::ParseError& e) {
    result.errors.emplace_back(e.what());
    result.code = ExitCode::usage;
    return result;
  }

  Validator v(app);
  report_unknown_file_keys(app, args, v);
  std::string last_flag;
  for (const auto& extra : app.remaining()) {
    if (extra.rfind("-", 0) == 0) {
      last_flag = extra;
      v.fail("unknown option '" + extra + "'");
    } else if (last_flag.empty()) {
      v.fail("unexpected argument '" + extra + "'");
    }
  }

  ExperimentConfig c;
  c.workers = default_workers();
  bool command_ok = false;
  for (const auto& [e, name] : kCommands) {
    if (command == name) {
      c.command = e;
      command_ok = true;
    }
  }
  if (!command_ok) v.fail("command: '" + command + "' is not one of " + choices(kCommands));

  v.choice("model", model, kModels, c.model);
  v.real("mu", mu, c.mu);
  v.real("sigma", sigma, c.sigma);
  v.real("nu", nu, c.nu);
  v.real("shift", shift, c.shift);
  v.list("mean", mean, c.mean);
  v.list("cov", cov, c.cov);
  std::uint64_t n_raw = static_cast<std::uint64_t>(c.n);
  v.count("n", n, n_raw);
  v.real("beta", beta, c.beta);
  if (v.given("eps")) {
    std::string error;
    if (auto spec = parse_eps(eps, error)) {
      c.eps = *spec;
    } else {
      v.fail(error);
    }
  }
  v.choice("side", side, kSides, c.side);
  v.choice("variant", variant, kVariants, c.variant);
  if (v.given("gamma")) {
    double g = 0.0;
    v.real("gamma", gamma, g);
    c.gamma = g;
  }
  v.choice("oracle", oracle, kOracles, c.oracle);
  v.choice("integrand", integrand, kIntegrands, c.integrand);
  v.choice("stat", stat, kStats, c.stat);
  v.count("trials", trials, c.trials);
  v.count("seed", seed, c.seed);
  std::uint64_t workers_raw = static_cast<std::uint64_t>(c.workers);
  v.count("workers", workers, workers_raw);
  v.choice("format", format, kFormats, c.format);
  if (v.given("output")) {
    v.check(!output.empty(), "output: path must not be empty");
    c.output = output;
  }

  v.check(n_raw >= 2, "n must be >= 2");
  v.check(n_raw <= 100000, "n must be <= 100000");
  c.n = static_cast<int>(std::min<std::uint64_t>(n_raw, 100000));
  v.check(c.beta > 1.0, "beta must be > 1");
  for (double e : c.eps.values()) {
    if (!(e > 0.0)) {
      v.fail("eps values must be > 0");
      break;
    }
  }
  v.check(c.sigma > 0.0, "sigma must be > 0");
  v.check(c.nu > 2.0, "nu must be > 2");
  v.check(c.shift > 0.0, "shift must be > 0");
  if (c.gamma) v.check(*c.gamma > 1.0 - c.n, "gamma must exceed 1 - n");
  v.check(c.trials >= 1000, "trials must be >= 1000");
  v.check(workers_raw >= 1 && workers_raw <= 256, "workers must lie in [1, 256]");
  c.workers = static_cast<int>(std::clamp<std::uint64_t>(workers_raw, 1, 256));
  if (c.model == ModelKind::gaussian) {
    const auto nn = static_cast<std::size_t>(c.n);
    if (c.mean.empty()) c.mean.assign(nn, 0.0);
    v.check(c.mean.size() == nn, "mean must have n entries");
    v.check(c.cov.size() == nn * nn, "cov must have n*n entries (row-major)");
  } else {
    v.check(c.mean.empty() && c.cov.empty(), "mean and cov apply only to the gaussian model");
  }
  if (c.side != SideChoice::right) v.check(c.beta == 2.0, "left and two-sided tails need beta = 2");

  if (v.given("save-config")) result.save_config_path = save_path;
  if (!v.errors.empty()) {
    result.errors = std::move(v.errors);
    result.code = ExitCode::usage;
    return result;
  }
  result.config = std::move(c);
  return result;
}

std::string to_ini(const ExperimentConfig& c) {
  std::string out;
  const auto line = [&out](const char* key, const std::string& value) {
    out += key;
    out += "=";
    out += value;
    out += "\n";
  };
  line("command", to_string(c.command));
  line("model", to_string(c.model));
  line("mu", print17(c.mu));
  line("sigma", print17(c.sigma));
  line("nu", print17(c.nu));
  line("shift", print17(c.shift));
  if (!c.mean.empty()) line("mean", "\"" + join(c.mean) + "\"");
  if (!c.cov.empty()) line("cov", "\"" + join(c.cov) + "\"");
  line("n", std::to_string(c.n));
  line("beta", print17(c.beta));
  line("eps", c.eps.text());
  line("side", to_string(c.side));
  line("variant", to_string(c.variant));
  if (c.gamma) line("gamma", print17(*c.gamma));
  line("oracle", to_string(c.oracle));
  line("integrand", to_string(c.integrand));
  line("stat", to_string(c.stat));
  line("trials", std::to_string(c.trials));
  line("seed", std::to_string(c.seed));
  line("workers", std::to_string(c.workers));
  line("format", to_string(c.format));
  line("output", "\"" + c.output + "\"");
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.format = Format::csv;
  c.output = "-";
  c.workers = 1;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_ini(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const char* to_string(Command c) { return name_of(kCommands, c); }
const char* to_string(ModelKind m) { return name_of(kModels, m); }
const char* to_string(VariantChoice v) { return name_of(kVariants, v); }
const char* to_string(SideChoice s) { return name_of(kSides, s); }
const char* to_string(OracleChoice o) { return name_of(kOracles, o); }
const char* to_string(IntegrandChoice i) { return name_of(kIntegrands, i); }
const char* to_string(StatChoice s) { return name_of(kStats, s); }
const char* to_string(Format f) { return name_of(kFormats, f); }

}  // namespace sntail::cli
