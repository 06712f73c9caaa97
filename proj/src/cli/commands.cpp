// SPDX-License-Identifier: Apache-2.0
#include "sntail/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>

#include "sntail/analytic.hpp"
#include "sntail/asymptotics.hpp"
#include "sntail/bounds.hpp"
#include "sntail/error.hpp"
#include "sntail/montecarlo.hpp"
#include "sntail/oracles.hpp"

namespace sntail::cli {

namespace {

using asymptotics::Side;
using asymptotics::Variant;

bool is_density(ModelKind m) { return m != ModelKind::rademacher && m != ModelKind::degenerate_first; }

density::DensityModel make_density(const ExperimentConfig& c) {
  switch (c.model) {
    case ModelKind::iid_normal:
      return density::DensityModel::iid(density::Normal{c.mu, c.sigma}, c.n);
    case ModelKind::iid_student_t:
      return density::DensityModel::iid(density::StudentT{c.nu}, c.n);
    case ModelKind::iid_folded_normal:
      return density::DensityModel::iid(density::FoldedNormal{c.shift}, c.n);
    case ModelKind::gaussian: {
      const Eigen::VectorXd mean = Eigen::Map<const Eigen::VectorXd>(c.mean.data(), c.n);
      const Eigen::MatrixXd cov =
          Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(c.cov.data(), c.n,
                                                                                                   c.n);
      return density::DensityModel::gaussian(mean, cov);
    }
    default:
      throw DomainError(std::string("model '") + to_string(c.model) + "' has no density; use a continuous model");
  }
}

mc::SamplerModel make_sampler_model(const ExperimentConfig& c) {
  if (c.model == ModelKind::rademacher) return mc::Rademacher{};
  if (c.model == ModelKind::degenerate_first) return mc::DegenerateFirstCoordinate{};
  return make_density(c);
}

mc::SamplerSpec sampler_spec(const ExperimentConfig& c) {
  return {make_sampler_model(c), c.n, c.seed, c.trials, c.workers};
}

Side side_of(SideChoice s) {
  switch (s) {
    case SideChoice::left:
      return Side::left;
    case SideChoice::two_sided:
      return Side::two_sided;
    default:
      return Side::right;
  }
}

std::vector<Variant> variants_of(VariantChoice v) {
  if (v == VariantChoice::paper) return {Variant::paper};
  if (v == VariantChoice::corrected) return {Variant::corrected};
  return {Variant::paper, Variant::corrected};
}

mc::StatisticVariant stat_of(StatChoice s) {
  switch (s) {
    case StatChoice::max_zn:
      return mc::StatisticVariant::max_over_zn;
    case StatChoice::max_zk:
      return mc::StatisticVariant::max_over_zk;
    default:
      return mc::StatisticVariant::sum;
  }
}

void add_warnings(Report& r, const std::vector<std::string>& ws) {
  for (const auto& w : ws)
    if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) r.warnings.push_back(w);
}

std::string fmt(double x) { return format_double(x); }

// Exact sphere tail applies to spherically symmetric laws at beta = 2.
bool sphere_applies(const ExperimentConfig& c, const density::DensityModel& m) {
  return c.beta == 2.0 && m.spherically_symmetric();
}

double sphere_tail(int n, double eps, Side side) {
  const double right = oracles::sphere_tail_near_max(n, eps).value;
  return side == Side::two_sided ? 2.0 * right : right;
}

// Corrected leading-order prediction, or nothing when it does not apply.
std::optional<double> corrected_prediction(const ExperimentConfig& c, double eps) {
  if (!is_density(c.model)) return std::nullopt;
  try {
    const asymptotics::TailQuery q{c.n, eps, c.beta, side_of(c.side)};
    return asymptotics::predict_tail(make_density(c), q, Variant::corrected).value;
  } catch (const Error&) {
    return std::nullopt;
  }
}

void rare_event_warning(Report& r, const ExperimentConfig& c, double eps, double expected) {
  if (expected * static_cast<double>(c.trials) < 50.0) {
    r.warnings.push_back("eps=" + fmt(eps) + ": expected hits " + fmt(expected * static_cast<double>(c.trials)) +
                         " < 50; the estimate is dominated by sampling noise, raise --trials");
  }
}

}  // namespace

Report run_constants(const ExperimentConfig& c) {
  Report r;
  r.table.columns = {"n", "beta", "variant", "determinant", "det_numeric", "K", "log_K", "ball_volume"};
  const analytic::AntiHessianSpec spec{c.n, c.beta};
  spec.validate();
  Cell numeric;
  if (c.n - 1 <= analytic::kMaxDenseSize) numeric = analytic::det_numeric(analytic::build_anti_hessian(spec));
  for (Variant v : variants_of(c.variant)) {
    const auto k = asymptotics::k_constant(c.n, c.beta, v);
    r.table.add({std::int64_t{c.n}, c.beta, std::string(asymptotics::to_string(v)), k.determinant, numeric, k.value,
                 k.log_value, k.ball_volume});
  }
  return r;
}

Report run_predict(const ExperimentConfig& c) {
  Report r;
  r.table.columns = {"n", "beta", "eps", "side", "variant", "K", "h", "constant", "exponent", "value"};
  if (c.gamma) {
    for (double eps : c.eps.values()) {
      const auto p = asymptotics::predict_gamma_variant({c.n, *c.gamma, eps});
      r.table.add({std::int64_t{c.n}, c.beta, eps, std::string(to_string(c.side)), std::string("gamma"), p.k, p.h,
                   p.constant, p.exponent, p.value});
      add_warnings(r, p.warnings);
    }
    return r;
  }
  const auto model = make_density(c);
  for (double eps : c.eps.values()) {
    for (Variant v : variants_of(c.variant)) {
      const auto p = asymptotics::predict_tail(model, {c.n, eps, c.beta, side_of(c.side)}, v);
      r.table.add({std::int64_t{c.n}, c.beta, eps, std::string(to_string(c.side)),
                   std::string(asymptotics::to_string(v)), p.k, p.h, p.constant, p.exponent, p.value});
      add_warnings(r, p.warnings);
    }
  }
  return r;
}

Report run_bounds(const ExperimentConfig& c) {
  Report r;
  r.table.columns = {"n", "beta", "eps", "lambda", "mu", "h_sup", "g_inf", "lower", "upper", "integral", "holds"};
  const auto model = make_density(c);
  const auto curv = bounds::curvature_functionals(c.n, c.beta);
  if (!curv.certified) r.warnings.push_back("curvature search did not converge everywhere");
  for (double eps : c.eps.values()) {
    if (!(eps < curv.lambda)) {
      r.warnings.push_back("eps=" + fmt(eps) + " skipped: the envelopes need eps < lambda = " + fmt(curv.lambda));
      continue;
    }
    if (c.n <= 4) {
      const auto s = bounds::validate_sandwich(model, c.n, eps, c.beta);
      const auto& b = s.certificate;
      r.table.add({std::int64_t{c.n}, c.beta, eps, b.lambda, b.mu, b.h_sup, b.g_inf, b.lower, b.upper,
                   s.integral.value, s.holds});
      if (!s.holds) r.warnings.push_back("sandwich fails at eps=" + fmt(eps) + ": " + s.diagnostics);
    } else {
      const auto b = bounds::envelope_bounds(model, c.n, eps, curv.lambda, curv.mu, c.beta);
      r.table.add({std::int64_t{c.n}, c.beta, eps, b.lambda, b.mu, b.h_sup, b.g_inf, b.lower, b.upper, Cell{}, Cell{}});
    }
  }
  return r;
}

Report run_oracle(const ExperimentConfig& c) {
  Report r;
  r.table.columns = {"n", "beta", "eps", "side", "method", "integrand", "value", "error_estimate"};
  OracleChoice kind = c.oracle;
  if (kind == OracleChoice::automatic) {
    if (c.model == ModelKind::rademacher) {
      kind = OracleChoice::enumeration;
    } else if (c.model == ModelKind::degenerate_first) {
      kind = OracleChoice::degenerate;
    } else {
      kind = sphere_applies(c, make_density(c)) ? OracleChoice::sphere : OracleChoice::region;
    }
  }
  const Side side = side_of(c.side);
  for (double eps : c.eps.values()) {
    oracles::OracleResult o;
    switch (kind) {
      case OracleChoice::sphere:
        if (!sphere_applies(c, make_density(c)))
          throw DomainError("the sphere oracle needs a spherically symmetric model and beta = 2");
        o = oracles::sphere_tail_near_max(c.n, eps);
        o.value = sphere_tail(c.n, eps, side);
        break;
      case OracleChoice::region:
        o = oracles::region_tail_integral(make_density(c), c.n, eps, c.beta,
                                          c.integrand == IntegrandChoice::paper ? oracles::RegionIntegrand::paper
                                                                                : oracles::RegionIntegrand::weighted,
                                          side);
        break;
      case OracleChoice::enumeration:
        if (c.model != ModelKind::rademacher || c.beta != 2.0 || side != Side::right)
          throw DomainError("enumeration needs the rademacher model, beta = 2 and the right tail");
        o = oracles::rademacher_tail_enumerate(c.n, std::sqrt(static_cast<double>(c.n)) - eps);
        break;
      case OracleChoice::degenerate:
        if (c.model != ModelKind::degenerate_first || c.beta != 2.0 || side != Side::right)
          throw DomainError("the degenerate oracle needs the degenerate-first model, beta = 2 and the right tail");
        o = oracles::degenerate_component_check(c.n, eps);
        break;
      case OracleChoice::automatic:
        break;
    }
    r.table.add({std::int64_t{c.n}, c.beta, eps, std::string(to_string(c.side)),
                 std::string(oracles::to_string(o.method)), o.integrand.empty() ? Cell{} : Cell{o.integrand}, o.value,
                 o.error_estimate});
  }
  return r;
}

Report run_mc(const ExperimentConfig& c) {
  Report r;
  r.table.columns = {"n", "beta", "eps", "model", "stat", "hits", "trials", "p_hat", "ci_low", "ci_high", "seed"};
  if (c.side != SideChoice::right) throw DomainError("mc estimates the right tail only");
  const auto spec = sampler_spec(c);
  const double top = analytic::criterion_max(c.n, c.beta);
  for (double eps : c.eps.values()) {
    const auto e = mc::estimate_tail(spec, {c.beta, stat_of(c.stat)}, top - eps);
    r.table.add({std::int64_t{c.n}, c.beta, eps, std::string(to_string(c.model)), std::string(to_string(c.stat)),
                 e.hits, e.trials, e.p_hat, e.ci_low, e.ci_high, e.seed});
    if (c.stat == StatChoice::sum) {
      if (c.model == ModelKind::rademacher) {
        rare_event_warning(r, c, eps, std::ldexp(1.0, -c.n));
      } else if (auto p = corrected_prediction(c, eps)) {
        rare_event_warning(r, c, eps, *p);
      }
    }
  }
  return r;
}

Report run_counterexample(const ExperimentConfig& c) {
  Report r;
  r.table.columns = {"model", "n", "eps", "claim", "oracle", "hits", "trials", "p_hat", "ci_low", "ci_high", "status"};
  if (is_density(c.model)) throw DomainError("counterexample needs --model rademacher or degenerate-first");
  if (c.beta != 2.0) throw DomainError("counterexample is defined for beta = 2");
  const auto spec = sampler_spec(c);
  const double root_n = std::sqrt(static_cast<double>(c.n));
  for (double eps : c.eps.values()) {
    std::optional<double> claim;
    double oracle = 0.0;
    if (c.model == ModelKind::rademacher) {
      if (eps < 1.0 / (2.0 * root_n)) claim = std::ldexp(1.0, -c.n);
      oracle = oracles::rademacher_tail_enumerate(c.n, root_n - eps).value;
    } else {
      if (eps < root_n - std::sqrt(c.n - 1.0)) claim = 0.0;
      oracle = oracles::degenerate_component_check(c.n, eps).value;
    }
    const auto e = mc::estimate_tail(spec, {}, root_n - eps);
    Status status = Status::untested;
    if (claim) {
      const bool covered = *claim == 0.0 ? e.hits == 0 : (e.ci_low <= *claim && *claim <= e.ci_high);
      status = oracle == *claim && covered ? Status::confirmed : Status::discrepant;
    } else {
      r.warnings.push_back("eps=" + fmt(eps) + " lies outside the window where the closed-form claim applies");
    }
    r.table.add({std::string(to_string(c.model)), std::int64_t{c.n}, eps, claim ? Cell{*claim} : Cell{}, oracle, e.hits,
                 e.trials, e.p_hat, e.ci_low, e.ci_high, std::string(to_string(status))});
  }
  return r;
}

Report run_verify(const ExperimentConfig& c) {
  Report r;
  std::vector<LedgerEntry> ledger;
  bool inconsistent = false;
  const int n = c.n;
  const double beta = c.beta;
  const analytic::AntiHessianSpec spec{n, beta};
  spec.validate();
  const std::string at_n = "(n=" + std::to_string(n) + ",beta=" + fmt(beta) + ")";

  // Determinant: printed formula, eigenvalue product, LU.
  if (n - 1 <= analytic::kMaxDenseSize) {
    const double closed = analytic::det_anti_hessian(spec);
    const double lu = analytic::det_numeric(analytic::build_anti_hessian(spec));
    auto e = make_entry("det A" + at_n, analytic::det_anti_hessian_paper(spec), closed, lu, 1e-10);
    if (std::fabs(closed - lu) > 1e-10 * std::fabs(lu)) {
      inconsistent = true;
      e.note = "eigenvalue product disagrees with LU";
    }
    ledger.push_back(e);
  } else {
    ledger.push_back(make_entry("log det A" + at_n, analytic::log_det_anti_hessian_paper(spec),
                                analytic::log_det_anti_hessian(spec), std::nullopt, 1e-10,
                                "dense factorization skipped above n-1=64"));
  }

  const auto kp = asymptotics::k_constant(n, beta, Variant::paper);
  const auto kc = asymptotics::k_constant(n, beta, Variant::corrected);
  ledger.push_back(make_entry("K" + at_n, kp.value, kc.value, std::nullopt, 1e-10, "no independent oracle"));
  if (beta == 2.0) {
    const double kb = asymptotics::k_constant_beta_form(n, beta, Variant::corrected).value;
    auto e = make_entry("K beta-form vs classical" + at_n, std::nullopt, kb, kc.value, 1e-12);
    if (e.status == Status::discrepant) inconsistent = true;
    ledger.push_back(e);
  }

  const std::vector<double> eps_values = c.eps.values();
  const double eps0 = eps_values.front();
  const double root_n = std::sqrt(static_cast<double>(n));

  if (is_density(c.model)) {
    const auto model = make_density(c);
    const Side side = side_of(c.side);
    const auto pp = asymptotics::predict_tail(model, {n, eps0, beta, side}, Variant::paper);
    const auto pc = asymptotics::predict_tail(model, {n, eps0, beta, side}, Variant::corrected);
    const bool sphere = sphere_applies(c, model);
    const bool region = n <= 4;

    // Leading coefficient of the exact tail.
    std::function<double(double)> tail;
    std::vector<double> grid;
    if (sphere) {
      tail = [n, side](double e) { return sphere_tail(n, e, side); };
      grid = eps_values.size() >= 4 ? eps_values : oracles::geometric_grid(1e-2, 1e-5, 7);
    } else if (region) {
      const oracles::RegionOptions opts{1e-9, {}};
      tail = [&model, n, beta, side, opts](double e) {
        return oracles::region_tail_integral(model, n, e, beta, oracles::RegionIntegrand::weighted, side, opts).value;
      };
      grid = oracles::geometric_grid(1e-3, 1e-5, 5);
    }
    if (tail) {
      const auto fit = oracles::leading_coeff_fit(tail, n, grid);
      ledger.push_back(make_entry("leading constant" + at_n, pp.constant, pc.constant, fit.coefficient, 1e-2,
                                  std::string("fit of the ") + (sphere ? "sphere" : "region") + " oracle over eps in [" +
                                      fmt(grid.back()) + "," + fmt(grid.front()) + "]"));
      ledger.push_back(make_entry("exponent" + at_n, pp.exponent, pc.exponent, fit.exponent, 2e-3));
    } else {
      ledger.push_back(make_entry("leading constant" + at_n, pp.constant, pc.constant, std::nullopt, 1e-2,
                                  "no exact oracle for this model and n"));
    }

    // Two independent oracles must agree.
    std::optional<double> exact;
    if (sphere) exact = sphere_tail(n, eps0, side);
    if (sphere && region) {
      try {
        const double q = oracles::region_tail_integral(model, n, eps0, beta, oracles::RegionIntegrand::weighted, side).value;
        auto e = make_entry("q(eps=" + fmt(eps0) + ") region vs sphere", std::nullopt, q, *exact, 1e-6);
        if (e.status == Status::discrepant) inconsistent = true;
        ledger.push_back(e);
      } catch (const RegionError& err) {
        r.warnings.push_back(std::string("region cross-check skipped: ") + err.what());
      }
    } else if (region) {
      try {
        exact = oracles::region_tail_integral(model, n, eps0, beta, oracles::RegionIntegrand::weighted, side).value;
      } catch (const RegionError& err) {
        r.warnings.push_back(std::string("region oracle skipped: ") + err.what());
      }
    }
    if (exact) {
      ledger.push_back(make_entry("q(eps=" + fmt(eps0) + ") prediction vs exact", pp.value, pc.value, *exact, 5e-2,
                                  "leading-order prediction at finite eps"));
    }

    // Envelope bounds around the unweighted region integral.
    if (n <= 3 && side == Side::right) {
      const auto curv = bounds::curvature_functionals(n, beta);
      const auto [eig_lo, eig_hi] = analytic::anti_hessian_eigen_range(spec);
      LedgerEntry lam{"lambda <= eig_min/2", std::nullopt, curv.lambda, 0.5 * eig_lo,
                      curv.lambda <= 0.5 * eig_lo ? Status::confirmed : Status::discrepant, ""};
      LedgerEntry mu{"mu >= eig_max/2", std::nullopt, curv.mu, 0.5 * eig_hi,
                     curv.mu >= 0.5 * eig_hi ? Status::confirmed : Status::discrepant, ""};
      ledger.push_back(lam);
      ledger.push_back(mu);
      // The envelopes need eps < lambda; fall back to lambda / 2 otherwise.
      const double eps_s = eps0 < curv.lambda ? eps0 : 0.5 * curv.lambda;
      const auto s = bounds::validate_sandwich(model, n, eps_s, beta);
      std::string note = "paper=lower bound, corrected=upper bound, oracle=unweighted region integral";
      if (eps_s != eps0) note += "; eps >= lambda so lambda/2 is used";
      ledger.push_back({"sandwich lower<=I<=upper at eps=" + fmt(eps_s), s.certificate.lower, s.certificate.upper,
                        s.integral.value, s.holds ? Status::confirmed : Status::discrepant, note});
    }

    // Monte Carlo agreement with the exact tail.
    if (side == Side::right && exact) {
      const auto e = mc::estimate_tail(sampler_spec(c), {beta, mc::StatisticVariant::sum},
                                       analytic::criterion_max(n, beta) - eps0);
      const bool covered = e.ci_low <= *exact && *exact <= e.ci_high;
      ledger.push_back({"MC q(eps=" + fmt(eps0) + ")", std::nullopt, e.p_hat, *exact,
                        covered ? Status::confirmed : Status::discrepant,
                        "95% CI [" + fmt(e.ci_low) + "," + fmt(e.ci_high) + "] over " + std::to_string(e.trials) +
                            " trials"});
      rare_event_warning(r, c, eps0, *exact);
    }
  } else if (c.model == ModelKind::rademacher) {
    if (beta != 2.0) throw DomainError("the rademacher ledger is defined for beta = 2");
    const double eps = eps0 < 1.0 / (2.0 * root_n) ? eps0 : 0.5 / (2.0 * root_n);
    const double atom = std::ldexp(1.0, -n);
    const double enumerated = n <= 24 ? oracles::rademacher_tail_exact(n, eps).value : atom;
    ledger.push_back(make_entry("rademacher q(eps=" + fmt(eps) + ")", atom, std::nullopt,
                                n <= 24 ? std::optional<double>(enumerated) : std::nullopt, 0.0,
                                "tail is the atom at (1,...,1)"));
    const auto e = mc::estimate_tail(sampler_spec(c), {}, root_n - eps);
    const bool covered = e.ci_low <= atom && atom <= e.ci_high;
    ledger.push_back({"MC rademacher q(eps=" + fmt(eps) + ")", atom, std::nullopt, e.p_hat,
                      covered ? Status::confirmed : Status::discrepant,
                      "95% CI [" + fmt(e.ci_low) + "," + fmt(e.ci_high) + "]"});
  } else {
    if (beta != 2.0) throw DomainError("the degenerate ledger is defined for beta = 2");
    if (n < 3) throw DomainError("the degenerate-first model needs n >= 3");
    const double window = root_n - std::sqrt(n - 1.0);
    const double eps = eps0 < window ? eps0 : 0.5 * window;
    const double q = oracles::degenerate_component_check(n, eps).value;
    ledger.push_back(make_entry("degenerate q(eps=" + fmt(eps) + ")", 0.0, std::nullopt, q, 0.0,
                                "T <= sqrt(n-1) < sqrt(n) - eps"));
    const auto e = mc::estimate_tail(sampler_spec(c), {}, root_n - eps);
    ledger.push_back({"MC degenerate hits", 0.0, std::nullopt, static_cast<double>(e.hits),
                      e.hits == 0 ? Status::confirmed : Status::discrepant,
                      std::to_string(e.trials) + " trials"});
  }

  r.table = ledger_table(ledger);
  if (inconsistent) {
    r.code = ExitCode::verification_failure;
    r.warnings.push_back("independent oracles disagree; see the ledger notes");
  }
  return r;
}

Report run_command(const ExperimentConfig& c) {
  switch (c.command) {
    case Command::constants:
      return run_constants(c);
    case Command::predict:
      return run_predict(c);
    case Command::bounds:
      return run_bounds(c);
    case Command::oracle:
      return run_oracle(c);
    case Command::mc:
      return run_mc(c);
    case Command::verify:
      return run_verify(c);
    case Command::counterexample:
      return run_counterexample(c);
  }
  throw DomainError("unknown command");
}

int finish(const ExperimentConfig& config, const Report& report) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  emit(config, report);
  return static_cast<int>(report.code);
}

int main_entry(const std::vector<std::string>& args) {
  const ParseResult parsed = parse_arguments(args);
  if (!parsed.help.empty()) {
    std::cout << parsed.help;
    return 0;
  }
  if (!parsed.config) {
    for (const auto& e : parsed.errors) std::cerr << "error: " << e << "\n";
    std::cerr << "run with --help for usage\n";
    return static_cast<int>(parsed.code);
  }
  const ExperimentConfig& config = *parsed.config;
  try {
    if (parsed.save_config_path) save_config(config, *parsed.save_config_path);
    return finish(config, run_command(config));
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::io);
  } catch (const QuadratureError& e) {
    std::cerr << "error: " << e.what() << " (achieved error " << e.achieved_error() << ")\n";
    return static_cast<int>(ExitCode::verification_failure);
  } catch (const NonPowerLawError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::verification_failure);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  }
}

}  // namespace sntail::cli
