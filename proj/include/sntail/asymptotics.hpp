// SPDX-License-Identifier: Apache-2.0
//
// Leading-order tail constants of the self-normalized sum near its Hoelder
// maximum, and the literature reference bounds they are compared against.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sntail/density.hpp"

namespace sntail::asymptotics {

/// `paper` evaluates the printed constants (printed determinant, 2^{-(n-1)/2}
/// ellipsoid factor, unweighted profile); `corrected` uses the
/// oracle-confirmed determinant, the {1/2 (Au,u) < eps} ellipsoid and the
/// Jacobian-weighted profile.
enum class Variant { paper, corrected };

enum class Side { right, left, two_sided };

struct TailQuery {
  int n = 2;
  double epsilon = 0.1;
  double beta = 2.0;
  Side side = Side::right;

  /// Throws DomainError on n < 2, eps outside (0, 1), beta <= 1, or a
  /// left/two-sided query with beta != 2.
  void validate() const;
  /// n^{1 - 1/beta} - eps.
  double threshold() const;
};

struct KConstant {
  double value = 0.0;
  double log_value = 0.0;
  double determinant = 0.0;      ///< determinant used (paper or eigenvalue product)
  double log_determinant = 0.0;
  double ball_volume = 0.0;      ///< pi^{(n-1)/2} / Gamma((n+1)/2)
};

struct Prediction {
  int n = 2;
  double beta = 2.0;
  double epsilon = 0.0;
  Side side = Side::right;
  Variant variant = Variant::corrected;
  double k = 0.0;         ///< K(n) or K_beta(n)
  double h = 0.0;         ///< profile factor (1 when the formula has none)
  double determinant = 0.0;
  double constant = 0.0;  ///< k * h, or the full prefactor for the gamma variant
  double exponent = 0.0;
  double value = 0.0;     ///< constant * eps^exponent
  std::vector<std::string> warnings;
};

/// K(n) / K_beta(n); evaluated in the log domain for n > 50.
KConstant k_constant(int n, double beta, Variant variant);

/// Same with the anti-Hessian taken from the beta-family entries even at
/// beta == 2; used to check continuity of the two forms.
KConstant k_constant_beta_form(int n, double beta, Variant variant);

/// Leading-order tail prediction. Corrected predictions use the weighted
/// profile at 1 (right), the mirror branch (left), or their sum.
Prediction predict_tail(const density::DensityModel& model, const TailQuery& query, Variant variant,
                        const density::ProfileOptions& options = {});

struct GammaVariantQuery {
  int n = 2;
  double gamma = 0.0;  ///< must exceed 1 - n
  double epsilon = 0.1;
};

/// Tail law when prod v(j) h(v) behaves like (A(v-1),(v-1))^{gamma/2} near 1:
/// 2^{-(n-3)/2} (det A)^{-1/2} pi^{(n-1)/2} / Gamma((n-1)/2)
///   * eps^{(n+gamma-1)/2} / (n + gamma - 1), with the printed determinant.
Prediction predict_gamma_variant(const GammaVariantQuery& query);

/// (n, log K_beta(n) / (n log n)) for each n, with the printed K_beta.
std::vector<std::pair<int, double>> log_growth_check(double beta, const std::vector<int>& n_values);

enum class ReferenceBound { jing, fan, holder_cutoff };

/// jing: exp(-B^2/2); fan: exp(-B^2 n^{2/beta-1} / 2) for beta in (1, 2];
/// holder_cutoff: 0 when B >= n^{1-1/beta}, else 1.
double reference_bound(ReferenceBound kind, double b, int n, double beta);

const char* to_string(Variant v);
const char* to_string(Side s);
const char* to_string(ReferenceBound b);

}  // namespace sntail::asymptotics
