#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "steinfit/characterization.hpp"
#include "steinfit/sample.hpp"

namespace steinfit {

/// Which statistic a test uses.
///
///   burr_B      B_{n,a} for the Burr XII family (label "B_<a>")
///   generic_L2  exp(-a t)-weighted L2 statistic of the hypothesized family
///               (label "G_<a>"); equals B_{n,a} for the Burr family
///   ks          max(D+, D-), optionally times sqrt(n) (labels "KS", "KS_sqrt")
///   cvm, ad, watson  ("CM", "AD", "WA")
struct StatisticId {
  enum class Kind { burr_B, generic_L2, ks, cvm, ad, watson };

  Kind kind = Kind::ks;
  double a = 0.0;
  bool ks_sqrt_n = false;

  static StatisticId burr_B(double a);
  static StatisticId generic_L2(double a);
  static StatisticId ks(bool sqrt_n = false);
  static StatisticId cvm();
  static StatisticId ad();
  static StatisticId watson();

  /// Accepts labels ("B_0.25", "G_1", "KS", "KS_sqrt", "CM", "AD", "WA") and
  /// the long names ("burr_B(0.25)", "generic_L2(1)", "ks", "ks_sqrt_n",
  /// "cvm", "ad", "watson"), case-insensitive.
  static std::optional<StatisticId> parse(std::string_view text);
  static std::vector<std::string> accepted_forms();

  [[nodiscard]] std::string label() const;
  [[nodiscard]] bool uses_weight() const { return kind == Kind::burr_B || kind == Kind::generic_L2; }

  friend bool operator==(const StatisticId&, const StatisticId&) = default;
};

// ---------------------------------------------------------------- B_{n,a}

/// A1_j = c(k+1) X^(c-1)/(1+X^c) - (c-1)/X, the negated Burr(k, c) score.
double burr_A1(double x, double k, double c);

/// Double-sum closed form, O(n^2).
double burr_B_closed(const SortedSample& s, double k_hat, double c_hat, double a);

/// n * integral_0^inf (T_n - F_n)^2 exp(-a t) dt, integrating the
/// piecewise-quadratic-times-exponential integrand exactly between order
/// statistics. O(n).
double burr_B_quadrature(const SortedSample& s, double k_hat, double c_hat, double a);

// ---------------------------------------------------------------- generic L2

/// n * integral_lower^inf (Tn(t) - F_n(t))^2 exp(-a t) dt by adaptive
/// quadrature split at the order statistics. Throws QuadratureError on
/// non-convergence.
double generic_L2(const std::function<double(double)>& Tn, const SortedSample& s, double a,
                  double lower = 0.0, double quad_tol = 1e-12);

/// Exact value of generic_L2 for Tn = empirical_T_min(s, score_fn, t, 0).
double min_form_L2(const SortedSample& s, const ScoreFn& score_fn, double a);

/// Exact value of generic_L2 for Tn = empirical_T_zero_bias(s, t, 1), lower = -inf.
double zero_bias_L2(const SortedSample& s, double a);

/// Gamma test: min_form_L2 of X / lambda_hat under the Gamma(k_hat, 1) score.
double gamma_G(const SortedSample& s, double k_hat, double lambda_hat, double a);

/// Normal test: zero_bias_L2 of (X - mean) / sqrt(var).
double normal_G(const SortedSample& s, double mean, double var, double a);

// ---------------------------------------------------------------- EDF statistics

using CdfFn = std::function<double(double)>;

/// Statistics on probability-integral transforms u_j = F(X_(j)), ascending.
double ks_pit(std::span<const double> u);
double cvm_pit(std::span<const double> u);
double watson_pit(std::span<const double> u);

struct AdResult {
  double value = 0.0;
  std::size_t clamped = 0;  ///< transforms moved into [eps, 1 - eps]
};
inline constexpr double kAdClamp = 1e-15;
AdResult ad_pit(std::span<const double> u);

double ks(const SortedSample& s, const CdfFn& F, bool sqrt_n = false);
double cvm(const SortedSample& s, const CdfFn& F);
double ad(const SortedSample& s, const CdfFn& F);
AdResult ad_detail(const SortedSample& s, const CdfFn& F);
double watson(const SortedSample& s, const CdfFn& F);

} // namespace steinfit
