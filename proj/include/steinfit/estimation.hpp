#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "steinfit/distributions.hpp"
#include "steinfit/sample.hpp"

namespace steinfit {

struct FitResult {
  Family family = Family::burr_xii;
  std::map<std::string, double, std::less<>> params;
  bool converged = false;
  double loglik = 0.0;
  std::size_t iterations = 0;
  std::string trace;

  [[nodiscard]] double param(std::string_view name) const;
  /// Fitted law; throws std::invalid_argument when the parameters are degenerate.
  [[nodiscard]] Distribution distribution() const;
};

/// Options of the profile-likelihood search over log c.
struct BurrMleOptions {
  double c_lo = 1e-3;
  double c_hi = 1e3;
  std::size_t grid = 32;
  double jitter = 0.0;  ///< grid offset as a fraction of the spacing, in [0, 1)
  double tol_logc = 1e-10;
  int max_expansions = 3;  ///< decade expansions when the grid maximum sits on an edge
};

// Burr XII (sigma = 1) log-likelihood pieces.
double burr_loglik(std::span<const double> xs, double k, double c);
/// k_hat(c) = n / sum log(1 + x^c).
double burr_profile_k(std::span<const double> xs, double c);
double burr_profile_loglik(std::span<const double> xs, double c);
/// n/k - sum log(1 + x^c).
double burr_dloglik_dk(std::span<const double> xs, double k, double c);

/// Maximum likelihood for Burr XII with sigma pinned to 1. Throws
/// std::invalid_argument for n < 2, non-positive observations, or a sample of
/// identical values. Non-convergence is reported in the result.
FitResult burr_mle(const Sample& s, const BurrMleOptions& opt = {});

/// Moment estimators k = mean^2 / S2, lambda = S2 / mean (divisor n).
/// Throws std::invalid_argument for n < 2, non-positive data or zero variance.
FitResult gamma_fit(const Sample& s);

/// Mean and S2 with divisor n. Zero variance yields converged = false.
FitResult normal_fit(const Sample& s);

/// Dispatch for the hypothesis families burr_xii, gamma and normal.
FitResult fit_family(Family family, const Sample& s, const BurrMleOptions& opt = {});
bool is_hypothesis_family(Family family);

} // namespace steinfit
