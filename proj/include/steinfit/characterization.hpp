#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "steinfit/distributions.hpp"
#include "steinfit/sample.hpp"

namespace steinfit {

inline constexpr double kDefaultQuadTol = 1e-9;

/// Which fixed-point operator T is used, with the endpoint data it needs.
///
///   real_line            T(t) = E[s(X)(t - X) 1{X <= t}]
///   positive_axis_min    T(t) = E[-s(X) min(X, t)]                      (L = 0)
///   lower_bounded_min    T(t) = E[-s(X)(min(X, t) - L)]
///   upper_bounded_max    T(t) = 1 - E[s(X)(R - max(X, t))]
///   bounded_right_limit  T(t) = E[-s(X)(min(X, t) - L)] + (t - L) p(R-)
///   bounded_left_limit   T(t) = 1 - E[s(X)(R - max(X, t))] - (R - t) p(L+)
///
/// with s = p'/p the score of the hypothesized law.
struct OperatorKind {
  enum class Variant {
    real_line,
    positive_axis_min,
    lower_bounded_min,
    upper_bounded_max,
    bounded_right_limit,
    bounded_left_limit,
  };

  Variant variant = Variant::real_line;
  std::optional<double> left;
  std::optional<double> right;
  std::optional<double> boundary_density_limit;

  static OperatorKind real_line();
  static OperatorKind positive_axis_min();
  static OperatorKind lower_bounded_min(double L);
  static OperatorKind upper_bounded_max(double R);
  static OperatorKind bounded_right_limit(double L, double R, double p_right);
  static OperatorKind bounded_left_limit(double L, double R, double p_left);

  /// Throws std::invalid_argument when endpoint fields do not match the variant.
  void validate() const;
  [[nodiscard]] std::string name() const;
  [[nodiscard]] double lower() const { return left.value_or(-kInf); }
  [[nodiscard]] double upper() const { return right.value_or(kInf); }
};

std::string_view variant_name(OperatorKind::Variant v);

/// Operator attached to a catalog law, or nullopt when no characterization
/// applies (bounded support with no finite endpoint density limit).
std::optional<OperatorKind> default_operator(const Distribution& d);

using ScoreFn = std::function<double(double)>;

/// -(1/n) sum s(Y_j)(min(Y_j, t) - L). Throws std::domain_error if any
/// observation is <= L or t <= L.
double empirical_T_min(std::span<const double> ys, const ScoreFn& score_fn, double t,
                       double L = 0.0);

/// (1/(n sigma2)) sum Y_j (Y_j - t) 1{Y_j <= t}.
double empirical_T_zero_bias(std::span<const double> ys, double t, double sigma2 = 1.0);

/// T(t) for the score of `dist`, with the expectation taken under `candidate`
/// (defaults to dist itself). Quadrature to absolute error quad_tol.
double exact_T(const Distribution& dist, const OperatorKind& kind, double t,
               double quad_tol = kDefaultQuadTol);
double exact_T(const Distribution& dist, const OperatorKind& kind, double t,
               const Distribution& candidate, double quad_tol = kDefaultQuadTol);

/// max over the grid of |T(t) - F_candidate(t)|.
double fixed_point_residual(const Distribution& dist, const OperatorKind& kind,
                            std::span<const double> grid,
                            double quad_tol = kDefaultQuadTol);
double fixed_point_residual(const Distribution& dist, const OperatorKind& kind,
                            std::span<const double> grid, const Distribution& candidate,
                            double quad_tol = kDefaultQuadTol);

/// m points at the quantiles 0.01, ..., 0.99 of d (evenly spaced levels).
std::vector<double> quantile_grid(const Distribution& d, std::size_t m);

/// Density recovered from the score: equals pdf(t) under dist's own law.
double density_identity(const Distribution& dist, const OperatorKind& kind, double t,
                        double quad_tol = kDefaultQuadTol);
double density_identity(const Distribution& dist, const OperatorKind& kind, double t,
                        const Distribution& candidate, double quad_tol = kDefaultQuadTol);
/// Uses default_operator(dist); throws std::invalid_argument if there is none.
double density_identity(const Distribution& dist, double t,
                        double quad_tol = kDefaultQuadTol);

/// Solution f of f' + s f = 1{x <= t} - P(t) vanishing at the left endpoint.
double test_function_ftp(const Distribution& dist, double t, double x);
/// f' by the quotient rule, evaluated independently of the defining equation.
double test_function_ftp_derivative(const Distribution& dist, double t, double x);

/// E_candidate[f'(X) + s(X) f(X)] by quadrature; equals F_cand(t) - P(t).
double stein_expectation(const Distribution& dist, const Distribution& candidate,
                         double t, double quad_tol = kDefaultQuadTol);

// Documented diagnostic thresholds.
inline constexpr double kKappaPassMax = 1e6;
inline constexpr double kC3DivergenceBound = 1e6;
inline constexpr double kLimitZeroBound = 1e-5;
inline constexpr double kLimitAgreement = 1e-3;

enum class Verdict { pass, fail, not_applicable };
std::string_view verdict_name(Verdict v);

/// Limit of a ratio along x_j = endpoint +/- scale 10^-j, j = 1..8.
struct LimitEstimate {
  bool applicable = false;       ///< endpoint is finite
  bool exists = false;           ///< sequence settled
  double value = 0.0;            ///< last finite term, or 0 when settled at 0
  std::vector<double> sequence;  ///< finite terms in order of approach
};

struct ConditionReport {
  std::string distribution;
  std::optional<OperatorKind> operator_kind;
  bool supported = false;
  std::size_t grid_size = 0;
  std::string grid;

  double c2_sup_kappa = 0.0;
  double c2_argmax = 0.0;
  std::string c3_weight;  ///< "1+|x|" or "x"
  double c3_integral = 0.0;
  bool c3_divergent = false;
  LimitEstimate c4;  ///< P/p at the left endpoint
  LimitEstimate c5;  ///< (1 - P)/p at the right endpoint
  LimitEstimate left_density;
  LimitEstimate right_density;

  Verdict c2 = Verdict::not_applicable;
  Verdict c3 = Verdict::not_applicable;
  Verdict c4_verdict = Verdict::not_applicable;
  Verdict c5_verdict = Verdict::not_applicable;
  std::vector<std::string> notes;

  /// Supported and every applicable condition passes.
  [[nodiscard]] bool passes() const;
};

/// Numeric evidence for (C2)-(C5). Never throws on numerics; throws
/// std::invalid_argument when grid_size < 100.
ConditionReport check_conditions(const Distribution& dist, std::size_t grid_size = 400);

} // namespace steinfit
