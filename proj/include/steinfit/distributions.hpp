#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "steinfit/rng.hpp"
#include "steinfit/sample.hpp"

namespace steinfit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Family {
  normal,
  laplace,
  gamma,
  exponential,
  inverse_gaussian,
  weibull,
  burr_xii,
  levy,
  lognormal,
  beta,
  uniform,
  half_normal,
  half_cauchy,
  gompertz,
  linear_failure_rate,
  inverse_weibull,
  shifted_gamma,
};

std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);
std::vector<std::string_view> family_names();

/// Parameter names of a family in storage order.
std::vector<std::string_view> parameter_names(Family family);

/// Interval (left, right) carrying the density, plus interior knots where the
/// density is continuous but not differentiable.
struct Support {
  double left = -kInf;
  double right = kInf;
  std::vector<double> knots;

  [[nodiscard]] bool interior(double x) const noexcept { return x > left && x < right; }
  [[nodiscard]] bool is_knot(double x) const noexcept;
  [[nodiscard]] bool bounded_below() const noexcept { return left > -kInf; }
  [[nodiscard]] bool bounded_above() const noexcept { return right < kInf; }
};

/// Immutable catalog entry. Parameters are validated on construction.
class Distribution {
public:
  Distribution(Family family, const std::map<std::string, double, std::less<>>& params);

  [[nodiscard]] Family family() const noexcept { return family_; }
  [[nodiscard]] const Support& support() const noexcept { return support_; }
  [[nodiscard]] double param(std::string_view name) const;
  [[nodiscard]] double param(std::size_t index) const { return params_.at(index); }
  [[nodiscard]] std::map<std::string, double, std::less<>> params() const;

  /// Short display label in the style of power-study tables, e.g. "W(0.5)".
  [[nodiscard]] std::string label() const;
  /// Inverse of label(): "W(0.5)", "Burr_XII(1,1)", "HN", ... Returns nullopt
  /// for unknown syntax; invalid parameter values throw std::invalid_argument.
  static std::optional<Distribution> parse_label(std::string_view text);

  friend bool operator==(const Distribution& a, const Distribution& b) noexcept {
    return a.family_ == b.family_ && a.params_ == b.params_;
  }

private:
  Family family_;
  std::array<double, 3> params_{};
  Support support_;
};

namespace dist {
Distribution normal(double mu = 0.0, double sigma2 = 1.0);
Distribution laplace(double mu = 0.0, double sigma = 1.0);
Distribution gamma(double k, double lambda = 1.0);  ///< shape k, scale lambda
Distribution exponential(double rate = 1.0);
Distribution inverse_gaussian(double mu, double lambda);
Distribution weibull(double k, double lambda = 1.0);
Distribution burr(double k, double c, double sigma = 1.0);
Distribution levy(double mu = 0.0, double sigma = 1.0);
Distribution lognormal(double mu = 0.0, double sigma = 1.0);
Distribution beta(double alpha, double beta);
Distribution uniform(double lower = 0.0, double upper = 1.0);
Distribution half_normal();
Distribution half_cauchy();
Distribution gompertz(double theta);
Distribution linear_failure_rate(double theta);
Distribution inverse_weibull(double theta);
Distribution shifted_gamma(double k, double lambda, double mu);
} // namespace dist

/// Density on the support interior. Throws std::domain_error elsewhere.
double pdf(const Distribution& d, double x);
double log_pdf(const Distribution& d, double x);

/// Distribution function, clamped to 0 below and 1 above the support.
double cdf(const Distribution& d, double x);
/// Survival function 1 - cdf, computed without cancellation.
double sf(const Distribution& d, double x);

/// Inverse of cdf on (0, 1). Throws std::domain_error for u outside (0, 1).
double quantile(const Distribution& d, double u);

/// d/dx log p(x). Throws std::domain_error at knots and off the interior.
double score(const Distribution& d, double x);

/// One variate. Inversion unless the family has a dedicated generator.
double draw(const Distribution& d, RngStream& rng);
Sample sample(const Distribution& d, std::size_t n, RngStream& rng);

/// Sum of log densities, or -infinity if any observation is off the interior.
double log_likelihood(const Distribution& d, std::span<const double> xs);
inline double log_likelihood(const Distribution& d, const Sample& s) {
  return log_likelihood(d, s.values());
}

} // namespace steinfit
