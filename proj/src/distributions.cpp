#include "steinfit/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/inverse_gaussian.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace steinfit {
namespace {

namespace bm = boost::math;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
using std::numbers::pi;

enum class Constraint { real, positive };

struct ParamSpec {
  std::string_view name;
  double fallback;  // NaN: required
  Constraint constraint;
};

struct FamilyInfo {
  Family family;
  std::string_view name;
  std::vector<ParamSpec> params;
};

const std::vector<FamilyInfo>& catalog() {
  static const std::vector<FamilyInfo> table{
      {Family::normal, "normal", {{"mu", 0.0, Constraint::real}, {"sigma2", 1.0, Constraint::positive}}},
      {Family::laplace, "laplace", {{"mu", 0.0, Constraint::real}, {"sigma", 1.0, Constraint::positive}}},
      {Family::gamma, "gamma", {{"k", kNaN, Constraint::positive}, {"lambda", 1.0, Constraint::positive}}},
      {Family::exponential, "exponential", {{"lambda", 1.0, Constraint::positive}}},
      {Family::inverse_gaussian, "inverse_gaussian", {{"mu", 1.0, Constraint::positive}, {"lambda", kNaN, Constraint::positive}}},
      {Family::weibull, "weibull", {{"k", kNaN, Constraint::positive}, {"lambda", 1.0, Constraint::positive}}},
      {Family::burr_xii, "burr", {{"k", kNaN, Constraint::positive}, {"c", kNaN, Constraint::positive}, {"sigma", 1.0, Constraint::positive}}},
      {Family::levy, "levy", {{"mu", 0.0, Constraint::real}, {"sigma", 1.0, Constraint::positive}}},
      {Family::lognormal, "lognormal", {{"mu", 0.0, Constraint::real}, {"sigma", 1.0, Constraint::positive}}},
      {Family::beta, "beta", {{"alpha", kNaN, Constraint::positive}, {"beta", kNaN, Constraint::positive}}},
      {Family::uniform, "uniform", {{"lower", 0.0, Constraint::real}, {"upper", 1.0, Constraint::real}}},
      {Family::half_normal, "half_normal", {}},
      {Family::half_cauchy, "half_cauchy", {}},
      {Family::gompertz, "gompertz", {{"theta", kNaN, Constraint::positive}}},
      {Family::linear_failure_rate, "linear_failure_rate", {{"theta", kNaN, Constraint::positive}}},
      {Family::inverse_weibull, "inverse_weibull", {{"theta", kNaN, Constraint::positive}}},
      {Family::shifted_gamma, "shifted_gamma", {{"k", kNaN, Constraint::positive}, {"lambda", 1.0, Constraint::positive}, {"mu", kNaN, Constraint::real}}},
  };
  return table;
}

const FamilyInfo& info(Family f) {
  for (const auto& entry : catalog())
    if (entry.family == f) return entry;
  throw std::logic_error("unknown family");
}

std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void off_support(const char* what, const Distribution& d, double x) {
  std::ostringstream msg;
  msg << what << ": x = " << x << " is outside the support interior of " << d.label();
  throw std::domain_error(msg.str());
}

double normal_quantile(double u) {
  return -std::numbers::sqrt2 * bm::erfc_inv(2.0 * u);
}

double standard_normal(RngStream& rng) { return normal_quantile(rng.uniform()); }

} // namespace

std::string_view family_name(Family family) { return info(family).name; }

std::optional<Family> parse_family(std::string_view raw) {
  std::string name(raw);
  for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (name == "burr_xii") return Family::burr_xii;
  if (name == "lf") return Family::linear_failure_rate;
  if (name == "exp") return Family::exponential;
  for (const auto& entry : catalog())
    if (entry.name == name) return entry.family;
  return std::nullopt;
}

std::vector<std::string_view> family_names() {
  std::vector<std::string_view> out;
  for (const auto& entry : catalog()) out.push_back(entry.name);
  return out;
}

std::vector<std::string_view> parameter_names(Family family) {
  std::vector<std::string_view> out;
  for (const auto& p : info(family).params) out.push_back(p.name);
  return out;
}

bool Support::is_knot(double x) const noexcept {
  return std::find(knots.begin(), knots.end(), x) != knots.end();
}

Distribution::Distribution(Family family,
                           const std::map<std::string, double, std::less<>>& params)
    : family_(family) {
  const auto& spec = info(family);
  for (const auto& [key, value] : params) {
    const bool known = std::any_of(spec.params.begin(), spec.params.end(),
                                   [&](const ParamSpec& p) { return p.name == key; });
    if (!known) {
      std::ostringstream msg;
      msg << "unknown parameter '" << key << "' for family " << spec.name;
      throw std::invalid_argument(msg.str());
    }
  }
  for (std::size_t i = 0; i < spec.params.size(); ++i) {
    const auto& p = spec.params[i];
    auto it = params.find(p.name);
    double v = it != params.end() ? it->second : p.fallback;
    if (std::isnan(v)) {
      std::ostringstream msg;
      msg << "family " << spec.name << " requires parameter '" << p.name << "'";
      throw std::invalid_argument(msg.str());
    }
    if (!std::isfinite(v) || (p.constraint == Constraint::positive && !(v > 0.0))) {
      std::ostringstream msg;
      msg << "family " << spec.name << ": parameter " << p.name << " = " << v
          << " violates its constraint";
      throw std::invalid_argument(msg.str());
    }
    params_[i] = v;
  }

  switch (family_) {
    case Family::normal:
      break;
    case Family::laplace:
      support_.knots = {params_[0]};
      break;
    case Family::levy:
      support_.left = params_[0];
      break;
    case Family::shifted_gamma:
      support_.left = params_[2];
      break;
    case Family::beta:
      support_.left = 0.0;
      support_.right = 1.0;
      break;
    case Family::uniform:
      if (!(params_[0] < params_[1]))
        throw std::invalid_argument("uniform: lower must be < upper");
      support_.left = params_[0];
      support_.right = params_[1];
      break;
    default:
      support_.left = 0.0;
      break;
  }
}

double Distribution::param(std::string_view name) const {
  const auto& spec = info(family_);
  for (std::size_t i = 0; i < spec.params.size(); ++i)
    if (spec.params[i].name == name) return params_[i];
  throw std::invalid_argument("no parameter '" + std::string(name) + "' in family " +
                              std::string(spec.name));
}

std::map<std::string, double, std::less<>> Distribution::params() const {
  std::map<std::string, double, std::less<>> out;
  const auto& spec = info(family_);
  for (std::size_t i = 0; i < spec.params.size(); ++i)
    out.emplace(std::string(spec.params[i].name), params_[i]);
  return out;
}

std::string Distribution::label() const {
  const auto& p = params_;
  auto f = [](double v) { return format_number(v); };
  switch (family_) {
    case Family::normal: return "N(" + f(p[0]) + "," + f(p[1]) + ")";
    case Family::laplace: return "L(" + f(p[0]) + "," + f(p[1]) + ")";
    case Family::gamma: return "Gamma(" + f(p[0]) + "," + f(p[1]) + ")";
    case Family::exponential: return "Exp(" + f(p[0]) + ")";
    case Family::inverse_gaussian:
      return p[0] == 1.0 ? "IG(" + f(p[1]) + ")" : "IG(" + f(p[0]) + "," + f(p[1]) + ")";
    case Family::weibull:
      return p[1] == 1.0 ? "W(" + f(p[0]) + ")" : "W(" + f(p[0]) + "," + f(p[1]) + ")";
    case Family::burr_xii:
      return p[2] == 1.0 ? "Burr_XII(" + f(p[0]) + "," + f(p[1]) + ")"
                         : "Burr_XII(" + f(p[0]) + "," + f(p[1]) + "," + f(p[2]) + ")";
    case Family::levy: return "Levy(" + f(p[0]) + "," + f(p[1]) + ")";
    case Family::lognormal: return "LN(" + f(p[0]) + "," + f(p[1]) + ")";
    case Family::beta: return "Beta(" + f(p[0]) + "," + f(p[1]) + ")";
    case Family::uniform: return "U(" + f(p[0]) + "," + f(p[1]) + ")";
    case Family::half_normal: return "HN";
    case Family::half_cauchy: return "HC";
    case Family::gompertz: return "GO(" + f(p[0]) + ")";
    case Family::linear_failure_rate: return "LF(" + f(p[0]) + ")";
    case Family::inverse_weibull: return "IW(" + f(p[0]) + ")";
    case Family::shifted_gamma:
      return "SGamma(" + f(p[0]) + "," + f(p[1]) + "," + f(p[2]) + ")";
  }
  return "?";
}

std::optional<Distribution> Distribution::parse_label(std::string_view text) {
  static const std::vector<std::pair<std::string_view, Family>> prefixes{
      {"N", Family::normal},        {"L", Family::laplace},       {"Gamma", Family::gamma},
      {"Exp", Family::exponential}, {"IG", Family::inverse_gaussian}, {"W", Family::weibull},
      {"Burr_XII", Family::burr_xii}, {"Levy", Family::levy},     {"LN", Family::lognormal},
      {"Beta", Family::beta},       {"U", Family::uniform},       {"HN", Family::half_normal},
      {"HC", Family::half_cauchy},  {"GO", Family::gompertz},     {"LF", Family::linear_failure_rate},
      {"IW", Family::inverse_weibull}, {"SGamma", Family::shifted_gamma}};
  const auto open = text.find('(');
  const std::string_view head = text.substr(0, open);
  std::vector<double> args;
  if (open != std::string_view::npos) {
    if (text.back() != ')') return std::nullopt;
    std::string_view body = text.substr(open + 1, text.size() - open - 2);
    while (true) {
      const auto comma = body.find(',');
      const std::string_view tok = body.substr(0, comma);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) return std::nullopt;
      args.push_back(v);
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
  }
  for (const auto& [name, family] : prefixes) {
    if (head != name) continue;
    const auto names = parameter_names(family);
    if (args.size() > names.size()) return std::nullopt;
    std::map<std::string, double, std::less<>> params;
    if (family == Family::inverse_gaussian && args.size() == 1) {
      params = {{"mu", 1.0}, {"lambda", args[0]}};
    } else {
      for (std::size_t i = 0; i < args.size(); ++i) params[std::string(names[i])] = args[i];
    }
    return Distribution(family, params);
  }
  return std::nullopt;
}

namespace dist {
using P = std::map<std::string, double, std::less<>>;
Distribution normal(double mu, double sigma2) { return {Family::normal, P{{"mu", mu}, {"sigma2", sigma2}}}; }
Distribution laplace(double mu, double sigma) { return {Family::laplace, P{{"mu", mu}, {"sigma", sigma}}}; }
Distribution gamma(double k, double lambda) { return {Family::gamma, P{{"k", k}, {"lambda", lambda}}}; }
Distribution exponential(double rate) { return {Family::exponential, P{{"lambda", rate}}}; }
Distribution inverse_gaussian(double mu, double lambda) {
  return {Family::inverse_gaussian, P{{"mu", mu}, {"lambda", lambda}}};
}
Distribution weibull(double k, double lambda) { return {Family::weibull, P{{"k", k}, {"lambda", lambda}}}; }
Distribution burr(double k, double c, double sigma) {
  return {Family::burr_xii, P{{"k", k}, {"c", c}, {"sigma", sigma}}};
}
Distribution levy(double mu, double sigma) { return {Family::levy, P{{"mu", mu}, {"sigma", sigma}}}; }
Distribution lognormal(double mu, double sigma) { return {Family::lognormal, P{{"mu", mu}, {"sigma", sigma}}}; }
Distribution beta(double alpha, double beta) { return {Family::beta, P{{"alpha", alpha}, {"beta", beta}}}; }
Distribution uniform(double lower, double upper) {
  return {Family::uniform, P{{"lower", lower}, {"upper", upper}}};
}
Distribution half_normal() { return {Family::half_normal, P{}}; }
Distribution half_cauchy() { return {Family::half_cauchy, P{}}; }
Distribution gompertz(double theta) { return {Family::gompertz, P{{"theta", theta}}}; }
Distribution linear_failure_rate(double theta) { return {Family::linear_failure_rate, P{{"theta", theta}}}; }
Distribution inverse_weibull(double theta) { return {Family::inverse_weibull, P{{"theta", theta}}}; }
Distribution shifted_gamma(double k, double lambda, double mu) {
  return {Family::shifted_gamma, P{{"k", k}, {"lambda", lambda}, {"mu", mu}}};
}
} // namespace dist

double log_pdf(const Distribution& d, double x) {
  if (!d.support().interior(x)) off_support("log_pdf", d, x);
  const double p0 = d.param(std::size_t{0});
  const double p1 = d.param(std::size_t{1});  // unused slots hold 0
  switch (d.family()) {
    case Family::normal: {
      const double z = x - p0;
      return -0.5 * std::log(2.0 * pi * p1) - z * z / (2.0 * p1);
    }
    case Family::laplace:
      return -std::log(2.0 * p1) - std::abs(x - p0) / p1;
    case Family::gamma:
      return -p0 * std::log(p1) - std::lgamma(p0) + (p0 - 1.0) * std::log(x) - x / p1;
    case Family::exponential:
      return std::log(p0) - p0 * x;
    case Family::inverse_gaussian: {
      const double z = x - p0;
      return 0.5 * std::log(p1 / (2.0 * pi)) - 1.5 * std::log(x) - p1 * z * z / (2.0 * p0 * p0 * x);
    }
    case Family::weibull:
      return std::log(p0) - p0 * std::log(p1) + (p0 - 1.0) * std::log(x) - std::pow(x / p1, p0);
    case Family::burr_xii: {
      const double sigma = d.param(std::size_t{2});
      const double ly = std::log(x / sigma);
      return std::log(p0 * p1 / sigma) + (p1 - 1.0) * ly - (p0 + 1.0) * std::log1p(std::exp(p1 * ly));
    }
    case Family::levy: {
      const double z = x - p0;
      return 0.5 * std::log(p1 / (2.0 * pi)) - 1.5 * std::log(z) - p1 / (2.0 * z);
    }
    case Family::lognormal: {
      const double z = std::log(x) - p0;
      return -std::log(x) - 0.5 * std::log(2.0 * pi) - std::log(p1) - z * z / (2.0 * p1 * p1);
    }
    case Family::beta:
      return (p0 - 1.0) * std::log(x) + (p1 - 1.0) * std::log1p(-x) -
             (std::lgamma(p0) + std::lgamma(p1) - std::lgamma(p0 + p1));
    case Family::uniform:
      return -std::log(p1 - p0);
    case Family::half_normal:
      return 0.5 * std::log(2.0 / pi) - 0.5 * x * x;
    case Family::half_cauchy:
      return std::log(2.0 / pi) - std::log1p(x * x);
    case Family::gompertz:
      return -std::log(p0) + x - std::expm1(x) / p0;
    case Family::linear_failure_rate:
      return std::log1p(p0 * x) - x - 0.5 * p0 * x * x;
    case Family::inverse_weibull:
      return std::log(p0) - (p0 + 1.0) * std::log(x) - std::pow(x, -p0);
    case Family::shifted_gamma: {
      const double z = x - d.param(std::size_t{2});
      return -p0 * std::log(p1) - std::lgamma(p0) + (p0 - 1.0) * std::log(z) - z / p1;
    }
  }
  return -kInf;
}

double pdf(const Distribution& d, double x) { return std::exp(log_pdf(d, x)); }

double cdf(const Distribution& d, double x) {
  const auto& s = d.support();
  if (x <= s.left) return 0.0;
  if (x >= s.right) return 1.0;
  const double p0 = d.param(std::size_t{0});
  switch (d.family()) {
    case Family::normal:
      return bm::cdf(bm::normal(p0, std::sqrt(d.param(1))), x);
    case Family::laplace: {
      const double z = (x - p0) / d.param(1);
      return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    case Family::gamma:
      return bm::gamma_p(p0, x / d.param(1));
    case Family::exponential:
      return -std::expm1(-p0 * x);
    case Family::inverse_gaussian:
      return bm::cdf(bm::inverse_gaussian(p0, d.param(1)), x);
    case Family::weibull:
      return -std::expm1(-std::pow(x / d.param(1), p0));
    case Family::burr_xii:
      return -std::expm1(-p0 * std::log1p(std::pow(x / d.param(2), d.param(1))));
    case Family::levy:
      return std::erfc(std::sqrt(d.param(1) / (2.0 * (x - p0))));
    case Family::lognormal:
      return bm::cdf(bm::lognormal(p0, d.param(1)), x);
    case Family::beta:
      return bm::ibeta(p0, d.param(1), x);
    case Family::uniform:
      return (x - p0) / (d.param(1) - p0);
    case Family::half_normal:
      return std::erf(x / std::numbers::sqrt2);
    case Family::half_cauchy:
      return 2.0 / pi * std::atan(x);
    case Family::gompertz:
      return -std::expm1(-std::expm1(x) / p0);
    case Family::linear_failure_rate:
      return -std::expm1(-x - 0.5 * p0 * x * x);
    case Family::inverse_weibull:
      return std::exp(-std::pow(x, -p0));
    case Family::shifted_gamma:
      return bm::gamma_p(p0, (x - d.param(2)) / d.param(1));
  }
  return 0.0;
}

double sf(const Distribution& d, double x) {
  const auto& s = d.support();
  if (x <= s.left) return 1.0;
  if (x >= s.right) return 0.0;
  const double p0 = d.param(std::size_t{0});
  switch (d.family()) {
    case Family::normal:
      return bm::cdf(bm::complement(bm::normal(p0, std::sqrt(d.param(1))), x));
    case Family::laplace: {
      const double z = (x - p0) / d.param(1);
      return z < 0.0 ? 1.0 - 0.5 * std::exp(z) : 0.5 * std::exp(-z);
    }
    case Family::gamma:
      return bm::gamma_q(p0, x / d.param(1));
    case Family::exponential:
      return std::exp(-p0 * x);
    case Family::inverse_gaussian:
      return bm::cdf(bm::complement(bm::inverse_gaussian(p0, d.param(1)), x));
    case Family::weibull:
      return std::exp(-std::pow(x / d.param(1), p0));
    case Family::burr_xii:
      return std::exp(-p0 * std::log1p(std::pow(x / d.param(2), d.param(1))));
    case Family::levy:
      return std::erf(std::sqrt(d.param(1) / (2.0 * (x - p0))));
    case Family::lognormal:
      return bm::cdf(bm::complement(bm::lognormal(p0, d.param(1)), x));
    case Family::beta:
      return bm::ibetac(p0, d.param(1), x);
    case Family::uniform:
      return (d.param(1) - x) / (d.param(1) - p0);
    case Family::half_normal:
      return std::erfc(x / std::numbers::sqrt2);
    case Family::half_cauchy:
      return 2.0 / pi * std::atan(1.0 / x);
    case Family::gompertz:
      return std::exp(-std::expm1(x) / p0);
    case Family::linear_failure_rate:
      return std::exp(-x - 0.5 * p0 * x * x);
    case Family::inverse_weibull:
      return -std::expm1(-std::pow(x, -p0));
    case Family::shifted_gamma:
      return bm::gamma_q(p0, (x - d.param(2)) / d.param(1));
  }
  return 1.0;
}

double quantile(const Distribution& d, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    std::ostringstream msg;
    msg << "quantile: u = " << u << " is outside (0, 1)";
    throw std::domain_error(msg.str());
  }
  const double p0 = d.param(std::size_t{0});
  switch (d.family()) {
    case Family::normal:
      return p0 + std::sqrt(d.param(1)) * normal_quantile(u);
    case Family::laplace:
      return u < 0.5 ? p0 + d.param(1) * std::log(2.0 * u)
                     : p0 - d.param(1) * std::log(2.0 * (1.0 - u));
    case Family::gamma:
      return d.param(1) * bm::gamma_p_inv(p0, u);
    case Family::exponential:
      return -std::log1p(-u) / p0;
    case Family::inverse_gaussian:
      return bm::quantile(bm::inverse_gaussian(p0, d.param(1)), u);
    case Family::weibull:
      return d.param(1) * std::pow(-std::log1p(-u), 1.0 / p0);
    case Family::burr_xii:
      return d.param(2) * std::pow(std::expm1(-std::log1p(-u) / p0), 1.0 / d.param(1));
    case Family::levy: {
      const double z = bm::erfc_inv(u);
      return p0 + d.param(1) / (2.0 * z * z);
    }
    case Family::lognormal:
      return std::exp(p0 + d.param(1) * normal_quantile(u));
    case Family::beta:
      return bm::ibeta_inv(p0, d.param(1), u);
    case Family::uniform:
      return p0 + u * (d.param(1) - p0);
    case Family::half_normal:
      return std::numbers::sqrt2 * bm::erf_inv(u);
    case Family::half_cauchy:
      return std::tan(0.5 * pi * u);
    case Family::gompertz:
      return std::log1p(-p0 * std::log1p(-u));
    case Family::linear_failure_rate:
      return (-1.0 + std::sqrt(1.0 - 2.0 * p0 * std::log1p(-u))) / p0;
    case Family::inverse_weibull:
      return std::pow(-std::log(u), -1.0 / p0);
    case Family::shifted_gamma:
      return d.param(2) + d.param(1) * bm::gamma_p_inv(p0, u);
  }
  return 0.0;
}

double score(const Distribution& d, double x) {
  const auto& s = d.support();
  if (!s.interior(x)) off_support("score", d, x);
  if (s.is_knot(x)) {
    std::ostringstream msg;
    msg << "score: x = " << x << " is a knot of " << d.label();
    throw std::domain_error(msg.str());
  }
  const double p0 = d.param(std::size_t{0});
  switch (d.family()) {
    case Family::normal:
      return -(x - p0) / d.param(1);
    case Family::laplace:
      return (p0 > x ? 1.0 : -1.0) / d.param(1);
    case Family::gamma:
      return (p0 - 1.0) / x - 1.0 / d.param(1);
    case Family::exponential:
      return -p0;
    case Family::inverse_gaussian: {
      const double lambda = d.param(1);
      return lambda / (2.0 * x * x) - 1.5 / x - lambda / (2.0 * p0 * p0);
    }
    case Family::weibull: {
      const double lambda = d.param(1);
      return (p0 - 1.0) / x - p0 * std::pow(x, p0 - 1.0) / std::pow(lambda, p0);
    }
    case Family::burr_xii: {
      const double c = d.param(1);
      const double sigma = d.param(2);
      // c(k+1) x^(c-1) / (sigma^c + x^c), written to survive x^c overflow.
      const double r = std::pow(sigma / x, c);
      return (c - 1.0) / x - c * (p0 + 1.0) / (x * (1.0 + r));
    }
    case Family::levy: {
      const double z = x - p0;
      return -1.5 / z + d.param(1) / (2.0 * z * z);
    }
    case Family::lognormal: {
      const double s2 = d.param(1) * d.param(1);
      return ((p0 - s2) - std::log(x)) / (s2 * x);
    }
    case Family::beta:
      return (p0 - 1.0) / x - (d.param(1) - 1.0) / (1.0 - x);
    case Family::uniform:
      return 0.0;
    case Family::half_normal:
      return -x;
    case Family::half_cauchy:
      return -2.0 * x / (1.0 + x * x);
    case Family::gompertz:
      return 1.0 - std::exp(x) / p0;
    case Family::linear_failure_rate:
      return p0 / (1.0 + p0 * x) - 1.0 - p0 * x;
    case Family::inverse_weibull:
      return -(p0 + 1.0) / x + p0 * std::pow(x, -p0 - 1.0);
    case Family::shifted_gamma:
      return (p0 - 1.0) / (x - d.param(2)) - 1.0 / d.param(1);
  }
  return 0.0;
}

double draw(const Distribution& d, RngStream& rng) {
  switch (d.family()) {
    case Family::inverse_gaussian: {
      // Transformation with multiple roots (Michael, Schucany & Haas).
      const double mu = d.param(std::size_t{0});
      const double lambda = d.param(1);
      const double nu = standard_normal(rng);
      const double y = nu * nu;
      const double muy = mu * y;
      const double x = mu + mu * muy / (2.0 * lambda) -
                       mu / (2.0 * lambda) * std::sqrt(4.0 * lambda * muy + muy * muy);
      return rng.uniform() <= mu / (mu + x) ? x : mu * mu / x;
    }
    case Family::half_normal:
      return std::abs(standard_normal(rng));
    case Family::half_cauchy:
      return std::abs(std::tan(pi * (rng.uniform() - 0.5)));
    case Family::levy: {
      const double z = standard_normal(rng);
      return d.param(std::size_t{0}) + d.param(1) / (z * z);
    }
    default:
      return quantile(d, rng.uniform());
  }
}

Sample sample(const Distribution& d, std::size_t n, RngStream& rng) {
  std::vector<double> xs(n);
  for (auto& x : xs) x = draw(d, rng);
  return Sample(std::move(xs));
}

double log_likelihood(const Distribution& d, std::span<const double> xs) {
  double total = 0.0;
  for (double x : xs) {
    if (!d.support().interior(x)) return -kInf;
    total += log_pdf(d, x);
  }
  return total;
}

} // namespace steinfit
