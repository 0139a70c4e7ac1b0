#include "steinfit/gof.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "steinfit/quadrature.hpp"

namespace steinfit {
namespace {

// Neumaier compensated sum.
struct Accumulator {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  [[nodiscard]] double value() const { return sum + comp; }
};

// Antiderivative term of (alpha + beta t)^2 e^{-at}:
// integral_lo^hi = G(lo) - G(hi).
double G(double alpha, double beta, double a, double t) {
  if (std::isinf(t)) return 0.0;
  const double d = alpha + beta * t;
  return std::exp(-a * t) * (d * d / a + 2.0 * beta * d / (a * a) + 2.0 * beta * beta / (a * a * a));
}

void check_weight(double a) {
  if (!(a > 0.0 && std::isfinite(a))) throw std::invalid_argument("weight parameter a must be > 0");
}

// n * integral of (alpha_i + beta_i t)^2 e^{-at} over consecutive pieces
// [cuts[i], cuts[i+1]].
double piecewise_L2(std::span<const double> cuts, std::span<const double> alpha,
                    std::span<const double> beta, double a, std::size_t n) {
  Accumulator acc;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) continue;
    acc.add(G(alpha[i], beta[i], a, cuts[i]));
    acc.add(-G(alpha[i], beta[i], a, cuts[i + 1]));
  }
  return static_cast<double>(n) * std::max(acc.value(), 0.0);
}

// Exact L2 for T(t) = (1/n) sum A_j min(Y_j, t) on (0, inf).
double min_form_from_coefficients(const SortedSample& s, std::span<const double> A, double a) {
  check_weight(a);
  const std::size_t n = s.size();
  const double nd = static_cast<double>(n);
  std::vector<double> cuts{0.0}, alpha, beta;
  Accumulator tail;
  for (double v : A) tail.add(v);
  double prefix_ax = 0.0, suffix_a = tail.value();
  // Piece i covers [X_(i), X_(i+1)] with X_(0) = 0 and X_(n+1) = inf.
  for (std::size_t i = 0; i <= n; ++i) {
    alpha.push_back((prefix_ax - static_cast<double>(i)) / nd);
    beta.push_back(i == n ? 0.0 : suffix_a / nd);
    cuts.push_back(i == n ? kInf : s[i]);
    if (i < n) {
      prefix_ax += A[i] * s[i];
      suffix_a -= A[i];
    }
  }
  return piecewise_L2(cuts, alpha, beta, a, n);
}

std::string lower(std::string_view text) {
  std::string out(text);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::optional<double> parse_positive(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !(v > 0.0) || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<double> pit(const SortedSample& s, const CdfFn& F) {
  std::vector<double> u;
  u.reserve(s.size());
  for (double x : s) u.push_back(F(x));
  return u;
}

} // namespace

// ---------------------------------------------------------------- StatisticId

StatisticId StatisticId::burr_B(double a) {
  check_weight(a);
  return {Kind::burr_B, a, false};
}
StatisticId StatisticId::generic_L2(double a) {
  check_weight(a);
  return {Kind::generic_L2, a, false};
}
StatisticId StatisticId::ks(bool sqrt_n) { return {Kind::ks, 0.0, sqrt_n}; }
StatisticId StatisticId::cvm() { return {Kind::cvm, 0.0, false}; }
StatisticId StatisticId::ad() { return {Kind::ad, 0.0, false}; }
StatisticId StatisticId::watson() { return {Kind::watson, 0.0, false}; }

std::optional<StatisticId> StatisticId::parse(std::string_view text) {
  const std::string t = lower(text);
  auto weighted = [&](std::string_view prefix, std::string_view open,
                      Kind kind) -> std::optional<StatisticId> {
    std::string_view v(t);
    if (v.starts_with(prefix)) {
      if (auto a = parse_positive(v.substr(prefix.size()))) return StatisticId{kind, *a, false};
    } else if (v.starts_with(open) && v.ends_with(")")) {
      if (auto a = parse_positive(v.substr(open.size(), v.size() - open.size() - 1)))
        return StatisticId{kind, *a, false};
    }
    return std::nullopt;
  };
  if (auto s = weighted("b_", "burr_b(", Kind::burr_B)) return s;
  if (auto s = weighted("g_", "generic_l2(", Kind::generic_L2)) return s;
  if (t == "ks" || t == "k_n") return ks(false);
  if (t == "ks_sqrt" || t == "ks_sqrt_n") return ks(true);
  if (t == "cm" || t == "cvm") return cvm();
  if (t == "ad") return ad();
  if (t == "wa" || t == "watson") return watson();
  return std::nullopt;
}

std::vector<std::string> StatisticId::accepted_forms() {
  return {"B_<a>", "burr_B(<a>)", "G_<a>", "generic_L2(<a>)", "KS", "KS_sqrt", "CM", "AD", "WA"};
}

std::string StatisticId::label() const {
  switch (kind) {
    case Kind::burr_B: return "B_" + shortest(a);
    case Kind::generic_L2: return "G_" + shortest(a);
    case Kind::ks: return ks_sqrt_n ? "KS_sqrt" : "KS";
    case Kind::cvm: return "CM";
    case Kind::ad: return "AD";
    case Kind::watson: return "WA";
  }
  return "?";
}

// ---------------------------------------------------------------- B_{n,a}

double burr_A1(double x, double k, double c) {
  // c(k+1) x^(c-1)/(1+x^c) written without overflow for large x^c.
  return c * (k + 1.0) / (x * (1.0 + std::pow(x, -c))) - (c - 1.0) / x;
}

double burr_B_closed(const SortedSample& s, double k, double c, double a) {
  check_weight(a);
  const std::size_t n = s.size();
  const double nd = static_cast<double>(n);
  std::vector<double> A1(n), A2(n), E(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = s[j];
    A1[j] = burr_A1(x, k, c);
    A2[j] = -c * (k + 1.0) / (1.0 + std::pow(x, -c));
    E[j] = std::exp(-a * x);
  }
  const double a2 = a * a, a3 = a2 * a;

  Accumulator cross;
  for (std::size_t j = 0; j < n; ++j) {
    const double inner_j = 2.0 * A1[j] / a3 * (1.0 - E[j]) + A2[j] / a2 * E[j] +
                           (c - 2.0) / a2 * E[j] - s[j] / a * E[j];
    for (std::size_t l = j + 1; l < n; ++l)
      cross.add(A1[l] * (inner_j + A2[j] / a2 * E[l]) + A2[j] / a * E[l]);
  }

  Accumulator diag;
  for (std::size_t j = 0; j < n; ++j) {
    const double jm1 = static_cast<double>(j);
    diag.add(A1[j] * A1[j] * (-2.0 * s[j] / a2 * E[j] - 2.0 / a3 * E[j] + 2.0 / a3));
    diag.add(2.0 * jm1 * c / a2 * A1[j] * E[j]);
    diag.add(2.0 * A2[j] / a * E[j]);
  }

  Accumulator tail;
  for (std::size_t j = 0; j < n; ++j) {
    tail.add(2.0 * c / (a * nd) * static_cast<double>(j + 1) * E[j]);
    tail.add(-E[j] / (a * nd));
  }
  return 2.0 / nd * cross.value() + diag.value() / nd + tail.value();
}

double burr_B_quadrature(const SortedSample& s, double k, double c, double a) {
  std::vector<double> A(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) A[j] = burr_A1(s[j], k, c);
  return min_form_from_coefficients(s, A, a);
}

// ---------------------------------------------------------------- generic L2

double generic_L2(const std::function<double(double)>& Tn, const SortedSample& s, double a,
                  double lower_limit, double quad_tol) {
  check_weight(a);
  const auto xs = s.values();
  const double nd = static_cast<double>(s.size());
  auto integrand = [&](double t) {
    const double F = static_cast<double>(std::upper_bound(xs.begin(), xs.end(), t) - xs.begin()) / nd;
    const double d = Tn(t) - F;
    return d == 0.0 ? 0.0 : d * d * std::exp(-a * t);
  };
  return nd * integrate(integrand, lower_limit, kInf, quad_tol, xs, 20000).value;
}

double min_form_L2(const SortedSample& s, const ScoreFn& score_fn, double a) {
  std::vector<double> A(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!(s[j] > 0.0)) throw std::domain_error("min_form_L2: observations must be > 0");
    A[j] = -score_fn(s[j]);
  }
  return min_form_from_coefficients(s, A, a);
}

double zero_bias_L2(const SortedSample& s, double a) {
  check_weight(a);
  const std::size_t n = s.size();
  const double nd = static_cast<double>(n);
  // Below Y_(1) the deviation is 0; piece i covers [Y_(i), Y_(i+1)].
  std::vector<double> cuts, alpha, beta;
  double sum_y2 = 0.0, sum_y = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    sum_y2 += s[i - 1] * s[i - 1];
    sum_y += s[i - 1];
    cuts.push_back(s[i - 1]);
    alpha.push_back((sum_y2 - static_cast<double>(i)) / nd);
    beta.push_back(-sum_y / nd);
  }
  cuts.push_back(kInf);
  return piecewise_L2(cuts, alpha, beta, a, n);
}

double gamma_G(const SortedSample& s, double k_hat, double lambda_hat, double a) {
  std::vector<double> y;
  y.reserve(s.size());
  for (double x : s) y.push_back(x / lambda_hat);
  return min_form_L2(SortedSample(std::move(y)), [k_hat](double v) { return (k_hat - 1.0) / v - 1.0; },
                     a);
}

double normal_G(const SortedSample& s, double mean, double var, double a) {
  if (!(var > 0.0)) throw std::domain_error("normal_G: variance must be > 0");
  const double sd = std::sqrt(var);
  std::vector<double> y;
  y.reserve(s.size());
  for (double x : s) y.push_back((x - mean) / sd);
  return zero_bias_L2(SortedSample(std::move(y)), a);
}

// ---------------------------------------------------------------- EDF statistics

double ks_pit(std::span<const double> u) {
  const double n = static_cast<double>(u.size());
  double dplus = 0.0, dminus = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    dplus = std::max(dplus, static_cast<double>(j + 1) / n - u[j]);
    dminus = std::max(dminus, u[j] - static_cast<double>(j) / n);
  }
  return std::max(dplus, dminus);
}

double cvm_pit(std::span<const double> u) {
  const double n = static_cast<double>(u.size());
  Accumulator acc;
  acc.add(1.0 / (12.0 * n));
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double d = u[j] - (2.0 * static_cast<double>(j) + 1.0) / (2.0 * n);
    acc.add(d * d);
  }
  return acc.value();
}

AdResult ad_pit(std::span<const double> u) {
  const std::size_t n = u.size();
  const double nd = static_cast<double>(n);
  AdResult out;
  Accumulator acc;
  for (std::size_t j = 0; j < n; ++j) {
    double v = u[j];
    if (v < kAdClamp || v > 1.0 - kAdClamp) {
      v = std::clamp(v, kAdClamp, 1.0 - kAdClamp);
      ++out.clamped;
    }
    const double jj = static_cast<double>(j + 1);
    acc.add((2.0 * jj - 1.0) * std::log(v) + (2.0 * (nd - jj) + 1.0) * std::log1p(-v));
  }
  out.value = -nd - acc.value() / nd;
  return out;
}

double watson_pit(std::span<const double> u) {
  const double n = static_cast<double>(u.size());
  Accumulator mean;
  for (double v : u) mean.add(v);
  const double m = mean.value() / n - 0.5;
  return cvm_pit(u) - n * m * m;
}

double ks(const SortedSample& s, const CdfFn& F, bool sqrt_n) {
  const double k = ks_pit(pit(s, F));
  return sqrt_n ? std::sqrt(static_cast<double>(s.size())) * k : k;
}
double cvm(const SortedSample& s, const CdfFn& F) { return cvm_pit(pit(s, F)); }
double ad(const SortedSample& s, const CdfFn& F) { return ad_pit(pit(s, F)).value; }
AdResult ad_detail(const SortedSample& s, const CdfFn& F) { return ad_pit(pit(s, F)); }
double watson(const SortedSample& s, const CdfFn& F) { return watson_pit(pit(s, F)); }

} // namespace steinfit
