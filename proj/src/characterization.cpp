#include "steinfit/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "steinfit/quadrature.hpp"

namespace steinfit {
namespace {

using V = OperatorKind::Variant;

std::vector<double> breakpoints(const Distribution& a, const Distribution& b, double t) {
  std::vector<double> out{t};
  out.insert(out.end(), a.support().knots.begin(), a.support().knots.end());
  out.insert(out.end(), b.support().knots.begin(), b.support().knots.end());
  return out;
}

void require_contained(const Distribution& dist, const Distribution& cand) {
  const auto& s = dist.support();
  const auto& c = cand.support();
  if (c.left < s.left || c.right > s.right)
    throw std::domain_error("candidate support " + cand.label() +
                            " is not contained in the support of " + dist.label());
}

// E_cand[g(X)] over [lo, hi].
double expect(const Distribution& cand, const std::function<double(double)>& g, double lo,
              double hi, std::span<const double> breaks, double tol) {
  lo = std::max(lo, cand.support().left);
  hi = std::min(hi, cand.support().right);
  if (!(lo < hi)) return 0.0;
  auto integrand = [&](double x) {
    if (!cand.support().interior(x)) return 0.0;
    const double q = pdf(cand, x);
    return q == 0.0 ? 0.0 : g(x) * q;
  };
  return integrate(integrand, lo, hi, tol, breaks).value;
}

} // namespace

// ---------------------------------------------------------------- OperatorKind

OperatorKind OperatorKind::real_line() { return {}; }

OperatorKind OperatorKind::positive_axis_min() {
  OperatorKind k;
  k.variant = V::positive_axis_min;
  k.left = 0.0;
  return k;
}

OperatorKind OperatorKind::lower_bounded_min(double L) {
  OperatorKind k;
  k.variant = V::lower_bounded_min;
  k.left = L;
  k.validate();
  return k;
}

OperatorKind OperatorKind::upper_bounded_max(double R) {
  OperatorKind k;
  k.variant = V::upper_bounded_max;
  k.right = R;
  k.validate();
  return k;
}

OperatorKind OperatorKind::bounded_right_limit(double L, double R, double p_right) {
  OperatorKind k;
  k.variant = V::bounded_right_limit;
  k.left = L;
  k.right = R;
  k.boundary_density_limit = p_right;
  k.validate();
  return k;
}

OperatorKind OperatorKind::bounded_left_limit(double L, double R, double p_left) {
  OperatorKind k;
  k.variant = V::bounded_left_limit;
  k.left = L;
  k.right = R;
  k.boundary_density_limit = p_left;
  k.validate();
  return k;
}

void OperatorKind::validate() const {
  bool need_left = false, need_right = false, need_limit = false;
  switch (variant) {
    case V::real_line: break;
    case V::positive_axis_min:
    case V::lower_bounded_min: need_left = true; break;
    case V::upper_bounded_max: need_right = true; break;
    case V::bounded_right_limit:
    case V::bounded_left_limit: need_left = need_right = need_limit = true; break;
  }
  const std::string n(variant_name(variant));
  if (left.has_value() != need_left)
    throw std::invalid_argument(n + ": left endpoint " + (need_left ? "required" : "not allowed"));
  if (right.has_value() != need_right)
    throw std::invalid_argument(n + ": right endpoint " + (need_right ? "required" : "not allowed"));
  if (boundary_density_limit.has_value() != need_limit)
    throw std::invalid_argument(n + ": boundary density limit " +
                                (need_limit ? "required" : "not allowed"));
  if (left && !std::isfinite(*left)) throw std::invalid_argument(n + ": L must be finite");
  if (right && !std::isfinite(*right)) throw std::invalid_argument(n + ": R must be finite");
  if (variant == V::positive_axis_min && *left != 0.0)
    throw std::invalid_argument(n + ": L must be 0");
  if (left && right && !(*left < *right)) throw std::invalid_argument(n + ": need L < R");
  if (boundary_density_limit &&
      !(std::isfinite(*boundary_density_limit) && *boundary_density_limit >= 0.0))
    throw std::invalid_argument(n + ": boundary density limit must be finite and >= 0");
}

std::string_view variant_name(OperatorKind::Variant v) {
  switch (v) {
    case V::real_line: return "real_line";
    case V::positive_axis_min: return "positive_axis_min";
    case V::lower_bounded_min: return "lower_bounded_min";
    case V::upper_bounded_max: return "upper_bounded_max";
    case V::bounded_right_limit: return "bounded_right_limit";
    case V::bounded_left_limit: return "bounded_left_limit";
  }
  return "?";
}

std::string OperatorKind::name() const { return std::string(variant_name(variant)); }

std::optional<OperatorKind> default_operator(const Distribution& d) {
  const auto& s = d.support();
  switch (d.family()) {
    case Family::normal:
    case Family::laplace: return OperatorKind::real_line();
    case Family::levy:
    case Family::shifted_gamma: return OperatorKind::lower_bounded_min(s.left);
    case Family::uniform:
      return OperatorKind::bounded_right_limit(s.left, s.right, 1.0 / (s.right - s.left));
    case Family::beta: {
      const double a = d.param("alpha"), b = d.param("beta");
      if (b >= 1.0) return OperatorKind::bounded_right_limit(0, 1, b > 1.0 ? 0.0 : a);
      if (a >= 1.0) return OperatorKind::bounded_left_limit(0, 1, a > 1.0 ? 0.0 : b);
      return std::nullopt;
    }
    default: return OperatorKind::positive_axis_min();
  }
}

// ---------------------------------------------------------------- operators

double empirical_T_min(std::span<const double> ys, const ScoreFn& score_fn, double t,
                       double L) {
  if (!(t > L)) throw std::domain_error("empirical_T_min: t must exceed L");
  if (ys.empty()) throw std::invalid_argument("empirical_T_min: empty sample");
  double acc = 0.0;
  for (double y : ys) {
    if (!(y > L)) throw std::domain_error("empirical_T_min: observation <= L");
    acc -= score_fn(y) * (std::min(y, t) - L);
  }
  return acc / static_cast<double>(ys.size());
}

double empirical_T_zero_bias(std::span<const double> ys, double t, double sigma2) {
  if (ys.empty()) throw std::invalid_argument("empirical_T_zero_bias: empty sample");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("empirical_T_zero_bias: sigma2 <= 0");
  double acc = 0.0;
  for (double y : ys)
    if (y <= t) acc += y * (y - t);
  return acc / (static_cast<double>(ys.size()) * sigma2);
}

double exact_T(const Distribution& dist, const OperatorKind& kind, double t,
               double quad_tol) {
  return exact_T(dist, kind, t, dist, quad_tol);
}

double exact_T(const Distribution& dist, const OperatorKind& kind, double t,
               const Distribution& cand, double quad_tol) {
  kind.validate();
  require_contained(dist, cand);
  const auto br = breakpoints(dist, cand, t);
  auto s = [&](double x) { return score(dist, x); };
  const double L = kind.lower(), R = kind.upper();
  const double lo = cand.support().left, hi = cand.support().right;

  switch (kind.variant) {
    case V::real_line:
      return expect(cand, [&](double x) { return s(x) * (t - x); }, lo, std::min(t, hi), br,
                    quad_tol);
    case V::positive_axis_min:
    case V::lower_bounded_min:
    case V::bounded_right_limit: {
      double v = expect(cand, [&](double x) { return -s(x) * (std::min(x, t) - L); }, lo, hi,
                        br, quad_tol);
      if (kind.variant == V::bounded_right_limit) v += (t - L) * *kind.boundary_density_limit;
      return v;
    }
    case V::upper_bounded_max:
    case V::bounded_left_limit: {
      double v = expect(cand, [&](double x) { return s(x) * (R - std::max(x, t)); }, lo, hi,
                        br, quad_tol);
      if (kind.variant == V::bounded_left_limit) v += (R - t) * *kind.boundary_density_limit;
      return 1.0 - v;
    }
  }
  return 0.0;
}

double fixed_point_residual(const Distribution& dist, const OperatorKind& kind,
                            std::span<const double> grid, double quad_tol) {
  return fixed_point_residual(dist, kind, grid, dist, quad_tol);
}

double fixed_point_residual(const Distribution& dist, const OperatorKind& kind,
                            std::span<const double> grid, const Distribution& cand,
                            double quad_tol) {
  double worst = 0.0;
  for (double t : grid)
    worst = std::max(worst, std::abs(exact_T(dist, kind, t, cand, quad_tol) - cdf(cand, t)));
  return worst;
}

std::vector<double> quantile_grid(const Distribution& d, std::size_t m) {
  std::vector<double> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = m == 1 ? 0.5 : 0.01 + 0.98 * static_cast<double>(i) / (m - 1);
    out.push_back(quantile(d, u));
  }
  return out;
}

double density_identity(const Distribution& dist, const OperatorKind& kind, double t,
                        double quad_tol) {
  return density_identity(dist, kind, t, dist, quad_tol);
}

double density_identity(const Distribution& dist, const OperatorKind& kind, double t,
                        const Distribution& cand, double quad_tol) {
  kind.validate();
  require_contained(dist, cand);
  const auto br = breakpoints(dist, cand, t);
  auto s = [&](double x) { return score(dist, x); };
  const double lo = cand.support().left, hi = cand.support().right;
  switch (kind.variant) {
    case V::real_line:
    case V::upper_bounded_max: return expect(cand, s, lo, std::min(t, hi), br, quad_tol);
    case V::positive_axis_min:
    case V::lower_bounded_min:
      return expect(cand, [&](double x) { return -s(x); }, std::max(t, lo), hi, br, quad_tol);
    case V::bounded_right_limit:
      return expect(cand, [&](double x) { return -s(x); }, std::max(t, lo), hi, br,
                    quad_tol) +
             *kind.boundary_density_limit;
    case V::bounded_left_limit:
      return expect(cand, s, lo, std::min(t, hi), br, quad_tol) + *kind.boundary_density_limit;
  }
  return 0.0;
}

double density_identity(const Distribution& dist, double t, double quad_tol) {
  auto kind = default_operator(dist);
  if (!kind)
    throw std::invalid_argument("density_identity: no characterization applies to " +
                                dist.label());
  return density_identity(dist, *kind, t, quad_tol);
}

// ---------------------------------------------------------------- test function

namespace {

// P(x)/p(x) and (1 - P(x))/p(x). Where the tail mass or the density is no
// longer representable, the ratio is taken as the integral of
// exp(log p(s) - log p(x)) over the tail.
constexpr double kTinyMass = 1e-280;

double tail_ratio(const Distribution& dist, double x, bool lower) {
  const double p = pdf(dist, x);
  const double m = lower ? cdf(dist, x) : sf(dist, x);
  if (p > kTinyMass && m > kTinyMass) return m / p;
  const double lp = log_pdf(dist, x);
  const auto& sup = dist.support();
  auto f = [&](double s) { return sup.interior(s) ? std::exp(log_pdf(dist, s) - lp) : 0.0; };
  const auto r = lower ? integrate_nothrow(f, sup.left, x, 1e-12) : integrate_nothrow(f, x, sup.right, 1e-12);
  return r.value;
}

} // namespace

double test_function_ftp(const Distribution& dist, double t, double x) {
  if (x <= t) return tail_ratio(dist, x, true) * sf(dist, t);
  return tail_ratio(dist, x, false) * cdf(dist, t);
}

double test_function_ftp_derivative(const Distribution& dist, double t, double x) {
  const double s = score(dist, x);
  if (x <= t) return sf(dist, t) * (1.0 - s * tail_ratio(dist, x, true));
  return cdf(dist, t) * (-1.0 - s * tail_ratio(dist, x, false));
}

double stein_expectation(const Distribution& dist, const Distribution& cand, double t,
                         double quad_tol) {
  require_contained(dist, cand);
  const auto& cs = cand.support();
  // Candidate tails beyond the 1e-15 quantiles carry no measurable mass and
  // are where P/p stops being representable.
  const double lo = std::isfinite(cs.left) ? cs.left : quantile(cand, 1e-15);
  const double hi = std::isfinite(cs.right) ? cs.right : quantile(cand, 1.0 - 1e-15);
  const auto br = breakpoints(dist, cand, t);
  auto g = [&](double x) {
    return test_function_ftp_derivative(dist, t, x) +
           score(dist, x) * test_function_ftp(dist, t, x);
  };
  return expect(cand, g, lo, hi, br, quad_tol);
}

// ---------------------------------------------------------------- conditions

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "?";
}

bool ConditionReport::passes() const {
  if (!supported) return false;
  for (Verdict v : {c2, c3, c4_verdict, c5_verdict})
    if (v == Verdict::fail) return false;
  return true;
}

namespace {

constexpr int kLimitSteps = 8;
constexpr int kNearDecades = 12;
constexpr int kFarDecades = 14;

void settle(LimitEstimate& est) {
  const auto& q = est.sequence;
  if (q.size() < 3) return;
  const double a = std::abs(q[q.size() - 3]), b = std::abs(q[q.size() - 2]),
               c = std::abs(q.back());
  if (c <= kLimitZeroBound && c <= b && b <= a) {
    est.exists = true;
    est.value = 0.0;
    return;
  }
  const double spread = std::max({q[q.size() - 3], q[q.size() - 2], q.back()}) -
                        std::min({q[q.size() - 3], q[q.size() - 2], q.back()});
  est.value = q.back();
  est.exists = spread <= kLimitAgreement * c;
}

// Ratio or density along endpoint +/- scale 10^-j.
LimitEstimate approach(const Distribution& d, double endpoint, double direction,
                       double scale, const std::function<double(double)>& term) {
  LimitEstimate est;
  est.applicable = true;
  for (int j = 1; j <= kLimitSteps; ++j) {
    const double x = endpoint + direction * scale * std::pow(10.0, -j);
    if (!d.support().interior(x)) break;
    const double v = term(x);
    if (std::isfinite(v)) est.sequence.push_back(v);
  }
  settle(est);
  return est;
}

struct TailSum {
  double total = 0.0;
  bool divergent = false;
};

// Sum of decade increments ordered towards an endpoint, extrapolating the
// remainder geometrically from the last two increments.
TailSum tail_sum(const std::vector<double>& deltas, double scale_hint) {
  TailSum out;
  for (double v : deltas) out.total += v;
  const double last = deltas.back(), prev = deltas[deltas.size() - 2];
  if (last <= 1e-12 * std::max(1.0, scale_hint + out.total)) return out;
  const double r = prev > 0.0 ? last / prev : kInf;
  if (!(r < 0.9)) {
    out.divergent = true;
    return out;
  }
  out.total += last * r / (1.0 - r);
  return out;
}

} // namespace

ConditionReport check_conditions(const Distribution& d, std::size_t grid_size) {
  if (grid_size < 100) throw std::invalid_argument("check_conditions: grid_size must be >= 100");
  ConditionReport rep;
  rep.distribution = d.label();
  rep.grid_size = grid_size;
  rep.operator_kind = default_operator(d);
  rep.supported = rep.operator_kind.has_value();

  const auto& sp = d.support();
  const double L = sp.left, R = sp.right;
  const bool lf = std::isfinite(L), rf = std::isfinite(R);
  const double median = quantile(d, 0.5);

  // Interior grid: log-spaced distances from finite endpoints, or from the
  // median towards infinite ends.
  std::vector<double> grid;
  std::ostringstream gdesc;
  auto logspace = [](double a, double b, std::size_t m) {
    std::vector<double> e(m);
    for (std::size_t i = 0; i < m; ++i) e[i] = a + (b - a) * i / double(m - 1);
    return e;
  };
  if (lf && rf) {
    const double h = 0.5 * (R - L);
    for (double e : logspace(-10, 0, grid_size / 2)) {
      grid.push_back(L + h * std::pow(10.0, e));
      grid.push_back(R - h * std::pow(10.0, e));
    }
    gdesc << "L + " << h << "*10^u and R - " << h << "*10^u, u in [-10, 0]";
  } else if (lf || rf) {
    const double e0 = lf ? L : R, dir = lf ? 1.0 : -1.0;
    const double h = std::abs(median - e0);
    for (double e : logspace(-10, 10, grid_size)) grid.push_back(e0 + dir * h * std::pow(10.0, e));
    gdesc << (lf ? "L + " : "R - ") << h << "*10^u, u in [-10, 10]";
  } else {
    const double h = std::max(quantile(d, 0.75) - quantile(d, 0.25), 1e-8);
    for (double e : logspace(-8, 8, grid_size / 2)) {
      grid.push_back(median + h * std::pow(10.0, e));
      grid.push_back(median - h * std::pow(10.0, e));
    }
    gdesc << "median +/- " << h << "*10^u, u in [-8, 8]";
  }
  gdesc << ", " << grid.size() << " points";
  rep.grid = gdesc.str();

  // (C2)
  std::size_t used = 0;
  for (double x : grid) {
    if (!sp.interior(x) || sp.is_knot(x)) continue;
    const double p = pdf(d, x);
    if (!(p > 0.0)) continue;
    const double k = std::abs(score(d, x)) * std::min(cdf(d, x), sf(d, x)) / p;
    if (!std::isfinite(k)) continue;
    ++used;
    if (k > rep.c2_sup_kappa) {
      rep.c2_sup_kappa = k;
      rep.c2_argmax = x;
    }
  }
  rep.c2 = rep.c2_sup_kappa <= kKappaPassMax ? Verdict::pass : Verdict::fail;
  if (used < grid.size()) {
    std::ostringstream n;
    n << "C2: " << grid.size() - used << " grid points skipped (density underflow or knot)";
    rep.notes.push_back(n.str());
  }

  // (C3): the weight x replaces 1+|x| for the positive-axis operator.
  const bool weighted_x = rep.operator_kind &&
                          rep.operator_kind->variant == V::positive_axis_min;
  rep.c3_weight = weighted_x ? "x" : "1+|x|";
  auto h3 = [&](double x) {
    const double p = pdf(d, x);
    if (p == 0.0) return 0.0;
    const double w = weighted_x ? x : 1.0 + std::abs(x);
    return w * std::abs(score(d, x)) * p;
  };
  bool inexact = false;
  auto piece = [&](double a, double b) {
    auto r = integrate_nothrow(h3, a, b, 1e-10, sp.knots, 4000);
    inexact |= !r.converged;
    return std::isfinite(r.value) ? r.value : kInf;
  };
  std::vector<std::vector<double>> ends;
  double core = 0.0;
  if (lf && rf) {
    const double h = 0.5 * (R - L);
    std::vector<double> left, right;
    for (int k = 0; k < kNearDecades; ++k) {
      const double a = h * std::pow(10.0, -k - 1), b = h * std::pow(10.0, -k);
      left.push_back(piece(L + a, L + b));
      right.push_back(piece(R - b, R - a));
    }
    ends = {left, right};
  } else if (lf || rf) {
    const double e0 = lf ? L : R, dir = lf ? 1.0 : -1.0;
    const double h = std::abs(median - e0);
    std::vector<double> near, far;
    for (int k = 0; k < kNearDecades; ++k) {
      const double a = e0 + dir * h * std::pow(10.0, -k - 1), b = e0 + dir * h * std::pow(10.0, -k);
      near.push_back(piece(std::min(a, b), std::max(a, b)));
    }
    for (int k = 0; k < kFarDecades; ++k) {
      const double a = e0 + dir * h * std::pow(10.0, k), b = e0 + dir * h * std::pow(10.0, k + 1);
      far.push_back(piece(std::min(a, b), std::max(a, b)));
    }
    ends = {near, far};
  } else {
    const double h = std::max(quantile(d, 0.75) - quantile(d, 0.25), 1e-8);
    core = piece(median - h, median + h);
    std::vector<double> up, down;
    for (int k = 0; k < kFarDecades; ++k) {
      const double a = h * std::pow(10.0, k), b = h * std::pow(10.0, k + 1);
      up.push_back(piece(median + a, median + b));
      down.push_back(piece(median - b, median - a));
    }
    ends = {down, up};
  }
  rep.c3_integral = core;
  for (const auto& e : ends) {
    auto t = tail_sum(e, core);
    rep.c3_integral += t.total;
    rep.c3_divergent |= t.divergent;
  }
  if (!(rep.c3_integral <= kC3DivergenceBound)) rep.c3_divergent = true;
  rep.c3 = rep.c3_divergent ? Verdict::fail : Verdict::pass;
  if (inexact) rep.notes.push_back("C3: some decade integrals did not reach 1e-10");

  // (C4), (C5) and the endpoint densities.
  const double scale = lf && rf ? R - L : 1.0;
  if (lf) {
    rep.c4 = approach(d, L, 1.0, scale, [&](double x) { return cdf(d, x) / pdf(d, x); });
    rep.c4_verdict = rep.c4.exists && rep.c4.value == 0.0 ? Verdict::pass : Verdict::fail;
  }
  if (rf) {
    rep.c5 = approach(d, R, -1.0, scale, [&](double x) { return sf(d, x) / pdf(d, x); });
    rep.c5_verdict = rep.c5.exists && rep.c5.value == 0.0 ? Verdict::pass : Verdict::fail;
  }
  if (lf && rf) {
    auto dens = [&](double x) { return pdf(d, x); };
    rep.left_density = approach(d, L, 1.0, scale, dens);
    rep.right_density = approach(d, R, -1.0, scale, dens);
    if (!rep.left_density.exists && !rep.right_density.exists)
      rep.notes.push_back("neither endpoint density limit exists; no characterization applies");
  }
  return rep;
}

} // namespace steinfit
