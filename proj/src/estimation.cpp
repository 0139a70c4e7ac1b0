#include "steinfit/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace steinfit {
namespace {

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }
// 1 / (1 + e^-z).
double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Profile log-likelihood in theta = log c, on precomputed log x.
struct Profile {
  std::span<const double> lx;
  double sum_lx = 0.0;
  double n = 0.0;
  std::size_t evals = 0;

  double S(double c) const {
    double s = 0.0;
    for (double v : lx) s += softplus(c * v);
    return s;
  }
  double value(double theta) {
    ++evals;
    const double c = std::exp(theta);
    const double s = S(c);
    const double k = n / s;
    return n * theta + n * std::log(k) + (c - 1.0) * sum_lx - (k + 1.0) * s;
  }
  // d/dtheta, using dl/dk = 0 at k_hat.
  double slope(double theta) {
    ++evals;
    const double c = std::exp(theta);
    double s = 0.0, ds = 0.0;
    for (double v : lx) {
      s += softplus(c * v);
      ds += v * logistic(c * v);
    }
    const double k = n / s;
    return c * (n / c + sum_lx - (k + 1.0) * ds);
  }
};

void require_positive_sample(const Sample& s, std::string_view who) {
  if (s.size() < 2) throw std::invalid_argument(std::string(who) + ": need n >= 2");
  for (double x : s)
    if (!(x > 0.0) || !std::isfinite(x))
      throw std::invalid_argument(std::string(who) + ": observations must be finite and > 0");
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(10);
  o << v;
  return o.str();
}

} // namespace

double FitResult::param(std::string_view name) const {
  auto it = params.find(name);
  if (it == params.end()) throw std::out_of_range("FitResult: no parameter " + std::string(name));
  return it->second;
}

Distribution FitResult::distribution() const { return Distribution(family, params); }

double burr_loglik(std::span<const double> xs, double k, double c) {
  const double n = static_cast<double>(xs.size());
  double sum_lx = 0.0, s = 0.0;
  for (double x : xs) {
    const double lx = std::log(x);
    sum_lx += lx;
    s += softplus(c * lx);
  }
  return n * std::log(c) + n * std::log(k) + (c - 1.0) * sum_lx - (k + 1.0) * s;
}

double burr_profile_k(std::span<const double> xs, double c) {
  double s = 0.0;
  for (double x : xs) s += softplus(c * std::log(x));
  return static_cast<double>(xs.size()) / s;
}

double burr_profile_loglik(std::span<const double> xs, double c) {
  return burr_loglik(xs, burr_profile_k(xs, c), c);
}

double burr_dloglik_dk(std::span<const double> xs, double k, double c) {
  double s = 0.0;
  for (double x : xs) s += softplus(c * std::log(x));
  return static_cast<double>(xs.size()) / k - s;
}

FitResult burr_mle(const Sample& smp, const BurrMleOptions& opt) {
  require_positive_sample(smp, "burr_mle");
  if (!(opt.c_lo > 0.0 && opt.c_lo < opt.c_hi) || opt.grid < 3 || !(opt.jitter >= 0.0 && opt.jitter < 1.0))
    throw std::invalid_argument("burr_mle: invalid options");
  const auto xs = smp.values();
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; }))
    throw std::invalid_argument("burr_mle: degenerate sample (all observations equal)");

  std::vector<double> lx(xs.size());
  Profile prof;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lx[i] = std::log(xs[i]);
    prof.sum_lx += lx[i];
  }
  prof.lx = lx;
  prof.n = static_cast<double>(xs.size());

  FitResult out;
  out.family = Family::burr_xii;
  std::ostringstream trace;

  // Coarse grid in theta = log c, widened by decades while the best point
  // sits on an edge.
  double lo = std::log(opt.c_lo), hi = std::log(opt.c_hi);
  const double step = (hi - lo) / static_cast<double>(opt.grid - 1);
  std::vector<double> thetas, values;
  std::size_t best = 0;
  bool edge = false;
  for (int expansion = 0;; ++expansion) {
    thetas.clear();
    values.clear();
    for (double th = lo + opt.jitter * step; th <= hi + 1e-12; th += step) {
      thetas.push_back(th);
      values.push_back(prof.value(th));
    }
    best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
      if (values[i] > values[best] || std::isnan(values[best])) best = i;
    const bool at_lo = best == 0, at_hi = best + 1 == values.size();
    edge = at_lo || at_hi;
    if (!edge || expansion >= opt.max_expansions) break;
    if (at_lo) lo -= std::log(10.0);
    if (at_hi) hi += std::log(10.0);
  }
  trace << "grid " << thetas.size() << " points on c in [" << fmt(std::exp(lo)) << ", "
        << fmt(std::exp(hi)) << "]";

  double theta = thetas[best];
  if (edge) {
    out.converged = false;
    trace << "; maximum at bracket edge c=" << fmt(std::exp(theta));
  } else {
    double a = thetas[best - 1], b = thetas[best + 1];
    const double fa = prof.slope(a), fb = prof.slope(b);
    if (fa > 0.0 && fb < 0.0) {
      std::uintmax_t iters = 200;
      auto tol = [&](double u, double v) { return std::abs(v - u) <= opt.tol_logc; };
      auto [r0, r1] = boost::math::tools::toms748_solve([&](double t) { return prof.slope(t); },
                                                        a, b, fa, fb, tol, iters);
      theta = 0.5 * (r0 + r1);
      trace << "; toms748 " << iters << " iterations";
    } else {
      std::uintmax_t iters = 200;
      auto r = boost::math::tools::brent_find_minima([&](double t) { return -prof.value(t); },
                                                     a, b, 45, iters);
      theta = r.first;
      trace << "; brent " << iters << " iterations";
    }
    const double g = prof.slope(theta);
    out.converged = std::isfinite(g) && std::abs(g) <= 1e-6 * prof.n;
    trace << "; dl/dlog(c) = " << fmt(g);
  }

  const double c = std::exp(theta);
  const double k = burr_profile_k(xs, c);
  out.params = {{"k", k}, {"c", c}, {"sigma", 1.0}};
  out.loglik = burr_loglik(xs, k, c);
  out.iterations = prof.evals;
  if (!std::isfinite(out.loglik) || !(k > 0.0) || !std::isfinite(k)) out.converged = false;
  out.trace = trace.str();
  return out;
}

FitResult gamma_fit(const Sample& s) {
  require_positive_sample(s, "gamma_fit");
  const double n = static_cast<double>(s.size());
  double mean = 0.0;
  for (double x : s) mean += x;
  mean /= n;
  double s2 = 0.0;
  for (double x : s) s2 += (x - mean) * (x - mean);
  s2 /= n;
  if (!(s2 > 0.0)) throw std::invalid_argument("gamma_fit: zero sample variance");
  FitResult out;
  out.family = Family::gamma;
  out.params = {{"k", mean * mean / s2}, {"lambda", s2 / mean}};
  out.loglik = log_likelihood(out.distribution(), s);
  out.converged = true;
  out.trace = "moments";
  return out;
}

FitResult normal_fit(const Sample& s) {
  if (s.size() < 2) throw std::invalid_argument("normal_fit: need n >= 2");
  const double n = static_cast<double>(s.size());
  double mean = 0.0;
  for (double x : s) {
    if (!std::isfinite(x)) throw std::invalid_argument("normal_fit: non-finite observation");
    mean += x;
  }
  mean /= n;
  double s2 = 0.0;
  for (double x : s) s2 += (x - mean) * (x - mean);
  s2 /= n;
  FitResult out;
  out.family = Family::normal;
  out.params = {{"mu", mean}, {"sigma2", s2}};
  out.converged = s2 > 0.0;
  out.loglik = out.converged ? log_likelihood(out.distribution(), s)
                              : std::numeric_limits<double>::quiet_NaN();
  out.trace = out.converged ? "moments" : "zero variance";
  return out;
}

bool is_hypothesis_family(Family f) {
  return f == Family::burr_xii || f == Family::gamma || f == Family::normal;
}

FitResult fit_family(Family family, const Sample& s, const BurrMleOptions& opt) {
  switch (family) {
    case Family::burr_xii: return burr_mle(s, opt);
    case Family::gamma: return gamma_fit(s);
    case Family::normal: return normal_fit(s);
    default:
      throw std::invalid_argument("no estimator for family " + std::string(family_name(family)));
  }
}

} // namespace steinfit
