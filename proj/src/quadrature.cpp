#include "steinfit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace steinfit {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

// Kronrod nodes are stored as [0, x1, ..., x7]; the Gauss-7 nodes sit at the
// even indices.
Segment rule(const std::function<double(double)>& g, double lo, double hi,
             int& evals) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  const double f0 = g(mid);
  double kronrod = wk[0] * f0;
  double gauss = wg[0] * f0;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double dx = half * xk[i];
    const double pair = g(mid - dx) + g(mid + dx);
    kronrod += wk[i] * pair;
    if (i % 2 == 0) gauss += wg[i / 2] * pair;
  }
  evals += 2 * static_cast<int>(xk.size()) - 1;
  kronrod *= half;
  gauss *= half;
  const double err = std::max(std::abs(kronrod - gauss),
                              50.0 * std::numeric_limits<double>::epsilon() *
                                  std::abs(kronrod));
  return {lo, hi, kronrod, err};
}

} // namespace

QuadResult integrate_nothrow(const std::function<double(double)>& f, double a, double b,
                             double abs_tol, std::span<const double> breakpoints,
                             int max_subdivisions) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be > 0");
  if (!(a < b)) return {};

  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b && std::isfinite(p)) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (std::isinf(cuts.front()) && std::isinf(cuts.back()) && cuts.size() == 2)
    cuts.insert(cuts.begin() + 1, 0.0);

  // Each piece becomes a finite interval in its own integration variable.
  // Unbounded pieces use v = 1 - u, so the far end sits at v = 0 where
  // doubles resolve heavy tails.
  struct Piece {
    std::function<double(double)> g;
    double lo, hi;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (std::isinf(hi)) {
      pieces.push_back({[&f, lo](double v) {
                          const double x = lo + (1.0 - v) / v;
                          if (!std::isfinite(x)) return 0.0;
                          const double y = f(x);
                          return y == 0.0 ? 0.0 : y / v / v;
                        },
                        0.0, 1.0});
    } else if (std::isinf(lo)) {
      pieces.push_back({[&f, hi](double v) {
                          const double x = hi - (1.0 - v) / v;
                          if (!std::isfinite(x)) return 0.0;
                          const double y = f(x);
                          return y == 0.0 ? 0.0 : y / v / v;
                        },
                        0.0, 1.0});
    } else {
      pieces.push_back({f, lo, hi});
    }
  }

  // Global adaptive bisection, one heap per piece so each segment keeps its
  // own integrand.
  std::vector<std::priority_queue<Segment>> heaps(pieces.size());
  QuadResult out;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    Segment s = rule(pieces[i].g, pieces[i].lo, pieces[i].hi, out.evaluations);
    total += s.value;
    total_err += s.error;
    heaps[i].push(s);
  }

  int subdivisions = 0;
  while (total_err > abs_tol && subdivisions < max_subdivisions) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < heaps.size(); ++i)
      if (heaps[i].top().error > heaps[worst].top().error) worst = i;
    Segment s = heaps[worst].top();
    const double mid = 0.5 * (s.lo + s.hi);
    if (!(mid > s.lo && mid < s.hi)) break;  // interval exhausted
    heaps[worst].pop();
    Segment left = rule(pieces[worst].g, s.lo, mid, out.evaluations);
    Segment right = rule(pieces[worst].g, mid, s.hi, out.evaluations);
    total += left.value + right.value - s.value;
    total_err += left.error + right.error - s.error;
    heaps[worst].push(left);
    heaps[worst].push(right);
    ++subdivisions;
  }

  // Re-sum to shed the drift of the running totals.
  total = 0.0;
  total_err = 0.0;
  for (auto& heap : heaps) {
    while (!heap.empty()) {
      total += heap.top().value;
      total_err += heap.top().error;
      heap.pop();
    }
  }
  out.value = total;
  out.error = total_err;
  out.converged = std::isfinite(total) && total_err <= abs_tol;
  return out;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, std::span<const double> breakpoints,
                     int max_subdivisions) {
  QuadResult out = integrate_nothrow(f, a, b, abs_tol, breakpoints, max_subdivisions);
  if (!out.converged) {
    std::ostringstream msg;
    msg << "integrate: no convergence on [" << a << ", " << b
        << "], achieved error " << out.error << " > " << abs_tol;
    throw QuadratureError(msg.str(), out.error);
  }
  return out;
}

} // namespace steinfit
