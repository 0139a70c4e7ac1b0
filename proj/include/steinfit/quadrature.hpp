#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "steinfit/errors.hpp"

namespace steinfit {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;      ///< Sum of the Gauss-Kronrod error estimates.
  int evaluations = 0;
  bool converged = true;
};

class QuadratureError : public NumericalError {
public:
  QuadratureError(const std::string& what, double achieved)
      : NumericalError(what), achieved_error(achieved) {}
  double achieved_error;
};

/// Globally adaptive G7/K15 quadrature of f over [a, b] with an absolute
/// error target.
///
/// Either end may be infinite; unbounded pieces are compactified with
/// x = c + u / (1 - u) (mirrored for the lower end), evaluated in v = 1 - u. `breakpoints` are split
/// points where f is allowed to kink or jump; those outside (a, b) are
/// ignored. Throws QuadratureError when the subdivision budget runs out
/// before the summed error estimate drops below `abs_tol`.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, std::span<const double> breakpoints = {},
                     int max_subdivisions = 4000);

/// Same driver, but reports non-convergence through QuadResult::converged
/// instead of throwing.
QuadResult integrate_nothrow(const std::function<double(double)>& f, double a, double b,
                             double abs_tol, std::span<const double> breakpoints = {},
                             int max_subdivisions = 4000);

} // namespace steinfit
