#pragma once

#include <stdexcept>
#include <string>

namespace steinfit {

/// A computation on valid input failed to produce a trustworthy number
/// (non-convergence, exhausted failure budget).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace steinfit
