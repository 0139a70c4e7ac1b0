#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "steinfit/distributions.hpp"
#include "steinfit/errors.hpp"
#include "steinfit/estimation.hpp"
#include "steinfit/gof.hpp"
#include "steinfit/rng.hpp"
#include "steinfit/sample.hpp"

namespace steinfit {

struct BootstrapOptions {
  std::size_t B = 100;
  double alpha = 0.1;
  unsigned threads = 1;
  bool keep_replicates = false;
  double max_failure_fraction = 0.05;

  void validate() const;
};

struct TestOutcome {
  std::string statistic;
  Family family = Family::burr_xii;
  double statistic_value = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  FitResult fit;
  std::size_t B = 0;
  double alpha = 0.0;
  std::size_t critical_rank = 0;      ///< 1-based rank among the successful replicates
  std::size_t failed_replicates = 0;  ///< excluded after a failed retry
  std::size_t retried_replicates = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t rng_fingerprint = 0;
  std::vector<double> replicates;      ///< sorted, only with keep_replicates
  std::vector<FitResult> replicate_fits;  ///< in replicate order, only with keep_replicates
};

/// ceil((1 - alpha) B), clamped to [1, B].
std::size_t critical_rank(std::size_t B, double alpha);

struct Decision {
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  std::size_t critical_rank = 0;
};

/// Critical value B*_(r) with r = critical_rank(B*, alpha), p-value
/// (1 + #{B* >= stat}) / (B* + 1), reject iff stat > critical value.
Decision decide(double statistic, std::vector<double> replicates, double alpha);

/// Statistic of the (sorted) sample under the fitted law. Throws
/// std::invalid_argument for combinations that do not exist (B_a outside the
/// Burr family).
double compute_statistic(const StatisticId& id, const SortedSample& s, const FitResult& fit);

/// Parametric bootstrap for several statistics sharing the same replicate
/// draws and re-fits. Replicate j uses rng.substream(j). A replicate whose
/// re-fit fails is retried once with a jittered optimizer start, then
/// excluded; more than max_failure_fraction * B exclusions throws
/// NumericalError, as does a failed fit of the observed sample.
std::vector<TestOutcome> bootstrap_tests(const Sample& s, Family family,
                                         std::span<const StatisticId> stats,
                                         const BootstrapOptions& opt, const RngStream& rng);

TestOutcome bootstrap_test(const Sample& s, Family family, const StatisticId& stat,
                           const BootstrapOptions& opt, const RngStream& rng);

} // namespace steinfit
