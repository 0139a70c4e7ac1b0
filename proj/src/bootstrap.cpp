#include "steinfit/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "steinfit/parallel.hpp"

namespace steinfit {
namespace {

bool usable(const FitResult& f) { return f.converged; }

// Fit with one jittered retry; nullopt when both attempts fail.
std::optional<FitResult> refit(Family family, const Sample& s, bool& retried) {
  retried = false;
  for (int attempt = 0; attempt < 2; ++attempt) {
    BurrMleOptions opt;
    if (attempt == 1) {
      opt.jitter = 0.5;
      retried = true;
    }
    try {
      FitResult f = fit_family(family, s, opt);
      if (usable(f)) return f;
    } catch (const std::invalid_argument&) {
    } catch (const NumericalError&) {
    }
  }
  return std::nullopt;
}

struct Replicate {
  bool ok = false;
  bool retried = false;
  std::vector<double> values;
  FitResult fit;
};

} // namespace

void BootstrapOptions::validate() const {
  if (B < 1) throw std::invalid_argument("bootstrap: B must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("bootstrap: alpha must be in (0, 1)");
  if (!(max_failure_fraction >= 0.0 && max_failure_fraction < 1.0))
    throw std::invalid_argument("bootstrap: max_failure_fraction must be in [0, 1)");
}

std::size_t critical_rank(std::size_t B, double alpha) {
  const double r = std::ceil((1.0 - alpha) * static_cast<double>(B) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(r, 1.0)), 1, B);
}

Decision decide(double statistic, std::vector<double> reps, double alpha) {
  if (reps.empty()) throw std::invalid_argument("decide: no replicates");
  std::sort(reps.begin(), reps.end());
  Decision d;
  d.critical_rank = critical_rank(reps.size(), alpha);
  d.critical_value = reps[d.critical_rank - 1];
  const auto ge = reps.end() - std::lower_bound(reps.begin(), reps.end(), statistic);
  d.p_value = (1.0 + static_cast<double>(ge)) / (static_cast<double>(reps.size()) + 1.0);
  d.reject = statistic > d.critical_value;
  return d;
}

double compute_statistic(const StatisticId& id, const SortedSample& s, const FitResult& fit) {
  using K = StatisticId::Kind;
  if (id.kind == K::burr_B || id.kind == K::generic_L2) {
    switch (fit.family) {
      case Family::burr_xii: return burr_B_quadrature(s, fit.param("k"), fit.param("c"), id.a);
      case Family::gamma:
        if (id.kind == K::burr_B) break;
        return gamma_G(s, fit.param("k"), fit.param("lambda"), id.a);
      case Family::normal:
        if (id.kind == K::burr_B) break;
        return normal_G(s, fit.param("mu"), fit.param("sigma2"), id.a);
      default: break;
    }
    throw std::invalid_argument("statistic " + id.label() + " is not defined for family " +
                                std::string(family_name(fit.family)));
  }
  const Distribution law = fit.distribution();
  std::vector<double> u;
  u.reserve(s.size());
  for (double x : s) u.push_back(cdf(law, x));
  switch (id.kind) {
    case K::ks: {
      const double k = ks_pit(u);
      return id.ks_sqrt_n ? std::sqrt(static_cast<double>(s.size())) * k : k;
    }
    case K::cvm: return cvm_pit(u);
    case K::ad: return ad_pit(u).value;
    case K::watson: return watson_pit(u);
    default: break;
  }
  return 0.0;
}

std::vector<TestOutcome> bootstrap_tests(const Sample& s, Family family,
                                         std::span<const StatisticId> stats,
                                         const BootstrapOptions& opt, const RngStream& rng) {
  opt.validate();
  if (stats.empty()) throw std::invalid_argument("bootstrap: no statistics requested");
  if (!is_hypothesis_family(family))
    throw std::invalid_argument("bootstrap: no estimator for family " +
                                std::string(family_name(family)));

  const FitResult fit = fit_family(family, s);
  if (!fit.converged) throw NumericalError("bootstrap: fit of the observed sample failed: " + fit.trace);
  const SortedSample sorted = s.sorted();
  std::vector<double> observed;
  for (const auto& id : stats) observed.push_back(compute_statistic(id, sorted, fit));
  const Distribution law = fit.distribution();

  std::vector<Replicate> reps(opt.B);
  parallel_for(opt.B, opt.threads, [&](std::size_t j) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(j));
    const Sample draw = sample(law, s.size(), sub);
    Replicate& r = reps[j];
    auto f = refit(family, draw, r.retried);
    if (!f) return;
    const SortedSample ds = draw.sorted();
    for (const auto& id : stats) r.values.push_back(compute_statistic(id, ds, *f));
    r.ok = std::all_of(r.values.begin(), r.values.end(), [](double v) { return std::isfinite(v); });
    r.fit = std::move(*f);
  });

  std::size_t failed = 0, retried = 0;
  for (const auto& r : reps) {
    failed += r.ok ? 0 : 1;
    retried += r.retried ? 1 : 0;
  }
  if (static_cast<double>(failed) > opt.max_failure_fraction * static_cast<double>(opt.B)) {
    std::ostringstream msg;
    msg << "bootstrap: " << failed << " of " << opt.B
        << " replicate fits failed after retry (budget " << opt.max_failure_fraction * 100 << "%)";
    throw NumericalError(msg.str());
  }

  std::vector<TestOutcome> out;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    std::vector<double> values;
    for (const auto& r : reps)
      if (r.ok) values.push_back(r.values[i]);
    const Decision d = decide(observed[i], values, opt.alpha);
    TestOutcome o;
    o.statistic = stats[i].label();
    o.family = family;
    o.statistic_value = observed[i];
    o.critical_value = d.critical_value;
    o.p_value = d.p_value;
    o.reject = d.reject;
    o.critical_rank = d.critical_rank;
    o.fit = fit;
    o.B = opt.B;
    o.alpha = opt.alpha;
    o.failed_replicates = failed;
    o.retried_replicates = retried;
    o.seed = rng.seed();
    o.stream_id = rng.stream_id();
    o.rng_fingerprint = rng.fingerprint();
    if (opt.keep_replicates) {
      std::sort(values.begin(), values.end());
      o.replicates = std::move(values);
      for (const auto& r : reps) o.replicate_fits.push_back(r.fit);
    }
    out.push_back(std::move(o));
  }
  return out;
}

TestOutcome bootstrap_test(const Sample& s, Family family, const StatisticId& stat,
                           const BootstrapOptions& opt, const RngStream& rng) {
  return bootstrap_tests(s, family, std::span<const StatisticId>(&stat, 1), opt, rng).front();
}

} // namespace steinfit
