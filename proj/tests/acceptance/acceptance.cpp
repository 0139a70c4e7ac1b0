// Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion.
// Usage: steinfit_acceptance [--only N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "steinfit/bootstrap.hpp"
#include "steinfit/characterization.hpp"
#include "steinfit/cli.hpp"
#include "steinfit/distributions.hpp"
#include "steinfit/estimation.hpp"
#include "steinfit/gof.hpp"
#include "steinfit/json_io.hpp"
#include "steinfit/simulation.hpp"

using namespace steinfit;
namespace fs = std::filesystem;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

unsigned all_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// 1. Closed form of B against the piecewise-exact integral.
Result closed_form_oracle() {
  RngStream rng(1001, 0);
  double worst = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 50);
    std::vector<double> x(n);
    for (auto& v : x) v = std::exp(-3 + 6 * rng.uniform());
    const double k = 0.2 + 4.8 * rng.uniform(), c = 0.2 + 4.8 * rng.uniform();
    const double a = 0.1 + 9.9 * rng.uniform();
    const SortedSample s(x);
    worst = std::max(worst, rel(burr_B_closed(s, k, c, a), burr_B_quadrature(s, k, c, a)));
  }
  return {worst <= 1e-8, "500 instances, max relative difference " + fmt("%.3g", worst)};
}

// 2. Fixed-point residuals on 50-point quantile grids.
Result fixed_point_identities() {
  const std::vector<Distribution> laws = {
      dist::normal(),           dist::laplace(),          dist::gamma(2, 1),
      dist::exponential(1),     dist::inverse_gaussian(1, 1), dist::weibull(1.5),
      dist::burr(2, 1),         dist::levy(0, 1),         dist::lognormal(0, 1),
      dist::beta(2, 3),         dist::uniform(0, 1)};
  double worst = 0.0;
  std::string worst_law;
  bool ok = true;
  for (const auto& d : laws) {
    const auto op = default_operator(d);
    if (!op) return {false, d.label() + " has no operator"};
    double r = 0.0;
    try {
      r = fixed_point_residual(d, *op, quantile_grid(d, 50));
    } catch (const std::exception& e) {
      return {false, d.label() + ": " + e.what()};
    }
    if (!(r <= 1e-6)) ok = false;
    if (!(r <= worst)) {
      worst = r;
      worst_law = d.label();
    }
  }
  return {ok, "11 families, max residual " + fmt("%.3g", worst) + " (" + worst_law + ")"};
}

// 3. E_cand[f' + s f] = F_cand(t) - P(t) on random triples.
Result stein_identity() {
  RngStream rng(1003, 0);
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  auto positive_light = [&]() -> Distribution {
    switch (static_cast<int>(u(0, 7))) {
      case 0: return dist::gamma(u(0.5, 4), u(0.5, 2));
      case 1: return dist::exponential(u(0.3, 3));
      case 2: return dist::weibull(u(0.6, 3), u(0.5, 2));
      case 3: return dist::lognormal(u(-0.5, 0.5), u(0.3, 1));
      case 4: return dist::inverse_gaussian(u(0.5, 2), u(0.5, 3));
      case 5: return dist::gompertz(u(0.5, 3));
      default: return dist::linear_failure_rate(u(0.5, 4));
    }
  };
  auto positive_dist = [&]() -> Distribution {
    if (rng.uniform() < 0.25) return dist::burr(u(0.5, 3), u(0.5, 3));
    if (rng.uniform() < 0.1) return dist::half_normal();
    return positive_light();
  };
  auto real_law = [&]() -> Distribution {
    return rng.uniform() < 0.5 ? dist::normal(u(-1, 1), u(0.5, 2)) : dist::laplace(u(-1, 1), u(0.5, 2));
  };
  auto unit_law = [&]() -> Distribution {
    return rng.uniform() < 0.3 ? dist::uniform(0, 1) : dist::beta(u(1.2, 4), u(1.2, 4));
  };

  double worst = 0.0;
  std::size_t failures = 0;
  std::string first;
  for (int rep = 0; rep < 100; ++rep) {
    const double kind = rng.uniform();
    Distribution d = kind < 0.6 ? positive_dist() : kind < 0.85 ? real_law() : unit_law();
    Distribution c = kind < 0.6 ? positive_light() : kind < 0.85 ? real_law() : unit_law();
    const double t = quantile(c, u(0.05, 0.95));
    try {
      const double err = std::abs(stein_expectation(d, c, t) - (cdf(c, t) - cdf(d, t)));
      worst = std::max(worst, err);
      if (!(err <= 1e-7) && first.empty()) first = d.label() + " / " + c.label() + " t=" + fmt("%.4g", t);
    } catch (const std::exception& e) {
      ++failures;
      if (first.empty()) first = d.label() + " / " + c.label() + ": " + e.what();
    }
  }
  std::string detail = "100 triples, max error " + fmt("%.3g", worst);
  if (failures) detail += ", " + std::to_string(failures) + " errors";
  if (!first.empty()) detail += "; first offender " + first;
  return {failures == 0 && worst <= 1e-7, detail};
}

// 4. Level under Burr(1,1).
Result level_calibration() {
  PowerStudyConfig cfg;
  cfg.n = 100;
  cfg.alpha = 0.1;
  cfg.mc_reps = 1000;
  cfg.bootstrap_B = 100;
  cfg.seed = 1;
  cfg.statistics = {StatisticId::burr_B(0.25), StatisticId::burr_B(1), StatisticId::burr_B(3),
                    StatisticId::ks(), StatisticId::cvm(), StatisticId::ad()};
  cfg.alternatives = {AlternativeSpec(dist::burr(1, 1))};
  cfg.threads = all_threads();
  const auto rep = run_power_study(cfg);
  bool ok = true;
  std::string detail = "Burr(1,1) n=100 1000 reps:";
  for (const auto& c : rep.cells) {
    ok = ok && !c.aborted && c.rate >= 0.07 && c.rate <= 0.13;
    detail += " " + c.statistic + "=" + fmt("%.3f", c.rate);
  }
  return {ok, detail + fmt(" (%.0f s)", rep.wall_time_seconds)};
}

// 5. Power spot checks against reference rejection rates.
Result power_spot_checks() {
  struct Check {
    std::string alt;
    std::string stat;
    long target;
    long tol;
  };
  PowerStudyConfig cfg;
  cfg.n = 100;
  cfg.mc_reps = 500;
  cfg.bootstrap_B = 100;
  cfg.seed = 1;
  cfg.threads = all_threads();
  cfg.statistics = {StatisticId::burr_B(0.25), StatisticId::burr_B(1), StatisticId::burr_B(3)};
  cfg.alternatives = {AlternativeSpec(dist::weibull(0.5)), AlternativeSpec(dist::exponential(1)),
                      AlternativeSpec(dist::gompertz(2)), AlternativeSpec(dist::inverse_weibull(1)),
                      AlternativeSpec(dist::linear_failure_rate(2))};
  const auto r100 = run_power_study(cfg);
  const std::vector<Check> checks = {{"W(0.5)", "B_0.25", 74, 6}, {"Exp(1)", "B_1", 69, 6},
                                     {"GO(2)", "B_1", 90, 6},     {"IW(1)", "B_3", 66, 6},
                                     {"LF(2)", "B_3", 77, 6}};
  bool ok = true;
  std::string detail;
  auto record = [&](const PowerStudyReport& rep, const Check& ch, const char* tag) {
    const auto& cell = rep.cell(ch.alt, ch.stat);
    const long pct = cell.completed ? percent_rounded(cell.rejections, cell.completed) : -1;
    const bool hit = !cell.aborted && std::abs(pct - ch.target) <= ch.tol;
    ok = ok && hit;
    if (!detail.empty()) detail += ";";
    detail += " " + std::string(tag) + ch.alt + "/" + ch.stat + " " + std::to_string(pct) + " vs " +
              std::to_string(ch.target) + "+-" + std::to_string(ch.tol) + (hit ? "" : " MISS");
  };
  for (const auto& ch : checks) record(r100, ch, "");

  cfg.n = 200;
  cfg.statistics = {StatisticId::burr_B(0.25)};
  cfg.alternatives = {AlternativeSpec(dist::weibull(0.5))};
  const auto r200 = run_power_study(cfg);
  record(r200, {"W(0.5)", "B_0.25", 97, 4}, "n=200 ");
  return {ok, "500 reps:" + detail};
}

// 6. Condition diagnostics.
Result condition_diagnostics() {
  std::string detail;
  bool ok = true;
  const auto sg = check_conditions(dist::shifted_gamma(0.5, 1, 1));
  const bool sg_ok = sg.c3_divergent && sg.c3 == Verdict::fail;
  ok = ok && sg_ok;
  detail += std::string("SGamma(0.5,1,1) C3 ") + std::string(verdict_name(sg.c3));
  const auto arcsine = check_conditions(dist::beta(0.5, 0.5));
  ok = ok && !arcsine.supported;
  detail += std::string(", Beta(0.5,0.5) ") + (arcsine.supported ? "supported" : "unsupported");
  const std::vector<Distribution> hyp = {dist::burr(1, 1), dist::burr(2, 1),   dist::burr(4, 1),
                                         dist::burr(0.5, 2), dist::burr(2, 0.5), dist::gamma(1, 1),
                                         dist::gamma(2, 1),  dist::gamma(5, 2),  dist::normal(0, 1),
                                         dist::normal(3, 0.25)};
  std::size_t passing = 0;
  for (const auto& d : hyp) {
    const auto r = check_conditions(d);
    if (r.passes()) ++passing;
    else detail += ", " + d.label() + " fails";
  }
  ok = ok && passing == hyp.size();
  detail += ", hypothesis laws passing " + std::to_string(passing) + "/" + std::to_string(hyp.size());
  return {ok, detail};
}

// 7. Golden values of the classical statistics.
Result golden_values() {
  const CdfFn id = [](double x) { return x; };
  const SortedSample one(std::vector<double>{0.5}), two(std::vector<double>{0.25, 0.75});
  struct G {
    const char* name;
    double got, want;
  };
  const std::vector<G> g = {{"KS n=2", ks(two, id), 0.25},
                            {"CM n=1", cvm(one, id), 1.0 / 12},
                            {"CM n=2", cvm(two, id), 1.0 / 24},
                            {"AD n=1", ad(one, id), 2 * std::log(2.0) - 1},
                            {"WA n=1", watson(one, id), 1.0 / 12}};
  double worst = 0.0;
  std::string bad;
  for (const auto& x : g) {
    const double e = std::abs(x.got - x.want);
    worst = std::max(worst, e);
    if (!(e <= 1e-12)) bad += std::string(" ") + x.name;
  }
  return {bad.empty(), "5 hand cases, max error " + fmt("%.3g", worst) + (bad.empty() ? "" : "; off:" + bad)};
}

// 8. Estimator suite.
Result estimator_suite() {
  std::string detail;
  bool ok = true;

  RngStream rng(1008, 0);
  double worst_stat = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x(2 + rep % 60);
    for (auto& v : x) v = std::exp(-4 + 8 * rng.uniform());
    const double c = std::exp(-3 + 6 * rng.uniform());
    const double k = burr_profile_k(x, c);
    worst_stat = std::max(worst_stat, std::abs(burr_dloglik_dk(x, k, c)) / (x.size() / k));
  }
  ok = ok && worst_stat <= 1e-10;
  detail += "stationarity max " + fmt("%.2g", worst_stat);

  std::size_t beaten = 0;
  double worst_gap = -kInf;
  for (int rep = 0; rep < 20; ++rep) {
    const double k = 0.5 + 3 * rng.uniform(), c = 0.5 + 3 * rng.uniform();
    const auto s = sample(dist::burr(k, c), 10 + 2 * static_cast<std::size_t>(rep), rng);
    const auto fit = burr_mle(s);
    double best = -kInf;
    for (int i = 0; i < 400; ++i)
      for (int j = 0; j < 400; ++j)
        best = std::max(best, burr_loglik(s.values(), 0.05 + 9.95 * i / 399, 0.05 + 9.95 * j / 399));
    worst_gap = std::max(worst_gap, best - fit.loglik);
    if (fit.converged && fit.loglik >= best - 1e-9 * std::abs(best)) ++beaten;
  }
  ok = ok && beaten == 20;
  detail += ", MLE >= 400x400 grid on " + std::to_string(beaten) + "/20 (max grid excess " + fmt("%.2g", worst_gap) + ")";

  bool exact = true;
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = sample(dist::gamma(0.5 + 4 * rng.uniform(), 1), 20, rng);
    const auto base = gamma_fit(s);
    for (double f : {0.25, 2.0, 1024.0}) {
      std::vector<double> y;
      for (double v : s) y.push_back(f * v);
      const auto g = gamma_fit(Sample(y));
      exact = exact && g.param("k") == base.param("k") && g.param("lambda") == f * base.param("lambda");
    }
  }
  ok = ok && exact;
  detail += std::string(", gamma equivariance ") + (exact ? "exact" : "broken");
  return {ok, detail};
}

// 9. CLI byte determinism across thread counts.
Result cli_determinism() {
  const auto dir = fs::temp_directory_path() / "steinfit_acceptance";
  fs::create_directories(dir);
  {
    RngStream rng(1009, 0);
    std::ofstream data(dir / "data.txt");
    for (double x : sample(dist::burr(1, 1), 100, rng)) data << dump_json(Json(x)) << "\n";
    std::ofstream cfg(dir / "config.json");
    cfg << R"J({"n": 50, "alpha": 0.1, "mc_reps": 20, "bootstrap_B": 30, "seed": 9,
      "statistics": ["B_0.25", "B_3", "KS", "CM", "AD", "WA"], "alternatives": ["W(0.5)", "Burr_XII(1,1)", "LF(2)"]})J";
  }
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return std::to_string(code) + "\n" + out.str() + err.str();
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  auto report = [&](const fs::path& p) {
    auto j = Json::parse(slurp(p));
    j.erase("wall_time_seconds");
    return dump_json(j);
  };

  std::size_t compared = 0, differing = 0;
  auto same = [&](const std::string& a, const std::string& b) {
    ++compared;
    if (a != b) ++differing;
  };
  for (const char* stat : {"B", "KS", "AD"}) {
    std::vector<std::string> base = {"test", "--data", (dir / "data.txt").string(), "--stat", stat, "--B", "100",
                                     "--alpha", "0.1", "--seed", "42", "--keep-replicates"};
    if (std::string(stat) == "B") base.insert(base.end(), {"--a", "3"});
    auto t1 = base, t8 = base;
    t1.insert(t1.end(), {"--threads", "1"});
    t8.insert(t8.end(), {"--threads", "8"});
    const auto a = run(t1);
    same(a, run(t8));
    same(a, run(t1));
  }
  std::vector<std::string> outs;
  for (const char* th : {"1", "8"}) {
    const auto out_dir = dir / (std::string("sim") + th);
    outs.push_back(run({"simulate", "--config", (dir / "config.json").string(), "--out", out_dir.string(),
                        "--threads", th}));
  }
  same(outs[0], outs[1]);
  same(slurp(dir / "sim1" / "power.csv"), slurp(dir / "sim8" / "power.csv"));
  same(slurp(dir / "sim1" / "power.md"), slurp(dir / "sim8" / "power.md"));
  same(report(dir / "sim1" / "report.json"), report(dir / "sim8" / "report.json"));
  const auto v = run({"verify", "--family", "burr", "--params", "k=1,c=1"});
  same(v, run({"verify", "--family", "burr", "--params", "k=1,c=1"}));
  const bool ran = outs[0].rfind("0\n", 0) == 0 && v.rfind("0\n", 0) == 0;
  return {ran && differing == 0,
          std::to_string(compared) + " output pairs compared (threads 1 vs 8 and repeats), " +
              std::to_string(differing) + " differ"};
}

} // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);

  const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"closed form vs exact integral", closed_form_oracle},
      {"fixed-point identities", fixed_point_identities},
      {"Stein identity under a candidate law", stein_identity},
      {"level calibration", level_calibration},
      {"power spot checks", power_spot_checks},
      {"condition diagnostics", condition_diagnostics},
      {"classical statistics golden values", golden_values},
      {"estimator suite", estimator_suite},
      {"CLI determinism", cli_determinism}};

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && r.pass;
    std::printf("[%s] %zu. %s: %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                r.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
