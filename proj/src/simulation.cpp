#include "steinfit/simulation.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "steinfit/bootstrap.hpp"
#include "steinfit/json_io.hpp"
#include "steinfit/parallel.hpp"

namespace steinfit {
namespace {

constexpr double kAbortFraction = 0.05;

// Per-replicate decision for one statistic: 1 reject, 0 accept, -1 failed.
struct RepResult {
  std::vector<signed char> decision;
  std::vector<std::string> failure;
};

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

const PowerCell* find_cell(const PowerStudyReport& r, std::string_view alt, std::string_view stat) {
  for (const auto& c : r.cells)
    if (c.alternative == alt && c.statistic == stat) return &c;
  return nullptr;
}

} // namespace

void PowerStudyConfig::validate() const {
  if (n < 2) throw std::invalid_argument("n: must be >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha: must be in (0, 1)");
  if (mc_reps < 1) throw std::invalid_argument("mc_reps: must be >= 1");
  if (bootstrap_B < 1) throw std::invalid_argument("bootstrap_B: must be >= 1");
  if (statistics.empty()) throw std::invalid_argument("statistics: at least one statistic is required");
  if (!is_hypothesis_family(family))
    throw std::invalid_argument("family: no estimator for " + std::string(family_name(family)));
  std::set<std::string> stat_labels;
  for (const auto& s : statistics) {
    if (s.kind == StatisticId::Kind::burr_B && family != Family::burr_xii)
      throw std::invalid_argument("statistics: " + s.label() + " requires family burr");
    if (!stat_labels.insert(s.label()).second)
      throw std::invalid_argument("statistics: duplicate " + s.label());
  }
  std::set<std::string> labels;
  for (const auto& a : alternatives) {
    if (a.label.empty()) throw std::invalid_argument("alternatives: empty label");
    if (!labels.insert(a.label).second)
      throw std::invalid_argument("alternatives: duplicate label " + a.label);
  }
}

const PowerCell& PowerStudyReport::cell(std::string_view alternative, std::string_view statistic) const {
  if (const auto* c = find_cell(*this, alternative, statistic)) return *c;
  throw std::out_of_range("no cell for " + std::string(alternative) + " / " + std::string(statistic));
}

PowerStudyReport run_power_study(const PowerStudyConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n_alt = cfg.alternatives.size(), n_stat = cfg.statistics.size();
  const std::size_t reps = cfg.mc_reps;

  BootstrapOptions bopt;
  bopt.B = cfg.bootstrap_B;
  bopt.alpha = cfg.alpha;

  std::vector<RepResult> results(n_alt * reps);
  const unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  parallel_for(results.size(), threads, [&](std::size_t task) {
    const auto& alt = cfg.alternatives[task / reps];
    const std::uint64_t r = task % reps;
    const RngStream rep_stream = RngStream(cfg.seed, fnv1a64(alt.label)).substream(r);
    RepResult& out = results[task];
    out.decision.assign(n_stat, -1);
    out.failure.assign(n_stat, {});

    auto record_failure = [&](std::size_t i, const std::exception& e) {
      out.decision[i] = -1;
      out.failure[i] = "replicate " + std::to_string(r) + ": " + e.what();
    };
    auto run = [&](std::size_t first, std::size_t count, const RngStream& boot, const Sample& data) {
      try {
        auto outcomes = bootstrap_tests(data, cfg.family,
                                        std::span<const StatisticId>(cfg.statistics).subspan(first, count),
                                        bopt, boot);
        for (std::size_t i = 0; i < count; ++i) out.decision[first + i] = outcomes[i].reject ? 1 : 0;
      } catch (const std::invalid_argument& e) {
        for (std::size_t i = 0; i < count; ++i) record_failure(first + i, e);
      } catch (const std::domain_error& e) {
        for (std::size_t i = 0; i < count; ++i) record_failure(first + i, e);
      } catch (const NumericalError& e) {
        for (std::size_t i = 0; i < count; ++i) record_failure(first + i, e);
      }
    };

    RngStream data_stream = rep_stream.substream("data");
    const Sample data = sample(alt.law, cfg.n, data_stream);
    if (cfg.share_bootstrap) {
      run(0, n_stat, rep_stream.substream("bootstrap"), data);
    } else {
      for (std::size_t i = 0; i < n_stat; ++i)
        run(i, 1, rep_stream.substream("bootstrap:" + cfg.statistics[i].label()), data);
    }
  });

  PowerStudyReport report;
  report.config = cfg;
  report.config_hash = config_hash(cfg);
  for (std::size_t a = 0; a < n_alt; ++a) {
    for (std::size_t s = 0; s < n_stat; ++s) {
      PowerCell cell;
      cell.alternative = cfg.alternatives[a].label;
      cell.statistic = cfg.statistics[s].label();
      for (std::size_t r = 0; r < reps; ++r) {
        const RepResult& rr = results[a * reps + r];
        const signed char d = rr.decision[s];
        if (d < 0) {
          if (cell.failed++ == 0) cell.first_failure = rr.failure[s];
        } else {
          ++cell.completed;
          cell.rejections += static_cast<std::size_t>(d);
        }
      }
      if (cell.completed > 0) {
        const double m = static_cast<double>(cell.completed);
        cell.rate = static_cast<double>(cell.rejections) / m;
        cell.std_error = std::sqrt(cell.rate * (1.0 - cell.rate) / m);
      }
      cell.aborted = static_cast<double>(cell.failed) > kAbortFraction * static_cast<double>(reps);
      report.cells.push_back(std::move(cell));
    }
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

long percent_rounded(std::size_t rejections, std::size_t completed) {
  if (completed == 0) throw std::invalid_argument("percent_rounded: no completed replicates");
  return static_cast<long>((200 * rejections + completed) / (2 * completed));
}

std::string render_table(const PowerStudyReport& report, TableFormat format) {
  const auto& stats = report.config.statistics;
  std::ostringstream o;
  if (format == TableFormat::markdown) {
    o << "| Alt./Test |";
    for (const auto& s : stats) o << ' ' << s.label() << " |";
    o << "\n|---|";
    for (std::size_t i = 0; i < stats.size(); ++i) o << "---:|";
    o << '\n';
    for (const auto& alt : report.config.alternatives) {
      o << "| " << alt.label << " |";
      for (const auto& s : stats) {
        const PowerCell* c = find_cell(report, alt.label, s.label());
        o << ' ';
        if (c && c->completed > 0) o << percent_rounded(c->rejections, c->completed);
        else o << "NA";
        if (c && c->aborted) o << '*';
        o << " |";
      }
      o << '\n';
    }
    return o.str();
  }
  o << "alternative";
  for (const auto& s : stats) {
    const auto l = csv_field(s.label());
    o << ',' << l << ',' << csv_field(s.label() + "_rejections") << ',' << csv_field(s.label() + "_completed");
  }
  o << '\n';
  for (const auto& alt : report.config.alternatives) {
    o << csv_field(alt.label);
    for (const auto& s : stats) {
      const PowerCell* c = find_cell(report, alt.label, s.label());
      if (c && c->completed > 0) o << ',' << shortest(c->rate);
      else o << ",NA";
      o << ',' << (c ? c->rejections : 0) << ',' << (c ? c->completed : 0);
    }
    o << '\n';
  }
  return o.str();
}

} // namespace steinfit
