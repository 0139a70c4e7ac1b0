#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "steinfit/distributions.hpp"
#include "steinfit/gof.hpp"

namespace steinfit {

struct AlternativeSpec {
  std::string label;  ///< stream key and table row name; unique within a config
  Distribution law;

  explicit AlternativeSpec(Distribution d) : label(d.label()), law(std::move(d)) {}
  AlternativeSpec(std::string l, Distribution d) : label(std::move(l)), law(std::move(d)) {}
};

struct PowerStudyConfig {
  std::size_t n = 100;
  double alpha = 0.1;
  std::size_t mc_reps = 1000;
  std::size_t bootstrap_B = 100;
  std::uint64_t seed = 1;
  std::vector<StatisticId> statistics;
  std::vector<AlternativeSpec> alternatives;
  Family family = Family::burr_xii;  ///< hypothesized family
  bool share_bootstrap = true;       ///< all statistics rank the same bootstrap draws
  unsigned threads = 1;              ///< 0 = all hardware threads; never affects results

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct PowerCell {
  std::string alternative;
  std::string statistic;
  std::size_t rejections = 0;
  std::size_t completed = 0;  ///< replicates with a decision
  std::size_t failed = 0;     ///< replicates whose fit or bootstrap failed
  double rate = 0.0;          ///< rejections / completed
  double std_error = 0.0;     ///< sqrt(rate (1 - rate) / completed)
  bool aborted = false;       ///< failed > 5% of mc_reps; counts are partial
  std::string first_failure;
};

struct PowerStudyReport {
  PowerStudyConfig config;
  std::string config_hash;          ///< fnv1a64 of the canonical config JSON, hex
  std::vector<PowerCell> cells;     ///< alternative-major, in config order
  double wall_time_seconds = 0.0;   ///< excluded from determinism checks

  [[nodiscard]] const PowerCell& cell(std::string_view alternative, std::string_view statistic) const;
};

/// Replicate r of an alternative draws its data from
/// RngStream(seed, fnv1a64(label)).substream(r).substream("data") and its
/// bootstrap from the sibling sub-stream "bootstrap" (or "bootstrap:<stat>"
/// when sharing is off), so cells do not depend on list order or threads.
PowerStudyReport run_power_study(const PowerStudyConfig& cfg);

enum class TableFormat { csv, markdown };

/// Rows are alternatives, columns statistics. Markdown cells hold integer
/// percentages rounded half away from zero ("NA" without completed
/// replicates, "*" marks aborted cells); CSV holds raw rates with counts.
std::string render_table(const PowerStudyReport& report, TableFormat format);

/// Percentage of rejections rounded half away from zero, in exact integer
/// arithmetic.
long percent_rounded(std::size_t rejections, std::size_t completed);

} // namespace steinfit
