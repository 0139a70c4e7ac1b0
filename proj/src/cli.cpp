#include "steinfit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "steinfit/bootstrap.hpp"
#include "steinfit/characterization.hpp"
#include "steinfit/json_io.hpp"
#include "steinfit/simulation.hpp"

namespace steinfit {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return v;
}

unsigned resolve_threads(unsigned requested) {
  return requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::invalid_argument("write failed for '" + path.string() + "'");
}

StatisticId resolve_statistic(const std::string& stat, const std::optional<double>& a) {
  std::string lower = stat;
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lower == "b" || lower == "g") {
    if (!a) throw std::invalid_argument("--stat " + stat + " needs --a");
    if (!(*a > 0.0) || !std::isfinite(*a)) throw std::invalid_argument("--a must be a positive number");
    return lower == "b" ? StatisticId::burr_B(*a) : StatisticId::generic_L2(*a);
  }
  const auto id = StatisticId::parse(stat);
  if (!id) {
    std::string valid = "B, G";
    for (const auto& f : StatisticId::accepted_forms()) valid += ", " + f;
    throw std::invalid_argument("unknown statistic '" + stat + "'; valid: " + valid);
  }
  if (a && (!id->uses_weight() || id->a != *a))
    throw std::invalid_argument("--a conflicts with --stat " + stat);
  return *id;
}

Family resolve_family(const std::string& name) {
  const auto f = parse_family(name);
  if (!f) {
    std::string valid;
    for (auto n : family_names()) valid += (valid.empty() ? "" : ", ") + std::string(n);
    throw std::invalid_argument("unknown family '" + name + "'; valid: " + valid);
  }
  return *f;
}

struct TestArgs {
  std::string data;
  std::string family = "burr";
  std::string stat = "B";
  std::optional<double> a;
  std::size_t B = 100;
  double alpha = 0.1;
  std::uint64_t seed = 1;
  std::string json_out;
  unsigned threads = 0;
  std::string column;
  bool keep_replicates = false;
};

int cmd_test(const TestArgs& args, std::ostream& out) {
  const Family family = resolve_family(args.family);
  if (!is_hypothesis_family(family))
    throw std::invalid_argument("--family must be one of burr, gamma, normal");
  const StatisticId stat = resolve_statistic(args.stat, args.a);
  std::ifstream in(args.data, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open data file '" + args.data + "'");
  const Sample s = read_sample(in, args.column.empty() ? std::nullopt : std::optional(args.column));
  if (s.size() < 2) throw std::invalid_argument("data file holds " + std::to_string(s.size()) + " value(s); need at least 2");

  BootstrapOptions opt;
  opt.B = args.B;
  opt.alpha = args.alpha;
  opt.threads = resolve_threads(args.threads);
  opt.keep_replicates = args.keep_replicates;
  const TestOutcome t = bootstrap_test(s, family, stat, opt, RngStream(args.seed, fnv1a64("test")));
  const std::string text = dump_json(to_json(t)) + "\n";
  if (args.json_out.empty()) {
    out << text;
  } else {
    write_file(args.json_out, text);
    out << t.statistic << ": statistic " << dump_json(Json(t.statistic_value)) << ", critical value "
        << dump_json(Json(t.critical_value)) << ", p-value " << dump_json(Json(t.p_value))
        << ", reject " << (t.reject ? "true" : "false") << "\n";
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string config;
  std::string out_dir;
  std::optional<unsigned> threads;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  Json j;
  try {
    j = Json::parse(read_file(args.config));
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
  }
  PowerStudyConfig cfg = config_from_json(j);
  cfg.threads = resolve_threads(args.threads.value_or(j.contains("threads") ? cfg.threads : 0));
  const PowerStudyReport report = run_power_study(cfg);

  const std::filesystem::path dir(args.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::invalid_argument("cannot create '" + dir.string() + "': " + ec.message());
  const std::string md = render_table(report, TableFormat::markdown);
  write_file(dir / "power.csv", render_table(report, TableFormat::csv));
  write_file(dir / "power.md", md);
  write_file(dir / "report.json", dump_json(to_json(report)) + "\n");
  out << "config_hash " << report.config_hash << "\n" << md;
  for (const auto& c : report.cells)
    if (c.aborted)
      out << "aborted " << c.alternative << " / " << c.statistic << ": " << c.failed << " failures; first: "
          << c.first_failure << "\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string family;
  std::string params;
  std::size_t grid = 400;
  std::size_t residual_points = 50;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  const Family family = resolve_family(args.family);
  std::map<std::string, double, std::less<>> params;
  if (!trim(args.params).empty()) {
    for (auto item : split(args.params, ',')) {
      const auto eq = item.find('=');
      const auto value = eq == std::string_view::npos ? std::nullopt : parse_real(item.substr(eq + 1));
      if (!value) throw std::invalid_argument("--params: expected name=value, got '" + std::string(item) + "'");
      params[std::string(trim(item.substr(0, eq)))] = *value;
    }
  }
  const Distribution d(family, params);
  const ConditionReport report = check_conditions(d, args.grid);

  Json residual = {{"grid", "quantiles 0.01..0.99"}, {"points", args.residual_points}};
  if (const auto op = default_operator(d)) {
    try {
      residual["value"] = fixed_point_residual(d, *op, quantile_grid(d, args.residual_points));
      residual["error"] = nullptr;
    } catch (const NumericalError& e) {
      residual["value"] = nullptr;
      residual["error"] = e.what();
    }
  } else {
    residual["value"] = nullptr;
    residual["error"] = "no characterization operator for this law";
  }
  const Json j = {{"distribution", to_json(d)}, {"conditions", to_json(report)}, {"fixed_point_residual", residual}};
  out << dump_json(j) << "\n";
  return kExitOk;
}

} // namespace

Sample read_sample(std::istream& in, const std::optional<std::string>& column) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> col_index;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (column && !col_index) {
      const auto names = split(t, ',');
      for (std::size_t i = 0; i < names.size(); ++i) {
        auto name = names[i];
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"') name = name.substr(1, name.size() - 2);
        if (name == *column) col_index = i;
      }
      if (!col_index) throw std::invalid_argument("line " + std::to_string(lineno) + ": no column named '" + *column + "'");
      continue;
    }
    std::string_view field = t;
    if (col_index) {
      const auto fields = split(t, ',');
      if (*col_index >= fields.size())
        throw std::invalid_argument("line " + std::to_string(lineno) + ": missing column '" + *column + "'");
      field = fields[*col_index];
    }
    const auto v = parse_real(field);
    if (!v) throw std::invalid_argument("line " + std::to_string(lineno) + ": not a number: '" + std::string(field) + "'");
    if (!std::isfinite(*v)) throw std::invalid_argument("line " + std::to_string(lineno) + ": value is not finite");
    values.push_back(*v);
  }
  if (in.bad()) throw std::invalid_argument("read error");
  if (column && !col_index) throw std::invalid_argument("no header row with column '" + *column + "'");
  return Sample(std::move(values));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Goodness-of-fit tests built on Stein fixed-point characterizations", "steinfit");
  app.require_subcommand(1);

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Parametric bootstrap goodness-of-fit test of a data file");
  test->add_option("--data", ta.data, "Newline-delimited reals, or CSV with --column")->required();
  test->add_option("--family", ta.family, "Hypothesized family: burr, gamma or normal")->capture_default_str();
  test->add_option("--stat", ta.stat, "B, G, B_<a>, G_<a>, KS, KS_sqrt, CM, AD or WA")->capture_default_str();
  test->add_option("--a", ta.a, "Weight parameter for --stat B or G");
  test->add_option("--B", ta.B, "Bootstrap replicates")->capture_default_str()->check(CLI::PositiveNumber);
  test->add_option("--alpha", ta.alpha, "Level")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  test->add_option("--seed", ta.seed, "Master seed")->capture_default_str();
  test->add_option("--json", ta.json_out, "Write the outcome JSON to this file instead of stdout");
  test->add_option("--threads", ta.threads, "Worker threads (0 = all cores)")->capture_default_str();
  test->add_option("--column", ta.column, "Column name when the data file is CSV with a header");
  test->add_flag("--keep-replicates", ta.keep_replicates, "Include sorted bootstrap statistics in the JSON");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo power study from a JSON config");
  simulate->add_option("--config", sa.config, "Config JSON file")->required();
  simulate->add_option("--out", sa.out_dir, "Output directory for power.csv, power.md and report.json")->required();
  simulate->add_option("--threads", sa.threads, "Worker threads (0 = all cores)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check regularity conditions and the fixed-point identity of a law");
  verify->add_option("--family", va.family, "Catalog family")->required();
  verify->add_option("--params", va.params, "Parameters as name=value pairs, e.g. k=1,c=1");
  verify->add_option("--grid", va.grid, "Condition grid size (>= 100)")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (test->parsed()) return cmd_test(ta, out);
    if (simulate->parsed()) return cmd_simulate(sa, out);
    return cmd_verify(va, out);
  } catch (const SchemaError& e) {
    for (const auto& p : e.problems) err << "error: " << p << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

} // namespace steinfit
