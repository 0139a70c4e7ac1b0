#include "steinfit/json_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace steinfit {
namespace {

void emit(const Json& j, int indent, int depth, std::string& out) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += pretty ? ": " : ":";
        emit(value, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        emit(value, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default: out += j.dump();
  }
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::uint64_t parse_hex64(const Json& j, const char* field) {
  if (!j.is_string()) throw SchemaError({std::string(field) + ": expected a hex string"});
  const auto s = j.get<std::string>();
  std::uint64_t v = 0;
  if (s.empty() || std::sscanf(s.c_str(), "%" SCNx64, &v) != 1)
    throw SchemaError({std::string(field) + ": expected a hex string"});
  return v;
}

double number_or_nan(const Json& j) {
  return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError({std::string("missing field '") + key + "'"});
  return j.at(key);
}

std::optional<Family> family_from(const Json& j) {
  return j.is_string() ? parse_family(j.get<std::string>()) : std::nullopt;
}

std::string family_list() {
  std::string s;
  for (auto name : family_names()) {
    if (!s.empty()) s += ", ";
    s += name;
  }
  return s;
}

Json limit_json(const LimitEstimate& e) { return to_json(e); }

} // namespace

SchemaError::SchemaError(std::vector<std::string> p)
    : std::invalid_argument([&] {
        std::string msg;
        for (const auto& line : p) msg += (msg.empty() ? "" : "; ") + line;
        return msg;
      }()),
      problems(std::move(p)) {}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  return out;
}

Json to_json(const Distribution& d) {
  Json params = Json::object();
  for (auto name : parameter_names(d.family())) params[std::string(name)] = d.param(name);
  return {{"family", family_name(d.family())}, {"label", d.label()}, {"params", params}};
}

Json to_json(const FitResult& f) {
  Json params = Json::object();
  for (const auto& [k, v] : f.params) params[k] = finite_or_null(v);
  return {{"family", family_name(f.family)}, {"params", params},     {"converged", f.converged},
          {"loglik", finite_or_null(f.loglik)}, {"iterations", f.iterations}, {"trace", f.trace}};
}

Json to_json(const TestOutcome& t) {
  Json j = {{"statistic", t.statistic},
            {"family", family_name(t.family)},
            {"statistic_value", finite_or_null(t.statistic_value)},
            {"critical_value", finite_or_null(t.critical_value)},
            {"p_value", t.p_value},
            {"reject", t.reject},
            {"alpha", t.alpha},
            {"B", t.B},
            {"critical_rank", t.critical_rank},
            {"failed_replicates", t.failed_replicates},
            {"retried_replicates", t.retried_replicates},
            {"fit", to_json(t.fit)},
            {"rng", {{"seed", t.seed}, {"stream_id", hex64(t.stream_id)}, {"fingerprint", hex64(t.rng_fingerprint)}}}};
  if (!t.replicates.empty()) j["replicates"] = t.replicates;
  if (!t.replicate_fits.empty()) {
    Json fits = Json::array();
    for (const auto& f : t.replicate_fits) fits.push_back(to_json(f));
    j["replicate_fits"] = fits;
  }
  return j;
}

Json to_json(const OperatorKind& k) {
  auto opt = [](const std::optional<double>& v) { return v ? finite_or_null(*v) : Json(nullptr); };
  return {{"variant", variant_name(k.variant)},
          {"left", opt(k.left)},
          {"right", opt(k.right)},
          {"boundary_density_limit", opt(k.boundary_density_limit)}};
}

Json to_json(const LimitEstimate& e) {
  Json seq = Json::array();
  for (double v : e.sequence) seq.push_back(finite_or_null(v));
  return {{"applicable", e.applicable}, {"exists", e.exists}, {"value", finite_or_null(e.value)}, {"sequence", seq}};
}

Json to_json(const ConditionReport& r) {
  return {{"distribution", r.distribution},
          {"supported", r.supported},
          {"operator", r.operator_kind ? to_json(*r.operator_kind) : Json(nullptr)},
          {"grid_size", r.grid_size},
          {"grid", r.grid},
          {"C2", {{"sup_kappa", finite_or_null(r.c2_sup_kappa)}, {"argmax", finite_or_null(r.c2_argmax)}}},
          {"C3", {{"weight", r.c3_weight}, {"integral", finite_or_null(r.c3_integral)}, {"divergent", r.c3_divergent}}},
          {"C4", limit_json(r.c4)},
          {"C5", limit_json(r.c5)},
          {"left_density", limit_json(r.left_density)},
          {"right_density", limit_json(r.right_density)},
          {"verdicts",
           {{"C2", verdict_name(r.c2)}, {"C3", verdict_name(r.c3)}, {"C4", verdict_name(r.c4_verdict)}, {"C5", verdict_name(r.c5_verdict)}}},
          {"passes", r.passes()},
          {"notes", r.notes}};
}

Json to_json(const PowerStudyConfig& c) {
  Json stats = Json::array();
  for (const auto& s : c.statistics) stats.push_back(s.label());
  Json alts = Json::array();
  for (const auto& a : c.alternatives) {
    Json d = to_json(a.law);
    d["label"] = a.label;
    alts.push_back(d);
  }
  return {{"n", c.n},
          {"alpha", c.alpha},
          {"mc_reps", c.mc_reps},
          {"bootstrap_B", c.bootstrap_B},
          {"seed", c.seed},
          {"family", family_name(c.family)},
          {"share_bootstrap", c.share_bootstrap},
          {"statistics", stats},
          {"alternatives", alts}};
}

Json to_json(const PowerCell& c) {
  return {{"alternative", c.alternative}, {"statistic", c.statistic},   {"rejections", c.rejections},
          {"completed", c.completed},     {"failed", c.failed},         {"rate", c.rate},
          {"std_error", c.std_error},     {"aborted", c.aborted},       {"first_failure", c.first_failure}};
}

Json to_json(const PowerStudyReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) cells.push_back(to_json(c));
  return {{"config", to_json(r.config)},
          {"config_hash", r.config_hash},
          {"cells", cells},
          {"wall_time_seconds", r.wall_time_seconds}};
}

Distribution distribution_from_json(const Json& j) {
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    if (auto d = Distribution::parse_label(text)) return *d;
    throw SchemaError({"unknown distribution label '" + text + "'"});
  }
  if (!j.is_object()) throw SchemaError({"distribution: expected a label string or an object"});
  const auto fam = family_from(require(j, "family"));
  if (!fam) throw SchemaError({"distribution: unknown family; valid families: " + family_list()});
  std::map<std::string, double, std::less<>> params;
  if (j.contains("params")) {
    const auto& p = j.at("params");
    if (!p.is_object()) throw SchemaError({"distribution: params must be an object"});
    for (const auto& [k, v] : p.items()) {
      if (!v.is_number()) throw SchemaError({"distribution: parameter '" + k + "' must be a number"});
      params[k] = v.get<double>();
    }
  }
  try {
    return Distribution(*fam, params);
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError({std::string("distribution: ") + e.what()});
  }
}

FitResult fit_from_json(const Json& j) {
  FitResult f;
  const auto fam = family_from(require(j, "family"));
  if (!fam) throw SchemaError({"fit: unknown family"});
  f.family = *fam;
  for (const auto& [k, v] : require(j, "params").items()) f.params[k] = number_or_nan(v);
  f.converged = require(j, "converged").get<bool>();
  f.loglik = number_or_nan(require(j, "loglik"));
  f.iterations = require(j, "iterations").get<std::size_t>();
  f.trace = require(j, "trace").get<std::string>();
  return f;
}

TestOutcome outcome_from_json(const Json& j) {
  try {
    TestOutcome t;
    t.statistic = require(j, "statistic").get<std::string>();
    const auto fam = family_from(require(j, "family"));
    if (!fam) throw SchemaError({"outcome: unknown family"});
    t.family = *fam;
    t.statistic_value = number_or_nan(require(j, "statistic_value"));
    t.critical_value = number_or_nan(require(j, "critical_value"));
    t.p_value = require(j, "p_value").get<double>();
    t.reject = require(j, "reject").get<bool>();
    t.alpha = require(j, "alpha").get<double>();
    t.B = require(j, "B").get<std::size_t>();
    t.critical_rank = require(j, "critical_rank").get<std::size_t>();
    t.failed_replicates = require(j, "failed_replicates").get<std::size_t>();
    t.retried_replicates = require(j, "retried_replicates").get<std::size_t>();
    t.fit = fit_from_json(require(j, "fit"));
    const auto& rng = require(j, "rng");
    t.seed = require(rng, "seed").get<std::uint64_t>();
    t.stream_id = parse_hex64(require(rng, "stream_id"), "rng.stream_id");
    t.rng_fingerprint = parse_hex64(require(rng, "fingerprint"), "rng.fingerprint");
    if (j.contains("replicates")) t.replicates = j.at("replicates").get<std::vector<double>>();
    if (j.contains("replicate_fits"))
      for (const auto& f : j.at("replicate_fits")) t.replicate_fits.push_back(fit_from_json(f));
    return t;
  } catch (const Json::exception& e) {
    throw SchemaError({std::string("outcome: ") + e.what()});
  }
}

PowerStudyConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError({"config: expected a JSON object"});
  PowerStudyConfig c;
  std::vector<std::string> problems;

  static const std::vector<std::string> known = {"n", "alpha", "mc_reps", "bootstrap_B", "seed", "statistics",
                                                 "alternatives", "family", "share_bootstrap", "threads"};
  static const std::vector<std::string> required = {"n", "alpha", "mc_reps", "bootstrap_B", "seed",
                                                    "statistics", "alternatives"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) problems.push_back("unknown field '" + key + "'");
  for (const auto& key : required)
    if (!j.contains(key)) problems.push_back("missing field '" + key + "'");

  auto unsigned_field = [&](const char* key, std::uint64_t min, auto& target) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      problems.push_back(std::string(key) + ": expected a non-negative integer");
      return;
    }
    const auto x = v.get<std::uint64_t>();
    if (x < min) {
      problems.push_back(std::string(key) + ": must be >= " + std::to_string(min));
      return;
    }
    target = static_cast<std::remove_reference_t<decltype(target)>>(x);
  };
  unsigned_field("n", 2, c.n);
  unsigned_field("mc_reps", 1, c.mc_reps);
  unsigned_field("bootstrap_B", 1, c.bootstrap_B);
  unsigned_field("seed", 0, c.seed);
  unsigned_field("threads", 0, c.threads);

  if (j.contains("alpha")) {
    const auto& v = j.at("alpha");
    if (!v.is_number() || !(v.get<double>() > 0.0 && v.get<double>() < 1.0))
      problems.push_back("alpha: must be a number in (0, 1)");
    else
      c.alpha = v.get<double>();
  }
  if (j.contains("family")) {
    const auto fam = family_from(j.at("family"));
    if (!fam || !is_hypothesis_family(*fam))
      problems.push_back("family: expected one of burr, gamma, normal");
    else
      c.family = *fam;
  }
  if (j.contains("share_bootstrap")) {
    if (!j.at("share_bootstrap").is_boolean()) problems.push_back("share_bootstrap: expected true or false");
    else c.share_bootstrap = j.at("share_bootstrap").get<bool>();
  }
  if (j.contains("statistics")) {
    const auto& v = j.at("statistics");
    if (!v.is_array() || v.empty()) {
      problems.push_back("statistics: expected a non-empty array of statistic tags");
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto parsed = v[i].is_string() ? StatisticId::parse(v[i].get<std::string>()) : std::nullopt;
        if (parsed) {
          c.statistics.push_back(*parsed);
          continue;
        }
        std::string valid;
        for (const auto& f : StatisticId::accepted_forms()) valid += (valid.empty() ? "" : ", ") + f;
        problems.push_back("statistics[" + std::to_string(i) + "]: unknown statistic " +
                           (v[i].is_string() ? "'" + v[i].get<std::string>() + "'" : v[i].dump()) +
                           "; valid tags: " + valid);
      }
    }
  }
  if (j.contains("alternatives")) {
    const auto& v = j.at("alternatives");
    if (!v.is_array()) {
      problems.push_back("alternatives: expected an array");
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) {
        try {
          Distribution d = distribution_from_json(v[i]);
          if (v[i].is_object() && v[i].contains("label")) {
            if (!v[i].at("label").is_string()) throw SchemaError({"label must be a string"});
            c.alternatives.emplace_back(v[i].at("label").get<std::string>(), d);
          } else {
            c.alternatives.emplace_back(d);
          }
        } catch (const SchemaError& e) {
          for (const auto& p : e.problems) problems.push_back("alternatives[" + std::to_string(i) + "]: " + p);
        }
      }
    }
  }
  if (problems.empty()) {
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) throw SchemaError(std::move(problems));
  return c;
}

std::string config_hash(const PowerStudyConfig& c) { return hex64(fnv1a64(dump_json(to_json(c), -1))); }

} // namespace steinfit
