#include <doctest.h>

#include <cmath>
#include <limits>

#include "steinfit/json_io.hpp"

using namespace steinfit;

TEST_CASE("floats use 17 significant digits, non-finite become null") {
  Json j = {{"a", 0.1}, {"b", std::numeric_limits<double>::quiet_NaN()}, {"c", -kInf}, {"d", 3}};
  CHECK(dump_json(j, -1) == R"({"a":0.10000000000000001,"b":null,"c":null,"d":3})");
  Json nested = {{"x", Json::array({1.5, 2.0})}};
  CHECK(dump_json(nested, -1) == R"({"x":[1.5,2]})");
}

TEST_CASE("distribution from json") {
  CHECK(distribution_from_json(Json("W(0.5)")) == dist::weibull(0.5));
  Json obj = {{"family", "burr"}, {"params", {{"k", 2.0}, {"c", 1.0}}}};
  CHECK(distribution_from_json(obj) == dist::burr(2, 1));
  CHECK_THROWS_AS(distribution_from_json(Json("Cauchy")), SchemaError);
  CHECK_THROWS_AS(distribution_from_json(Json({{"family", "weibull"}})), SchemaError);
}

TEST_CASE("test outcome round trip") {
  TestOutcome t;
  t.statistic = "B_3";
  t.statistic_value = 0.123456789012345678;
  t.critical_value = 1.0 / 3.0;
  t.p_value = 12.0 / 101.0;
  t.reject = false;
  t.fit.family = Family::burr_xii;
  t.fit.params = {{"k", 1.1}, {"c", 0.9}, {"sigma", 1.0}};
  t.fit.converged = true;
  t.fit.loglik = -123.456;
  t.fit.iterations = 40;
  t.fit.trace = "grid";
  t.B = 100;
  t.alpha = 0.1;
  t.critical_rank = 90;
  t.seed = 42;
  t.stream_id = 7;
  t.rng_fingerprint = 0xfedcba9876543210ULL;
  const auto text = dump_json(to_json(t));
  const auto back = outcome_from_json(Json::parse(text));
  CHECK(dump_json(to_json(back)) == text);
  CHECK(back.statistic_value == t.statistic_value);
  CHECK(back.rng_fingerprint == t.rng_fingerprint);
  CHECK(back.fit.params == t.fit.params);
}

TEST_CASE("config parsing") {
  auto j = Json::parse(R"J({"n": 50, "alpha": 0.1, "mc_reps": 10, "bootstrap_B": 20, "seed": 3,
      "statistics": ["B_0.25", "KS", "AD"],
      "alternatives": ["W(0.5)", {"family": "exponential", "params": {"lambda": 1}, "label": "Exp"}]})J");
  auto cfg = config_from_json(j);
  CHECK(cfg.n == 50);
  CHECK(cfg.statistics.size() == 3);
  CHECK(cfg.alternatives[1].label == "Exp");
  CHECK(cfg.share_bootstrap);
  // Canonical form round-trips to the same hash.
  CHECK(config_hash(config_from_json(to_json(cfg))) == config_hash(cfg));
}

TEST_CASE("config errors are reported field by field") {
  auto j = Json::parse(R"J({"n": 50, "alpha": 2, "mc_reps": 0, "bootstrap_B": 20, "seed": 3,
      "statistics": ["B_0.25", "chi2"], "alternatives": [], "colour": 1})J");
  try {
    config_from_json(j);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    std::string all;
    for (const auto& p : e.problems) all += p + "\n";
    CHECK(all.find("alpha") != std::string::npos);
    CHECK(all.find("mc_reps") != std::string::npos);
    CHECK(all.find("chi2") != std::string::npos);
    CHECK(all.find("KS") != std::string::npos);  // lists valid tags
    CHECK(all.find("colour") != std::string::npos);
  }
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"n": 50})")), SchemaError);
}

TEST_CASE("condition report serializes") {
  auto r = check_conditions(dist::burr(1, 1), 100);
  auto j = to_json(r);
  CHECK(j["verdicts"]["C2"] == "pass");
  CHECK(j["verdicts"]["C5"] == "not_applicable");
  CHECK(j["operator"]["variant"] == "positive_axis_min");
  CHECK(j["supported"] == true);
}
