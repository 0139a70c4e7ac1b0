#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "steinfit/bootstrap.hpp"
#include "steinfit/characterization.hpp"
#include "steinfit/distributions.hpp"
#include "steinfit/estimation.hpp"
#include "steinfit/simulation.hpp"

namespace steinfit {

using Json = nlohmann::ordered_json;

/// Serializes with floats at 17 significant digits; NaN and infinities become
/// null. Object keys keep insertion order.
std::string dump_json(const Json& j, int indent = 2);

/// Config or document errors, one message per offending field.
class SchemaError : public std::invalid_argument {
public:
  explicit SchemaError(std::vector<std::string> problems);
  std::vector<std::string> problems;
};

Json to_json(const Distribution& d);
Json to_json(const FitResult& f);
Json to_json(const TestOutcome& t);
Json to_json(const OperatorKind& k);
Json to_json(const LimitEstimate& e);
Json to_json(const ConditionReport& r);
Json to_json(const PowerStudyConfig& c);
Json to_json(const PowerCell& c);
Json to_json(const PowerStudyReport& r);

/// {"family": "weibull", "params": {"k": 0.5}} or a label string "W(0.5)".
Distribution distribution_from_json(const Json& j);
FitResult fit_from_json(const Json& j);
TestOutcome outcome_from_json(const Json& j);
/// Validates every field and throws SchemaError listing all problems.
PowerStudyConfig config_from_json(const Json& j);

/// Hex fnv1a64 of the canonical (compact) config JSON.
std::string config_hash(const PowerStudyConfig& c);

} // namespace steinfit
