#pragma once

// Shared between report_json.cpp and the CLI driver; keeps nlohmann types
// out of the public headers.

#include <json.hpp>

#include "polya/concavity.hpp"
#include "polya/conditional.hpp"
#include "polya/pf_checks.hpp"
#include "polya/theorems.hpp"

namespace polya::detail {

nlohmann::json to_json(const CurveSample& c);
nlohmann::json to_json(const std::vector<CurveSample>& samples);
nlohmann::json to_json(const MonotonicityReport& rep);
nlohmann::json to_json(const DetCheckReport& rep);
nlohmann::json to_json(const TiltConditionReport& rep);
nlohmann::json to_json(const DerivativeReport& rep);
nlohmann::json to_json(const ConvStabilityReport& rep);
nlohmann::json to_json(const ConcavityReport& rep);
nlohmann::json to_json(const AndreiefResult& res);

// null when the value is not finite, so NaN never reaches the JSON text.
nlohmann::json finite_or_null(double v);

} // namespace polya::detail
