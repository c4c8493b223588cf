#pragma once

#include <string>
#include <vector>

#include "polya/concavity.hpp"
#include "polya/conditional.hpp"
#include "polya/pf_checks.hpp"
#include "polya/theorems.hpp"

namespace polya {

// JSON renderings of the report types. Keys are emitted in sorted order and
// floats use shortest round-trip form, so equal reports serialize to equal
// bytes. Non-finite values (skipped samples) become null.
std::string verdict_json(const MonotonicityReport& rep, int indent = 2);
std::string verdict_json(const DetCheckReport& rep, int indent = 2);
std::string verdict_json(const TiltConditionReport& rep, int indent = 2);
std::string verdict_json(const DerivativeReport& rep, int indent = 2);
std::string verdict_json(const ConvStabilityReport& rep, int indent = 2);
std::string verdict_json(const ConcavityReport& rep, int indent = 2);
std::string verdict_json(const AndreiefResult& res, int indent = 2);

std::string curve_json(const std::vector<CurveSample>& samples, int indent = 2);

// Columns: s, phi, mass, err, skipped. Skipped rows print nan for phi.
std::string curve_csv(const std::vector<CurveSample>& samples);

} // namespace polya
