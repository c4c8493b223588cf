#include "polya/report_json.hpp"

#include <charconv>
#include <cmath>

#include "report_json_internal.hpp"

namespace polya {

namespace detail {

nlohmann::json finite_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

nlohmann::json to_json(const CurveSample& c) {
    return {{"s", c.s},
            {"value", finite_or_null(c.phi_value)},
            {"mass", c.denominator_mass},
            {"err", finite_or_null(c.err_estimate)},
            {"skipped", c.skipped}};
}

nlohmann::json to_json(const std::vector<CurveSample>& samples) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : samples) arr.push_back(to_json(c));
    return arr;
}

namespace {

nlohmann::json grid_echo(const std::vector<CurveSample>& samples) {
    if (samples.empty()) {
        return {{"lo", nullptr}, {"hi", nullptr}, {"count", 0}};
    }
    return {{"lo", samples.front().s},
            {"hi", samples.back().s},
            {"count", samples.size()}};
}

} // namespace

nlohmann::json to_json(const MonotonicityReport& rep) {
    nlohmann::json j;
    j["theorem"] = rep.theorem;
    j["transform_name"] = rep.transform_name;
    j["passed"] = rep.passed;
    j["max_violation"] = finite_or_null(rep.max_violation);
    j["tol_used"] = rep.tol_used;
    if (rep.witness) {
        j["witness"] = {{"s_lo", rep.witness->s_lo},
                        {"s_hi", rep.witness->s_hi},
                        {"drop", rep.witness->drop}};
    } else {
        j["witness"] = nullptr;
    }
    j["hypotheses"] = rep.hypotheses;
    j["grid"] = grid_echo(rep.samples);
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& [lo, hi] : rep.segments) segs.push_back({lo, hi});
    j["segments"] = segs;
    j["samples"] = to_json(rep.samples);
    j["seed"] = rep.seed;
    return j;
}

nlohmann::json to_json(const DetCheckReport& rep) {
    nlohmann::json j;
    j["check"] = rep.check;
    j["n"] = rep.n;
    j["tuples"] = rep.tuples_checked;
    j["degenerate"] = rep.degenerate;
    j["min_normalized_det"] = finite_or_null(rep.min_normalized_det);
    j["passed"] = rep.passed;
    j["tolerance"] = rep.tolerance;
    if (rep.counterexample) {
        j["counterexample"] = {{"a", rep.counterexample->a},
                               {"b", rep.counterexample->b},
                               {"normalized_det", rep.counterexample->normalized_det}};
    } else {
        j["counterexample"] = nullptr;
    }
    j["seed"] = rep.seed;
    return j;
}

nlohmann::json to_json(const TiltConditionReport& rep) {
    nlohmann::json j;
    j["mode"] = rep.mode;
    j["condition1_ok"] = rep.condition1_ok;
    j["condition2_ok"] = rep.condition2_ok;
    if (rep.worst_pair) {
        j["worst_pair"] = {{"condition", rep.worst_pair->condition},
                           {"moving_lo", rep.worst_pair->moving_lo},
                           {"moving_hi", rep.worst_pair->moving_hi},
                           {"fixed", rep.worst_pair->fixed},
                           {"margin", finite_or_null(rep.worst_pair->margin)}};
    } else {
        j["worst_pair"] = nullptr;
    }
    return j;
}

nlohmann::json to_json(const DerivativeReport& rep) {
    nlohmann::json j;
    j["theorem"] = rep.theorem;
    j["passed"] = rep.passed;
    j["min_margin"] = finite_or_null(rep.min_margin);
    j["witness_s"] = rep.witness_s;
    j["evaluated"] = rep.evaluated;
    j["skipped"] = rep.skipped;
    j["fd_step"] = rep.fd_step;
    j["tol_used"] = rep.tol_used;
    j["hypotheses"] = rep.hypotheses;
    return j;
}

nlohmann::json to_json(const ConvStabilityReport& rep) {
    nlohmann::json j;
    j["theorem"] = rep.theorem;
    j["passed"] = rep.passed;
    j["pf"] = to_json(rep.pf);
    j["crosscheck_max_rel_err"] = finite_or_null(rep.crosscheck_max_rel_err);
    j["crosscheck_ok"] = rep.crosscheck_ok;
    j["exterior_mass"] = rep.exterior_mass;
    j["tabulation_slack"] = rep.tabulation_slack;
    j["hypotheses"] = rep.hypotheses;
    j["seed"] = rep.seed;
    return j;
}

nlohmann::json to_json(const ConcavityReport& rep) {
    nlohmann::json j;
    j["passed"] = rep.passed;
    j["worst_margin"] = finite_or_null(rep.worst_margin);
    j["witness"] = {{"lo", rep.witness_lo}, {"hi", rep.witness_hi}};
    j["checked"] = rep.checked;
    j["tol"] = rep.tol;
    return j;
}

nlohmann::json to_json(const AndreiefResult& res) {
    nlohmann::json j;
    j["lhs"] = finite_or_null(res.lhs);
    j["rhs"] = finite_or_null(res.rhs);
    j["rel_err"] = finite_or_null(res.rel_err);
    j["lhs_converged"] = res.lhs_converged;
    j["rhs_converged"] = res.rhs_converged;
    return j;
}

} // namespace detail

namespace {

std::string shortest(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

std::string verdict_json(const MonotonicityReport& rep, int indent) {
    return detail::to_json(rep).dump(indent);
}
std::string verdict_json(const DetCheckReport& rep, int indent) {
    return detail::to_json(rep).dump(indent);
}
std::string verdict_json(const TiltConditionReport& rep, int indent) {
    return detail::to_json(rep).dump(indent);
}
std::string verdict_json(const DerivativeReport& rep, int indent) {
    return detail::to_json(rep).dump(indent);
}
std::string verdict_json(const ConvStabilityReport& rep, int indent) {
    return detail::to_json(rep).dump(indent);
}
std::string verdict_json(const ConcavityReport& rep, int indent) {
    return detail::to_json(rep).dump(indent);
}
std::string verdict_json(const AndreiefResult& res, int indent) {
    return detail::to_json(res).dump(indent);
}

std::string curve_json(const std::vector<CurveSample>& samples, int indent) {
    return detail::to_json(samples).dump(indent);
}

std::string curve_csv(const std::vector<CurveSample>& samples) {
    std::string out = "s,phi,mass,err,skipped\n";
    for (const auto& c : samples) {
        out += shortest(c.s);
        out += ',';
        out += shortest(c.phi_value);
        out += ',';
        out += shortest(c.denominator_mass);
        out += ',';
        out += shortest(c.err_estimate);
        out += ',';
        out += c.skipped ? "true" : "false";
        out += '\n';
    }
    return out;
}

} // namespace polya
