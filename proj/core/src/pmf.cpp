#include "polya/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace polya {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok)
        throw std::invalid_argument(msg);
}

} // namespace

double Pmf::mass() const {
    double s = 0.0;
    for (double w : weights)
        s += w;
    return s;
}

long Pmf::mode() const {
    const auto it = std::max_element(weights.begin(), weights.end());
    return k_min + static_cast<long>(it - weights.begin());
}

Pmf make_poisson(double lambda, double truncation_tol) {
    require(lambda > 0.0, "poisson: lambda must be positive");
    require(truncation_tol > 0.0 && truncation_tol < 1.0, "poisson: bad truncation_tol");

    // Walk the recurrence w_{k+1} = w_k * lambda / (k+1) far enough to clear
    // the peak, then trim both ends against tol * peak.
    std::vector<double> all;
    double w = std::exp(-lambda);
    double peak = w;
    const long hard_cap = static_cast<long>(lambda + 60.0 * std::sqrt(lambda) + 200.0);
    for (long k = 0;; ++k) {
        all.push_back(w);
        peak = std::max(peak, w);
        if ((k > static_cast<long>(lambda) && w < truncation_tol * peak) || k > hard_cap)
            break;
        w *= lambda / static_cast<double>(k + 1);
    }
    const double cut = truncation_tol * peak;
    size_t first = 0;
    while (first + 1 < all.size() && all[first] < cut)
        ++first;
    size_t last = all.size() - 1;
    while (last > first && all[last] < cut)
        --last;

    Pmf p;
    p.k_min = static_cast<long>(first);
    p.weights.assign(all.begin() + static_cast<long>(first), all.begin() + static_cast<long>(last) + 1);
    p.truncated_mass = std::max(0.0, 1.0 - p.mass());
    p.family = "poisson";
    p.params = {{"lambda", lambda}};
    return p;
}

Pmf make_binomial(int m, double p) {
    require(m >= 1, "binomial: m must be at least 1");
    require(p > 0.0 && p < 1.0, "binomial: p must lie in (0,1)");

    Pmf out;
    out.k_min = 0;
    out.weights.resize(static_cast<size_t>(m) + 1);
    // w_{k+1} = w_k * (m-k)/(k+1) * p/(1-p); exact in binary for p = 0.5.
    double w = std::pow(1.0 - p, m);
    const double odds = p / (1.0 - p);
    for (int k = 0; k <= m; ++k) {
        out.weights[static_cast<size_t>(k)] = w;
        w *= odds * static_cast<double>(m - k) / static_cast<double>(k + 1);
    }
    out.truncated_mass = 0.0;
    out.family = "binomial";
    out.params = {{"m", static_cast<double>(m)}, {"p", p}};
    return out;
}

Pmf make_geometric(double p, double truncation_tol) {
    require(p > 0.0 && p < 1.0, "geometric: p must lie in (0,1)");
    require(truncation_tol > 0.0 && truncation_tol < 1.0, "geometric: bad truncation_tol");

    Pmf out;
    out.k_min = 0;
    const double q = 1.0 - p;
    double w = p; // mode is k = 0
    const double cut = truncation_tol * p;
    // The length cap only matters for vanishing p; the tail it cuts is recorded.
    while (w >= cut && out.weights.size() < 1000000) {
        out.weights.push_back(w);
        w *= q;
    }
    out.truncated_mass = std::max(0.0, 1.0 - out.mass());
    out.family = "geometric";
    out.params = {{"p", p}};
    return out;
}

Pmf make_table(std::vector<double> weights, long k_min) {
    require(!weights.empty(), "table: empty table");
    double sum = 0.0;
    for (double w : weights) {
        require(std::isfinite(w), "table: weights must be finite");
        require(w >= 0.0, "table: negative weight");
        sum += w;
    }
    require(sum > 0.0, "table: weights sum to zero");

    Pmf out;
    out.k_min = k_min;
    out.weights = std::move(weights);
    for (auto& w : out.weights)
        w /= sum;
    out.truncated_mass = 0.0;
    out.family = "table";
    return out;
}

std::vector<std::string> pmf_family_names() {
    return {"poisson", "binomial", "geometric", "table"};
}

Pmf parse_pmf_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("pmf spec is not valid JSON: ") + e.what());
    }
    require(j.is_object(), "pmf spec must be a JSON object");
    require(j.contains("kind") && j["kind"] == "discrete", "pmf spec kind must be \"discrete\"");
    require(j.contains("family") && j["family"].is_string(), "pmf spec needs a \"family\" string");
    const std::string family = j["family"].get<std::string>();

    if (family == "table") {
        require(j.contains("weights") && j["weights"].is_array(), "table spec needs \"weights\"");
        const long k_min = j.value("k_min", 0L);
        return make_table(j["weights"].get<std::vector<double>>(), k_min);
    }

    require(j.contains("params") && j["params"].is_object(), "pmf spec needs \"params\"");
    const auto& p = j["params"];
    auto get = [&p, &family](const char* name) {
        if (!p.contains(name) || !p[name].is_number())
            throw std::invalid_argument("pmf family \"" + family + "\" needs numeric param \"" +
                                        name + "\"");
        return p[name].get<double>();
    };

    if (family == "poisson")
        return make_poisson(get("lambda"));
    if (family == "binomial")
        return make_binomial(static_cast<int>(get("m")), get("p"));
    if (family == "geometric")
        return make_geometric(get("p"));

    std::string names;
    for (const auto& n : pmf_family_names())
        names += (names.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown pmf family \"" + family + "\" (valid: " + names + ")");
}

ConcavityReport check_log_concave_discrete(const Pmf& pmf, double tol) {
    ConcavityReport rep;
    rep.tol = tol;
    if (pmf.weights.size() < 3) {
        rep.passed = true;
        return rep;
    }
    const double peak = pmf.weights[static_cast<size_t>(pmf.mode() - pmf.k_min)];
    const double norm = peak * peak;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i + 1 < pmf.weights.size(); ++i) {
        const double lo = pmf.weights[i - 1], mid = pmf.weights[i], hi = pmf.weights[i + 1];
        if (!(lo * hi > 0.0))
            continue;
        const double margin = (mid * mid - lo * hi) / norm;
        ++rep.checked;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness_lo = static_cast<double>(pmf.k_min + static_cast<long>(i));
            rep.witness_hi = rep.witness_lo;
        }
    }
    if (rep.checked == 0) {
        rep.worst_margin = 0.0;
        rep.passed = true;
        return rep;
    }
    rep.passed = rep.worst_margin >= -tol;
    return rep;
}

} // namespace polya
