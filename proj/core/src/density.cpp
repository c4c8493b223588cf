#include "polya/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace polya {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& msg) {
    if (!ok)
        throw std::invalid_argument(msg);
}

// Mass of one log-linear segment: integral of exp(L0 + t*(L1-L0)/h) over [0,h].
double segment_mass(double h, double l0, double l1) {
    if (l0 == kNegInf || l1 == kNegInf)
        return 0.0;
    const double d = l1 - l0;
    if (std::fabs(d) < 1e-8)
        return h * std::exp(l0) * (1.0 + 0.5 * d);
    return h * std::exp(l0) * std::expm1(d) / d;
}

} // namespace

double log_linear_mass(const std::vector<double>& grid, const std::vector<double>& logs) {
    double mass = 0.0;
    for (size_t i = 0; i + 1 < grid.size(); ++i)
        mass += segment_mass(grid[i + 1] - grid[i], logs[i], logs[i + 1]);
    return mass;
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 2)
        throw std::invalid_argument("linspace needs at least 2 points");
    std::vector<double> g(static_cast<size_t>(count));
    const double h = (hi - lo) / static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i)
        g[static_cast<size_t>(i)] = lo + h * static_cast<double>(i);
    g.back() = hi;
    return g;
}

Density Density::gaussian(double mu, double sigma) {
    require(sigma > 0.0, "gaussian: sigma must be positive");
    Density d;
    const double log_norm = std::log(sigma) + 0.5 * std::log(2.0 * std::numbers::pi);
    d.log_pdf_ = [mu, sigma, log_norm](double x) {
        const double z = (x - mu) / sigma;
        return -0.5 * z * z - log_norm;
    };
    d.support_ = Interval::whole_line();
    d.quad_window_ = {mu - 12.0 * sigma, mu + 12.0 * sigma};
    d.sampling_window_ = {mu - 6.0 * sigma, mu + 6.0 * sigma};
    d.family_ = "gaussian";
    d.params_ = {{"mu", mu}, {"sigma", sigma}};
    return d;
}

Density Density::exponential(double rate) {
    require(rate > 0.0, "exponential: rate must be positive");
    Density d;
    const double log_rate = std::log(rate);
    d.log_pdf_ = [rate, log_rate](double x) {
        return x < 0.0 ? kNegInf : log_rate - rate * x;
    };
    d.support_ = {0.0, std::numeric_limits<double>::infinity()};
    d.quad_window_ = {0.0, 74.0 / rate};
    d.sampling_window_ = {0.0, 10.0 / rate};
    d.family_ = "exponential";
    d.params_ = {{"rate", rate}};
    return d;
}

Density Density::laplace(double mu, double b) {
    require(b > 0.0, "laplace: b must be positive");
    Density d;
    const double log_norm = std::log(2.0 * b);
    d.log_pdf_ = [mu, b, log_norm](double x) { return -std::fabs(x - mu) / b - log_norm; };
    d.support_ = Interval::whole_line();
    d.quad_window_ = {mu - 74.0 * b, mu + 74.0 * b};
    d.sampling_window_ = {mu - 8.0 * b, mu + 8.0 * b};
    d.family_ = "laplace";
    d.params_ = {{"mu", mu}, {"b", b}};
    return d;
}

Density Density::uniform(double lo, double hi) {
    require(lo < hi, "uniform: lo must be below hi");
    Density d;
    const double log_h = -std::log(hi - lo);
    d.log_pdf_ = [lo, hi, log_h](double x) { return (x < lo || x > hi) ? kNegInf : log_h; };
    d.support_ = {lo, hi};
    d.quad_window_ = {lo, hi};
    d.sampling_window_ = {lo, hi};
    d.compact_ = true;
    d.family_ = "uniform";
    d.params_ = {{"lo", lo}, {"hi", hi}};
    return d;
}

Density Density::logistic(double mu, double scale) {
    require(scale > 0.0, "logistic: scale must be positive");
    Density d;
    const double log_s = std::log(scale);
    d.log_pdf_ = [mu, scale, log_s](double x) {
        const double z = std::fabs((x - mu) / scale);
        return -z - 2.0 * std::log1p(std::exp(-z)) - log_s;
    };
    d.support_ = Interval::whole_line();
    d.quad_window_ = {mu - 74.0 * scale, mu + 74.0 * scale};
    d.sampling_window_ = {mu - 10.0 * scale, mu + 10.0 * scale};
    d.family_ = "logistic";
    d.params_ = {{"mu", mu}, {"scale", scale}};
    return d;
}

Density Density::gamma(double shape, double rate) {
    require(rate > 0.0, "gamma: rate must be positive");
    require(shape >= 1.0, "gamma: shape below 1 is not supported");
    Density d;
    const double log_norm = shape * std::log(rate) - std::lgamma(shape);
    d.log_pdf_ = [shape, rate, log_norm](double x) {
        if (x < 0.0)
            return kNegInf;
        if (x == 0.0)
            return shape == 1.0 ? log_norm : kNegInf;
        return log_norm + (shape - 1.0) * std::log(x) - rate * x;
    };
    d.support_ = {0.0, std::numeric_limits<double>::infinity()};
    d.quad_window_ = {0.0, (74.0 + 10.0 * shape) / rate};
    d.sampling_window_ = {0.0, (10.0 + 3.0 * shape) / rate};
    d.family_ = "gamma";
    d.params_ = {{"shape", shape}, {"rate", rate}};
    return d;
}

Density Density::tabulated(std::vector<double> grid, std::vector<double> log_values,
                           bool normalize, double exterior_mass) {
    require(grid.size() >= 4, "tabulated: grid too short (need at least 4 points)");
    require(grid.size() == log_values.size(), "tabulated: grid/log_values size mismatch");
    require(exterior_mass >= 0.0, "tabulated: exterior_mass must be nonnegative");
    for (size_t i = 0; i < grid.size(); ++i) {
        require(std::isfinite(grid[i]), "tabulated: grid values must be finite");
        require(!std::isnan(log_values[i]) && log_values[i] < std::numeric_limits<double>::infinity(),
                "tabulated: log_values must not be NaN or +inf");
        if (i > 0)
            require(grid[i] > grid[i - 1], "tabulated: grid must be strictly increasing");
    }

    const double mass = log_linear_mass(grid, log_values);
    if (normalize) {
        require(exterior_mass == 0.0, "tabulated: cannot normalize with exterior mass");
        require(mass > 0.0 && std::isfinite(mass), "tabulated: interpolant mass must be positive");
        const double shift = std::log(mass);
        for (auto& lv : log_values)
            if (lv != kNegInf)
                lv -= shift;
    } else if (std::fabs(mass + exterior_mass - 1.0) > 1e-8) {
        throw std::invalid_argument("tabulated: interpolant mass " + std::to_string(mass) +
                                    " plus exterior mass is not 1 within 1e-8");
    }

    Density d;
    d.support_ = {grid.front(), grid.back()};
    d.quad_window_ = d.support_;
    d.compact_ = true;
    d.exterior_mass_ = exterior_mass;
    d.family_ = "tabulated";

    // Sampling stays inside the numerically alive region: log density within
    // 34.5 of the peak (density ratio 1e-15).
    const double peak = *std::max_element(log_values.begin(), log_values.end());
    size_t first = 0, last = grid.size() - 1;
    while (first < last && log_values[first] < peak - 34.5)
        ++first;
    while (last > first && log_values[last] < peak - 34.5)
        --last;
    d.sampling_window_ = {grid[first], grid[last]};

    d.grid_ = std::move(grid);
    d.log_values_ = std::move(log_values);
    // The evaluator owns copies so the handle stays safely copyable.
    d.log_pdf_ = [g = d.grid_, lv = d.log_values_](double x) {
        if (x < g.front() || x > g.back())
            return kNegInf;
        const auto it = std::upper_bound(g.begin(), g.end(), x);
        size_t hi = static_cast<size_t>(it - g.begin());
        if (hi == 0)
            return lv.front();
        if (hi == g.size())
            return lv.back();
        const size_t lo = hi - 1;
        if (lv[lo] == kNegInf || lv[hi] == kNegInf) {
            if (x == g[lo])
                return lv[lo];
            if (x == g[hi])
                return lv[hi];
            return kNegInf;
        }
        const double t = (x - g[lo]) / (g[hi] - g[lo]);
        return lv[lo] + t * (lv[hi] - lv[lo]);
    };
    return d;
}

double Density::pdf(double x) const {
    const double l = log_pdf_(x);
    return l == kNegInf ? 0.0 : std::exp(l);
}

std::vector<std::string> density_family_names() {
    return {"gaussian", "exponential", "laplace", "uniform", "logistic", "gamma", "tabulated"};
}

Density parse_density_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("density spec is not valid JSON: ") + e.what());
    }
    require(j.is_object(), "density spec must be a JSON object");
    require(j.contains("kind") && j["kind"].is_string(), "density spec needs a \"kind\" string");
    const std::string kind = j["kind"].get<std::string>();
    require(kind == "continuous", "density spec kind must be \"continuous\"");
    require(j.contains("family") && j["family"].is_string(),
            "density spec needs a \"family\" string");
    const std::string family = j["family"].get<std::string>();

    if (family == "tabulated") {
        require(j.contains("grid") && j["grid"].is_array(), "tabulated spec needs \"grid\"");
        require(j.contains("log_values") && j["log_values"].is_array(),
                "tabulated spec needs \"log_values\"");
        std::vector<double> grid = j["grid"].get<std::vector<double>>();
        std::vector<double> logs = j["log_values"].get<std::vector<double>>();
        const bool normalize = j.value("normalize", false);
        return Density::tabulated(std::move(grid), std::move(logs), normalize);
    }

    require(j.contains("params") && j["params"].is_object(), "density spec needs \"params\"");
    const auto& p = j["params"];
    auto get = [&p, &family](const char* name) {
        if (!p.contains(name) || !p[name].is_number())
            throw std::invalid_argument("density family \"" + family +
                                        "\" needs numeric param \"" + name + "\"");
        return p[name].get<double>();
    };

    if (family == "gaussian")
        return Density::gaussian(get("mu"), get("sigma"));
    if (family == "exponential")
        return Density::exponential(get("rate"));
    if (family == "laplace")
        return Density::laplace(get("mu"), get("b"));
    if (family == "uniform")
        return Density::uniform(get("lo"), get("hi"));
    if (family == "logistic")
        return Density::logistic(get("mu"), get("scale"));
    if (family == "gamma")
        return Density::gamma(get("shape"), get("rate"));

    std::string names;
    for (const auto& n : density_family_names())
        names += (names.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown density family \"" + family + "\" (valid: " + names +
                                ")");
}

ConcavityReport check_log_concave_continuous(const Density& f,
                                             const std::vector<double>& probe_grid,
                                             double tol) {
    ConcavityReport rep;
    rep.tol = tol;
    rep.worst_margin = std::numeric_limits<double>::infinity();

    std::vector<double> logs(probe_grid.size());
    bool any_inside = false;
    for (size_t i = 0; i < probe_grid.size(); ++i) {
        logs[i] = f.log_pdf(probe_grid[i]);
        any_inside = any_inside || logs[i] > kNegInf;
    }
    if (!any_inside)
        throw std::invalid_argument("probe grid lies entirely outside the support");

    for (size_t i = 0; i < probe_grid.size(); ++i) {
        if (logs[i] == kNegInf)
            continue;
        for (size_t j = i + 1; j < probe_grid.size(); ++j) {
            if (logs[j] == kNegInf)
                continue;
            const double mid = 0.5 * (probe_grid[i] + probe_grid[j]);
            const double margin = f.log_pdf(mid) - 0.5 * (logs[i] + logs[j]);
            ++rep.checked;
            if (margin < rep.worst_margin) {
                rep.worst_margin = margin;
                rep.witness_lo = probe_grid[i];
                rep.witness_hi = probe_grid[j];
            }
        }
    }
    if (rep.checked == 0) {
        // Single live probe point: nothing to compare, concavity holds vacuously.
        rep.worst_margin = 0.0;
        rep.passed = true;
        return rep;
    }
    rep.passed = rep.worst_margin >= -tol;
    return rep;
}

} // namespace polya
