#include "polya/phi.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "polya/sampling.hpp"

#include <json.hpp>

namespace polya {
namespace phi {

PhiSpec identity_x() {
    return {"identity_x", {}, [](double x, double) { return x; }};
}

PhiSpec product() {
    return {"product", {}, [](double x, double y) { return x * y; }};
}

PhiSpec sum() {
    return {"sum", {}, [](double x, double y) { return x + y; }};
}

PhiSpec exp_tilt(double a) {
    return {"exp_tilt",
            {{"a", a}},
            [a](double x, double y) { return std::exp(a * (x + y)); }};
}

PhiSpec separated(const std::string& f_name, const std::string& g_name) {
    Phi1d f = unary(f_name);
    Phi1d g = unary(g_name);
    PhiSpec s;
    s.name = "separated(" + f_name + "," + g_name + ")";
    s.eval = [f = std::move(f.eval), g = std::move(g.eval)](double x, double y) {
        return f(x) * g(y);
    };
    return s;
}

PhiSpec cubic(double alpha, double beta) {
    PhiSpec s;
    s.name = "cubic";
    s.params = {{"alpha", alpha}, {"beta", beta}};
    s.eval = [alpha, beta](double x, double y) {
        return std::exp(x * (x * x + alpha) + y * (y * y + beta));
    };
    s.requires_compact_support = true;
    return s;
}

PhiSpec staircase(unsigned long long seed, int steps) {
    auto stair = std::make_shared<BivariateStaircase>(monotone_staircase(seed, steps));
    PhiSpec s;
    s.name = "staircase";
    s.params = {{"seed", static_cast<double>(seed)},
                {"steps", static_cast<double>(steps)}};
    s.eval = [stair](double x, double y) { return (*stair)(x, y); };
    return s;
}

PhiSpec tilted_staircase(double a, unsigned long long seed, int steps) {
    auto stair = std::make_shared<BivariateStaircase>(monotone_staircase(seed, steps));
    PhiSpec s;
    s.name = "tilted_staircase";
    s.params = {{"a", a},
                {"seed", static_cast<double>(seed)},
                {"steps", static_cast<double>(steps)}};
    s.eval = [a, stair](double x, double y) {
        return std::exp(a * (x + y)) * (*stair)(x, y);
    };
    return s;
}

namespace {

struct BilinearTable {
    std::vector<double> gx;
    std::vector<double> gy;
    std::vector<double> v; // row-major, v[i * gy.size() + j] = value at (gx[i], gy[j])

    static std::size_t cell(const std::vector<double>& g, double t) {
        // Index of the left grid node, clamped so t outside the grid uses
        // the boundary cell (constant extrapolation via clamped t below).
        auto it = std::upper_bound(g.begin(), g.end(), t);
        std::size_t i = (it == g.begin()) ? 0 : static_cast<std::size_t>(it - g.begin() - 1);
        return std::min(i, g.size() - 2);
    }

    double operator()(double x, double y) const {
        x = std::clamp(x, gx.front(), gx.back());
        y = std::clamp(y, gy.front(), gy.back());
        const std::size_t i = cell(gx, x);
        const std::size_t j = cell(gy, y);
        const double tx = (x - gx[i]) / (gx[i + 1] - gx[i]);
        const double ty = (y - gy[j]) / (gy[j + 1] - gy[j]);
        const std::size_t m = gy.size();
        const double v00 = v[i * m + j];
        const double v01 = v[i * m + j + 1];
        const double v10 = v[(i + 1) * m + j];
        const double v11 = v[(i + 1) * m + j + 1];
        return (1 - tx) * ((1 - ty) * v00 + ty * v01) + tx * ((1 - ty) * v10 + ty * v11);
    }
};

void require_increasing(const std::vector<double>& g, const char* label) {
    if (g.size() < 2) {
        throw std::invalid_argument(std::string("tabulated phi: ") + label +
                                    " needs at least 2 points");
    }
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (!(g[i] > g[i - 1])) {
            throw std::invalid_argument(std::string("tabulated phi: ") + label +
                                        " must be strictly increasing");
        }
    }
}

} // namespace

PhiSpec tabulated(std::vector<double> grid_x, std::vector<double> grid_y,
                  std::vector<double> values) {
    require_increasing(grid_x, "grid_x");
    require_increasing(grid_y, "grid_y");
    if (values.size() != grid_x.size() * grid_y.size()) {
        throw std::invalid_argument("tabulated phi: values size must be |grid_x| * |grid_y|");
    }
    for (double t : values) {
        if (!std::isfinite(t)) {
            throw std::invalid_argument("tabulated phi: values must be finite");
        }
    }
    auto table = std::make_shared<BilinearTable>(
        BilinearTable{std::move(grid_x), std::move(grid_y), std::move(values)});
    PhiSpec s;
    s.name = "tabulated";
    s.eval = [table](double x, double y) { return (*table)(x, y); };
    return s;
}

PhiSpec custom(std::string name, std::function<double(double, double)> fn,
               bool requires_compact_support) {
    PhiSpec s;
    s.name = std::move(name);
    s.eval = std::move(fn);
    s.requires_compact_support = requires_compact_support;
    return s;
}

Phi1d unary(const std::string& name) {
    if (name == "identity") return {name, [](double x) { return x; }};
    if (name == "one") return {name, [](double) { return 1.0; }};
    if (name == "exp") return {name, [](double x) { return std::exp(x); }};
    if (name == "square") return {name, [](double x) { return x * x; }};
    if (name == "cube") return {name, [](double x) { return x * x * x; }};
    if (name == "atan") return {name, [](double x) { return std::atan(x); }};
    if (name == "relu") return {name, [](double x) { return x > 0.0 ? x : 0.0; }};
    if (name == "sigmoid") return {name, [](double x) { return 1.0 / (1.0 + std::exp(-x)); }};
    std::ostringstream os;
    os << "unknown unary function '" << name << "'; valid names:";
    for (const auto& n : unary_names()) os << ' ' << n;
    throw std::invalid_argument(os.str());
}

std::vector<std::string> unary_names() {
    return {"identity", "one", "exp", "square", "cube", "atan", "relu", "sigmoid"};
}

} // namespace phi

std::vector<std::string> phi_catalog_names() {
    return {"identity_x", "product",   "sum",       "exp_tilt",
            "separated",  "cubic",     "staircase", "tilted_staircase",
            "tabulated"};
}

PhiSpec parse_phi_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("phi spec: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("name")) {
        throw std::invalid_argument("phi spec: expected an object with a \"name\" field");
    }
    const std::string name = j.at("name").get<std::string>();
    if (name == "identity_x") return phi::identity_x();
    if (name == "product") return phi::product();
    if (name == "sum") return phi::sum();
    if (name == "exp_tilt") return phi::exp_tilt(j.at("a").get<double>());
    if (name == "separated") {
        return phi::separated(j.at("f").get<std::string>(), j.at("g").get<std::string>());
    }
    if (name == "cubic") {
        return phi::cubic(j.at("alpha").get<double>(), j.at("beta").get<double>());
    }
    if (name == "staircase") {
        return phi::staircase(j.at("seed").get<unsigned long long>(),
                              j.at("steps").get<int>());
    }
    if (name == "tilted_staircase") {
        return phi::tilted_staircase(j.at("a").get<double>(),
                                     j.at("seed").get<unsigned long long>(),
                                     j.at("steps").get<int>());
    }
    if (name == "tabulated") {
        return phi::tabulated(j.at("grid_x").get<std::vector<double>>(),
                              j.at("grid_y").get<std::vector<double>>(),
                              j.at("values").get<std::vector<double>>());
    }
    std::ostringstream os;
    os << "unknown phi '" << name << "'; valid names:";
    for (const auto& n : phi_catalog_names()) os << ' ' << n;
    throw std::invalid_argument(os.str());
}

} // namespace polya
