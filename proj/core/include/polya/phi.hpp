#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace polya {

// Bivariate test function phi(x, y) drawn from a small named catalog.
// Entries carry their construction parameters so reports can echo them.
struct PhiSpec {
    std::string name;
    std::vector<std::pair<std::string, double>> params;
    std::function<double(double, double)> eval;

    // Super-exponential entries (cubic) are integrable against compactly
    // supported densities only; the engine refuses other pairings.
    bool requires_compact_support = false;

    double operator()(double x, double y) const { return eval(x, y); }
};

// Univariate factor used by the separated entry and by GM witnesses.
struct Phi1d {
    std::string name;
    std::function<double(double)> eval;

    double operator()(double x) const { return eval(x); }
};

namespace phi {

PhiSpec identity_x();
PhiSpec product();
PhiSpec sum();
PhiSpec exp_tilt(double a);
PhiSpec separated(const std::string& f_name, const std::string& g_name);
PhiSpec cubic(double alpha, double beta);
PhiSpec staircase(unsigned long long seed, int steps);
// Staircase damped by exp(a(x+y)); keeps the product monotone for a >= 0.
PhiSpec tilted_staircase(double a, unsigned long long seed, int steps);
// Bilinear interpolation over a rectangular table, clamped at the edges.
PhiSpec tabulated(std::vector<double> grid_x, std::vector<double> grid_y,
                  std::vector<double> values);
PhiSpec custom(std::string name, std::function<double(double, double)> fn,
               bool requires_compact_support = false);

Phi1d unary(const std::string& name);
std::vector<std::string> unary_names();

} // namespace phi

// Parses specs like {"name":"exp_tilt","a":0.7} or {"name":"cubic",
// "alpha":1.0,"beta":2.0}. Unknown names raise std::invalid_argument
// listing the valid ones.
PhiSpec parse_phi_json(const std::string& text);

std::vector<std::string> phi_catalog_names();

} // namespace polya
