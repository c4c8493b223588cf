#pragma once

// Shared test fixtures: densities that the analytic catalog does not cover
// and small filesystem helpers for exercising the command line surface.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "polya/density.hpp"

namespace testsupport {

// Cauchy-shaped tabulated density on [-50, 50], step 0.01. The log values
// are exact at the nodes, so kernel determinants built from integer-valued
// tuples agree with the closed form to rounding error. The tails carry
// about 1.27% of the mass; that amount is declared as exterior mass rather
// than renormalized away, keeping node ratios undisturbed.
inline polya::Density make_cauchy_tabulated() {
    const int count = 10001;
    std::vector<double> grid(count);
    std::vector<double> logs(count);
    const double log_pi = std::log(4.0 * std::atan(1.0));
    for (int i = 0; i < count; ++i) {
        const double x = -50.0 + 0.01 * i;
        grid[i] = x;
        logs[i] = -log_pi - std::log1p(x * x);
    }
    const double captured = polya::log_linear_mass(grid, logs);
    return polya::Density::tabulated(grid, logs, false, 1.0 - captured);
}

// Unique scratch path. Files accumulate under the test process's temp
// directory and the OS cleans them up; keeping them around makes failed
// runs inspectable.
inline std::string temp_path(const std::string& tag) {
    static int counter = 0;
    std::ostringstream os;
    os << (std::filesystem::temp_directory_path() / "polya_test_").string()
       << tag << "_" << ++counter << ".txt";
    return os.str();
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string write_temp(const std::string& tag, const std::string& body) {
    const std::string path = temp_path(tag);
    std::ofstream out(path, std::ios::binary);
    out << body;
    return path;
}

} // namespace testsupport
