#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "polya/concavity.hpp"
#include "polya/interval.hpp"

namespace polya {

/// Continuous density on the real line, evaluated in log space.
///
/// quad_window() is the finite integration window: support for compact
/// families, otherwise wide enough that the omitted tail mass is below about
/// 1e-30 per side (the 12-sigma-equivalent rule). sampling_window() is the
/// narrower region where the density is numerically alive, used for drawing
/// test points. exterior_mass() reports mass the representation knowingly
/// omits, nonzero only for truncated tabulated outputs of convolve.
class Density {
public:
    static Density gaussian(double mu, double sigma);
    static Density exponential(double rate);
    static Density laplace(double mu, double b);
    static Density uniform(double lo, double hi);
    static Density logistic(double mu, double scale);
    static Density gamma(double shape, double rate); // shape >= 1

    /// Piecewise log-linear density on a strictly increasing grid of at least
    /// 4 points. log_values may be -inf (zero density) but not NaN or +inf.
    /// The interpolant mass plus exterior_mass must equal 1 within 1e-8,
    /// unless `normalize` rescales the values to unit mass first.
    static Density tabulated(std::vector<double> grid, std::vector<double> log_values,
                             bool normalize = false, double exterior_mass = 0.0);

    double log_pdf(double x) const { return log_pdf_(x); }
    double pdf(double x) const;

    Interval support() const { return support_; }
    Interval quad_window() const { return quad_window_; }
    Interval sampling_window() const { return sampling_window_; }
    bool compact_support() const { return compact_; }
    double exterior_mass() const { return exterior_mass_; }

    const std::string& family() const { return family_; }
    const std::vector<std::pair<std::string, double>>& params() const { return params_; }

    /// Tabulated payload; empty for analytic families.
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& log_values() const { return log_values_; }

private:
    Density() = default;

    std::function<double(double)> log_pdf_;
    Interval support_{};
    Interval quad_window_{};
    Interval sampling_window_{};
    bool compact_ = false;
    double exterior_mass_ = 0.0;
    std::string family_;
    std::vector<std::pair<std::string, double>> params_;
    std::vector<double> grid_;
    std::vector<double> log_values_;
};

/// Exact mass of the piecewise log-linear interpolant through (grid, logs).
double log_linear_mass(const std::vector<double>& grid, const std::vector<double>& logs);

/// Parse a continuous density spec, e.g.
///   {"kind":"continuous","family":"gaussian","params":{"mu":0.0,"sigma":1.0}}
///   {"kind":"continuous","family":"tabulated","grid":[...],"log_values":[...]}
/// Throws std::invalid_argument naming the offending field on bad input.
Density parse_density_json(const std::string& text);

std::vector<std::string> density_family_names();

/// Evenly spaced grid with `count` points, endpoints included.
std::vector<double> linspace(double lo, double hi, int count);

/// Midpoint concavity scan: for every probe pair x < y with positive density
/// at both, require log f((x+y)/2) >= (log f(x) + log f(y))/2 - tol.
ConcavityReport check_log_concave_continuous(const Density& f,
                                             const std::vector<double>& probe_grid,
                                             double tol = 0.0);

} // namespace polya
