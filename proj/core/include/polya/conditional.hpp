#pragma once

#include <vector>

#include "polya/density.hpp"
#include "polya/phi.hpp"
#include "polya/pmf.hpp"
#include "polya/quadrature.hpp"

namespace polya {

// One point of the curve s -> E[phi(X, Y) | X + Y = s].
//
// A sample is skipped when the denominator mass at s falls below the floor
// (or, for lattice sums, is exactly zero); skipped samples carry NaN in
// phi_value and take no part in monotonicity verdicts.
struct CurveSample {
    double s = 0.0;
    double phi_value = 0.0;
    double denominator_mass = 0.0;
    double err_estimate = 0.0;
    bool skipped = false;
};

struct CurveTols {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double mass_floor = 1e-12;
};

// Density of X + Y at s: integral of f(x) g(s - x) over the window where
// both factors carry mass. An empty window yields value 0, flagged.
QuadResult conv_density_at(const Density& f, const Density& g, double s,
                           const CurveTols& tols = {});

// E[phi(X, Y) | X + Y = s]. Numerator and denominator share one adaptive
// partition so their errors cancel where the integrands track each other.
CurveSample conditional_expectation_2d(const PhiSpec& phi, const Density& f,
                                       const Density& g, double s,
                                       const CurveTols& tols = {});

// Sweeps a strictly increasing grid; per-point failures skip that sample
// only. Throws "empty curve" when every point is skipped.
std::vector<CurveSample> conditional_curve(const PhiSpec& phi, const Density& f,
                                           const Density& g,
                                           const std::vector<double>& s_grid,
                                           const CurveTols& tols = {});

// Lattice analogue with exact finite sums; err_estimate is 0.
CurveSample discrete_conditional(const PhiSpec& phi, const Pmf& pmf_x,
                                 const Pmf& pmf_y, long s);

// Tabulated density of X + Y sampled on output_grid; mass not captured by
// the interpolant is recorded as exterior mass.
Density convolve(const Density& f, const Density& g,
                 const std::vector<double>& output_grid,
                 const CurveTols& tols = {});

Pmf convolve_discrete(const Pmf& pmf_x, const Pmf& pmf_y);

} // namespace polya
