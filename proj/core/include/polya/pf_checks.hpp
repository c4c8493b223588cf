#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polya/density.hpp"
#include "polya/determinant.hpp"
#include "polya/interval.hpp"
#include "polya/quadrature.hpp"
#include "polya/sampling.hpp"

namespace polya {

// How tuples are drawn for a sampled determinant check.
struct SamplingPlan {
    std::size_t count = 1000;
    unsigned long long seed = 1;
    // Defaults to the density's sampling window when unset.
    std::optional<Interval> domain;
    // Non-positive means one thousandth of the domain width.
    double min_gap = 0.0;
};

struct Counterexample {
    std::vector<double> a;
    std::vector<double> b;
    double normalized_det = 0.0;
};

// Aggregate verdict over a batch of tuples. A pass is evidence from a
// sampled check, not a proof; failures carry a re-checkable witness.
struct DetCheckReport {
    std::string check;
    int n = 0;
    std::size_t tuples_checked = 0;
    std::size_t degenerate = 0;
    double min_normalized_det = 0.0;
    bool passed = false;
    double tolerance = 0.0;
    std::optional<Counterexample> counterexample;
    unsigned long long seed = 0;
};

// Named scalar functions sharing one domain, checked jointly.
struct FunctionTuple {
    std::vector<std::string> names;
    std::vector<std::function<double(double)>> fns;

    std::size_t n() const { return fns.size(); }
};

SquareMatrix build_kernel_matrix(const Density& f, const std::vector<double>& a,
                                 const std::vector<double>& b);

// Samples pairs of ordered tuples (plain draws mixed with tight clusters,
// wide spreads, and tail excursions) and checks det(f(a_i - b_j)) >= -tol
// after sign-preserving equilibration. Tuples whose kernel matrix has an
// all-zero row or column count as degenerate with det 0.
DetCheckReport check_pf_n(const Density& f, int n, const SamplingPlan& plan,
                          double tol = 1e-9);

// Checks det(phi_i(x_j)) >= -tol for each supplied tuple.
DetCheckReport check_gm_n(const FunctionTuple& functions,
                          const std::vector<OrderedTuple>& x_tuples,
                          double tol = 1e-9, unsigned long long seed_echo = 0);

// Monomial witness (1, x, ..., x^{n-1}); positive determinants on any
// strictly increasing tuple.
FunctionTuple vandermonde_gm(int n);

struct AndreiefResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_err = 0.0;
    bool lhs_converged = false;
    bool rhs_converged = false;
};

// Compares det of entrywise integrals against the n-dimensional integral of
// the pointwise determinant over the cube. Supported orders: 2 and 3.
AndreiefResult andreief_check(
    const std::vector<std::vector<std::function<double(double)>>>& function_matrix,
    const Interval& interval, double rel_tol = 1e-9);

} // namespace polya
