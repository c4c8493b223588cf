#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polya/conditional.hpp"
#include "polya/density.hpp"
#include "polya/pf_checks.hpp"
#include "polya/phi.hpp"
#include "polya/pmf.hpp"
#include "polya/sampling.hpp"

namespace polya {

// Tolerances used by the monotonicity verdicts. The quadrature tolerances
// feed the curve engine; atol and rtol bound the allowed drop between
// consecutive curve points on top of the propagated quadrature error.
struct Tols {
    double atol = 1e-8;
    double rtol = 1e-10;
    CurveTols quad;
};

struct VerifyOptions {
    // Run the verdict even when a hypothesis check fails; the failure is
    // still recorded in the report's hypotheses map.
    bool override_hypotheses = false;
    // Grid resolution for hypothesis probes.
    int probe_points = 41;
    double hyp_tol = 1e-8;
};

// Raised when a theorem's hypothesis fails and overrides are off. A verdict
// under broken hypotheses would not contradict anything, so the suite
// refuses to produce one. The witness is re-checkable: re-evaluating the
// named hypothesis at these coordinates reproduces margin.
class HypothesisError : public std::runtime_error {
  public:
    HypothesisError(std::string hypothesis, std::vector<double> witness,
                    double margin);

    const std::string& hypothesis() const { return hypothesis_; }
    const std::vector<double>& witness() const { return witness_; }
    double margin() const { return margin_; }

  private:
    std::string hypothesis_;
    std::vector<double> witness_;
    double margin_;
};

// Adjacent-pair violation witness inside a sampled curve.
struct PairWitness {
    std::size_t index_lo = 0;
    std::size_t index_hi = 0;
    double s_lo = 0.0;
    double s_hi = 0.0;
    double drop = 0.0;
};

struct MonotonicityReport {
    std::string theorem;
    std::string transform_name;
    // phi_value holds the transformed curve alpha(s) * Phi(s).
    std::vector<CurveSample> samples;
    // Maximal runs of consecutive non-skipped samples, as inclusive index
    // pairs; monotonicity is enforced within each run only.
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    double max_violation = 0.0;
    bool passed = false;
    std::optional<PairWitness> witness;
    double tol_used = 0.0;
    std::map<std::string, bool> hypotheses;
    unsigned long long seed = 0;
};

struct TiltWitness {
    int condition = 1;      // 1 varies x, 2 varies y
    double moving_lo = 0.0; // varying coordinate, smaller point
    double moving_hi = 0.0; // varying coordinate, larger point
    double fixed = 0.0;     // frozen coordinate
    double margin = 0.0;    // tilted difference, negative when violated
};

struct TiltConditionReport {
    bool condition1_ok = true;
    bool condition2_ok = true;
    std::optional<TiltWitness> worst_pair;
    std::string mode; // "continuous" or "discrete"
};

struct DerivativeReport {
    std::string theorem;
    double min_margin = 0.0; // min over grid of Phi'(s) - a Phi(s)
    double witness_s = 0.0;
    bool passed = false;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
    double fd_step = 0.0;
    double tol_used = 0.0;
    std::map<std::string, bool> hypotheses;
};

// Named positive transform alpha(s) for the generalized monotone claim.
struct AlphaTransform {
    std::string name;
    std::function<double(double)> eval;

    double operator()(double s) const { return eval(s); }
};

namespace alpha {
AlphaTransform unit();
AlphaTransform reciprocal();
AlphaTransform exp_tilt(double a);
AlphaTransform tabulated(std::vector<double> grid, std::vector<double> values);
} // namespace alpha

struct ConvCrossCheck {
    std::vector<double> a;
    std::vector<double> b;
};

struct ConvStabilityReport {
    std::string theorem;
    DetCheckReport pf; // PF_n check on the tabulated convolution
    double crosscheck_max_rel_err = 0.0;
    bool crosscheck_ok = false;
    double exterior_mass = 0.0;
    double tabulation_slack = 0.0; // det tolerance granted for interpolation error
    bool passed = false;
    std::map<std::string, bool> hypotheses;
    unsigned long long seed = 0;
};

// phi nondecreasing in each variable, f and g log-concave: s -> Phi(s) is
// nondecreasing.
MonotonicityReport verify_strong_efron(const PhiSpec& phi, const Density& f,
                                       const Density& g,
                                       const std::vector<double>& s_grid,
                                       const Tols& tols = {},
                                       const VerifyOptions& opt = {});

// Univariate phi applied to X and to Y; returns the Phi_X and Phi_Y reports.
std::pair<MonotonicityReport, MonotonicityReport> verify_restricted_efron(
    const Phi1d& phi, const Density& f, const Density& g,
    const std::vector<double>& s_grid, const Tols& tols = {},
    const VerifyOptions& opt = {});

// Lattice version; s runs over the integers in [s_lo, s_hi].
std::pair<MonotonicityReport, MonotonicityReport> verify_restricted_efron(
    const Phi1d& phi, const Pmf& pmf_x, const Pmf& pmf_y, long s_lo, long s_hi,
    const Tols& tols = {}, const VerifyOptions& opt = {});

// Phi-matrix for one s-tuple: entry (i, j) = E[phi_i(X) | X+Y = s_j].
// Empty when any entry is skipped by the mass floor.
std::optional<SquareMatrix> gm_phi_matrix(const FunctionTuple& functions,
                                          const Density& f, const Density& g,
                                          const OrderedTuple& s_tuple,
                                          const CurveTols& quad = {});

// (phi_1..phi_n) in GM_n and f, g in PF_n: (Phi_1..Phi_n) stays in GM_n.
DetCheckReport verify_gm_preservation(const FunctionTuple& functions,
                                      const Density& f, const Density& g,
                                      const std::vector<OrderedTuple>& s_tuples,
                                      const Tols& tols = {},
                                      const VerifyOptions& opt = {});

// Tilted monotonicity: s -> exp(-as) Phi(s) nondecreasing. a = 0 delegates
// to verify_strong_efron, matching the two statements' equivalence.
MonotonicityReport verify_exp_tilt(const PhiSpec& phi, double a,
                                   const Density& f, const Density& g,
                                   const std::vector<double>& s_grid,
                                   const Tols& tols = {},
                                   const VerifyOptions& opt = {});

MonotonicityReport verify_exp_tilt_discrete(const PhiSpec& phi, double a,
                                            const Pmf& pmf_x, const Pmf& pmf_y,
                                            long s_lo, long s_hi,
                                            const Tols& tols = {},
                                            const VerifyOptions& opt = {});

// Probes x -> exp(-ax) phi(x,y) and y -> exp(-ay) phi(x,y) on a square grid
// over probe_window.
TiltConditionReport check_tilt_conditions(const PhiSpec& phi, double a,
                                          const Interval& probe_window,
                                          int probe_points = 41,
                                          double tol = 1e-8);

// Exact lattice form phi(k+1, m) >= exp(a) phi(k, m) over the given window,
// with a one-ulp-scale relative allowance on the comparison.
TiltConditionReport check_tilt_conditions_discrete(const PhiSpec& phi, double a,
                                                   long x_lo, long x_hi,
                                                   long y_lo, long y_hi,
                                                   double rel_slack = 1e-12);

// Central-difference check of Phi'(s) >= a Phi(s) over the grid.
DerivativeReport corollary_derivative_check(const PhiSpec& phi, double a,
                                            const Density& f, const Density& g,
                                            const std::vector<double>& s_grid,
                                            double fd_step = 1e-3,
                                            const Tols& tols = {},
                                            const VerifyOptions& opt = {});

// General transform: s -> alpha(s) Phi(s) nondecreasing, given that
// (x, y) -> alpha(x+y) phi(x,y) is nondecreasing in each variable.
// alpha = unit delegates to verify_strong_efron.
MonotonicityReport verify_alpha_monotone(const PhiSpec& phi,
                                         const AlphaTransform& alpha,
                                         const Density& f, const Density& g,
                                         const std::vector<double>& s_grid,
                                         const Tols& tols = {},
                                         const VerifyOptions& opt = {});

// Positive-support specialization: phi = xy, alpha = 1/s on (0, inf).
MonotonicityReport verify_product_over_s(const Density& f, const Density& g,
                                         const std::vector<double>& s_grid,
                                         const Tols& tols = {},
                                         const VerifyOptions& opt = {});

// Tabulates r = f * g, re-runs the PF_n check on r, and cross-checks the
// ratio identity Phi_i(a_j) = r(a_j - b_i) / r(a_j) on one tuple pair.
ConvStabilityReport verify_convolution_stability(
    const Density& f, const Density& g, int n, const SamplingPlan& sampling,
    const Tols& tols = {}, const VerifyOptions& opt = {},
    const std::optional<ConvCrossCheck>& crosscheck = std::nullopt);

} // namespace polya
