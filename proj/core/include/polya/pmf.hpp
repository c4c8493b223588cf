#pragma once

#include <string>
#include <utility>
#include <vector>

#include "polya/concavity.hpp"

namespace polya {

/// Probability mass function on a contiguous integer window.
///
/// Infinite families are truncated where the weight falls below
/// truncation_tol times the peak weight; the cut mass is recorded in
/// truncated_mass and the surviving weights are NOT renormalized, so ratio
/// oracles stay undisturbed.
struct Pmf {
    long k_min = 0;
    std::vector<double> weights; // index i holds P(k_min + i)
    double truncated_mass = 0.0;
    std::string family;
    std::vector<std::pair<std::string, double>> params;

    long k_max() const { return k_min + static_cast<long>(weights.size()) - 1; }

    double at(long k) const {
        if (k < k_min || k > k_max())
            return 0.0;
        return weights[static_cast<size_t>(k - k_min)];
    }

    double mass() const;
    long mode() const; // smallest argmax
};

Pmf make_poisson(double lambda, double truncation_tol = 1e-16);
Pmf make_binomial(int m, double p);
Pmf make_geometric(double p, double truncation_tol = 1e-16);
/// Arbitrary nonnegative table, normalized to unit mass.
Pmf make_table(std::vector<double> weights, long k_min = 0);

std::vector<std::string> pmf_family_names();

/// Parse a discrete spec, e.g. {"kind":"discrete","family":"poisson","params":{"lambda":3.0}}.
Pmf parse_pmf_json(const std::string& text);

/// f(k)^2 >= f(k-1) f(k+1) at every interior k with f(k-1) f(k+1) > 0;
/// margins are normalized by the squared mode weight.
ConcavityReport check_log_concave_discrete(const Pmf& pmf, double tol = 0.0);

} // namespace polya
