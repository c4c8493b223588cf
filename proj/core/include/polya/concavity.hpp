#pragma once

namespace polya {

/// Result of a log-concavity scan.
///
/// Margins are oriented so that nonnegative means concave at that probe.
/// Continuous: log f((x+y)/2) - (log f(x) + log f(y))/2 over probe pairs.
/// Discrete: (f(k)^2 - f(k-1) f(k+1)) / f(k_mode)^2 over interior k.
struct ConcavityReport {
    bool passed = false;
    double worst_margin = 0.0;
    double witness_lo = 0.0; // worst pair (continuous) or worst k twice (discrete)
    double witness_hi = 0.0;
    long checked = 0; // pairs or interior lattice points actually tested
    double tol = 0.0; // margins >= -tol count as passing
};

} // namespace polya
