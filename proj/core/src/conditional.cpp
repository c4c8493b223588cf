#include "polya/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parallel_for.hpp"

namespace polya {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Interval fiber_window(const Density& f, const Density& g, double s) {
    return f.quad_window().intersect(g.quad_window().reflect_about(s));
}

void require_integrable(const PhiSpec& phi, const Density& f, const Density& g) {
    if (phi.requires_compact_support &&
        !(f.compact_support() && g.compact_support())) {
        throw std::invalid_argument("phi '" + phi.name +
                                    "' requires compactly supported densities");
    }
}

} // namespace

QuadResult conv_density_at(const Density& f, const Density& g, double s,
                           const CurveTols& tols) {
    const Interval w = fiber_window(f, g, s);
    if (w.empty()) {
        QuadResult q;
        q.empty_window = true;
        return q;
    }
    return integrate([&](double x) { return f.pdf(x) * g.pdf(s - x); }, w,
                     tols.abs_tol, tols.rel_tol);
}

CurveSample conditional_expectation_2d(const PhiSpec& phi, const Density& f,
                                       const Density& g, double s,
                                       const CurveTols& tols) {
    require_integrable(phi, f, g);
    CurveSample out;
    out.s = s;

    const Interval w = fiber_window(f, g, s);
    if (w.empty()) {
        out.skipped = true;
        out.phi_value = kNaN;
        return out;
    }

    // Component 0 is the weight f(x) g(s-x), component 1 the phi-weighted
    // integrand. Zero weight short-circuits phi so that points outside the
    // support cannot surface 0 * inf.
    const MultiQuadResult mq = integrate_many(
        2,
        [&](double x, double* comp) {
            const double weight = f.pdf(x) * g.pdf(s - x);
            comp[0] = weight;
            comp[1] = weight == 0.0 ? 0.0 : phi(x, s - x) * weight;
        },
        w, tols.abs_tol, tols.rel_tol);

    out.denominator_mass = mq.values[0];
    if (!(out.denominator_mass >= tols.mass_floor)) {
        out.skipped = true;
        out.phi_value = kNaN;
        return out;
    }
    out.phi_value = mq.values[1] / mq.values[0];
    out.err_estimate =
        (mq.errs[1] + std::fabs(out.phi_value) * mq.errs[0]) / mq.values[0];
    return out;
}

std::vector<CurveSample> conditional_curve(const PhiSpec& phi, const Density& f,
                                           const Density& g,
                                           const std::vector<double>& s_grid,
                                           const CurveTols& tols) {
    require_integrable(phi, f, g);
    if (s_grid.empty()) throw std::invalid_argument("empty curve");
    for (std::size_t i = 1; i < s_grid.size(); ++i) {
        if (!(s_grid[i] > s_grid[i - 1])) {
            throw std::invalid_argument("s_grid must be strictly increasing");
        }
    }

    std::vector<CurveSample> samples(s_grid.size());
    detail::parallel_for(s_grid.size(), [&](std::size_t i) {
        try {
            samples[i] = conditional_expectation_2d(phi, f, g, s_grid[i], tols);
        } catch (const QuadratureError&) {
            // A bad abscissa poisons one grid point, not the sweep.
            samples[i] = CurveSample{s_grid[i], kNaN, 0.0,
                                     std::numeric_limits<double>::infinity(), true};
        }
    });

    const bool any_live =
        std::any_of(samples.begin(), samples.end(),
                    [](const CurveSample& c) { return !c.skipped; });
    if (!any_live) throw std::runtime_error("empty curve");
    return samples;
}

CurveSample discrete_conditional(const PhiSpec& phi, const Pmf& pmf_x,
                                 const Pmf& pmf_y, long s) {
    CurveSample out;
    out.s = static_cast<double>(s);
    out.err_estimate = 0.0;

    const long k_lo = std::max(pmf_x.k_min, s - pmf_y.k_max());
    const long k_hi = std::min(pmf_x.k_max(), s - pmf_y.k_min);
    double num = 0.0;
    double den = 0.0;
    for (long k = k_lo; k <= k_hi; ++k) {
        const double weight = pmf_x.at(k) * pmf_y.at(s - k);
        if (weight == 0.0) continue;
        den += weight;
        num += phi(static_cast<double>(k), static_cast<double>(s - k)) * weight;
    }
    out.denominator_mass = den;
    if (den == 0.0) {
        out.skipped = true;
        out.phi_value = kNaN;
        return out;
    }
    out.phi_value = num / den;
    return out;
}

Density convolve(const Density& f, const Density& g,
                 const std::vector<double>& output_grid,
                 const CurveTols& tols) {
    std::vector<double> logs(output_grid.size());
    detail::parallel_for(output_grid.size(), [&](std::size_t i) {
        const double r = conv_density_at(f, g, output_grid[i], tols).value;
        logs[i] = r > 0.0 ? std::log(r) : -std::numeric_limits<double>::infinity();
    });
    const double captured = log_linear_mass(output_grid, logs);
    const double exterior = std::max(0.0, 1.0 - captured);
    return Density::tabulated(output_grid, logs, false, exterior);
}

Pmf convolve_discrete(const Pmf& pmf_x, const Pmf& pmf_y) {
    Pmf out;
    out.family = "convolution";
    out.k_min = pmf_x.k_min + pmf_y.k_min;
    out.weights.assign(pmf_x.weights.size() + pmf_y.weights.size() - 1, 0.0);
    for (std::size_t i = 0; i < pmf_x.weights.size(); ++i) {
        const double wx = pmf_x.weights[i];
        if (wx == 0.0) continue;
        for (std::size_t j = 0; j < pmf_y.weights.size(); ++j) {
            out.weights[i + j] += wx * pmf_y.weights[j];
        }
    }
    double total = 0.0;
    for (double w : out.weights) total += w;
    out.truncated_mass = std::max(0.0, 1.0 - total);
    return out;
}

} // namespace polya
