#include "polya/pf_checks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel_for.hpp"

namespace polya {

SquareMatrix build_kernel_matrix(const Density& f, const std::vector<double>& a,
                                 const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("kernel matrix: tuples must have the same length");
    }
    const int n = static_cast<int>(a.size());
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m.at(i, j) = f.pdf(a[static_cast<std::size_t>(i)] -
                               b[static_cast<std::size_t>(j)]);
        }
    }
    return m;
}

namespace {

bool has_dead_line(const SquareMatrix& m) {
    for (int i = 0; i < m.n; ++i) {
        double row = 0.0;
        double col = 0.0;
        for (int j = 0; j < m.n; ++j) {
            row = std::max(row, std::fabs(m.at(i, j)));
            col = std::max(col, std::fabs(m.at(j, i)));
        }
        if (row == 0.0 || col == 0.0) return true;
    }
    return false;
}

std::vector<double> cluster_tuple(SeededRng& rng, int n, const Interval& dom,
                                  double gap) {
    const double start = rng.uniform(dom.lo, dom.hi - (n - 1) * gap);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = start + i * gap;
    return v;
}

std::vector<double> tail_tuple(SeededRng& rng, int n, const Interval& dom,
                               double gap, bool upper) {
    const double w = dom.width();
    const double tw = std::min(w, std::max(0.08 * w, 2.0 * (n - 1) * gap));
    const Interval tail = upper ? Interval{dom.hi - tw, dom.hi}
                                : Interval{dom.lo, dom.lo + tw};
    const double fit_gap = std::min(gap, tw / (2.0 * n));
    return sample_ordered_tuple(rng, n, tail, fit_gap).values;
}

struct TuplePair {
    std::vector<double> a;
    std::vector<double> b;
};

// Mixes plain draws with targeted adversarial geometries. The draw order is
// fixed so a given seed always produces the same batch.
std::vector<TuplePair> draw_pairs(std::size_t count, int n, const Interval& dom,
                                  double gap, unsigned long long seed) {
    SeededRng rng(seed);
    std::vector<TuplePair> out;
    out.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        TuplePair p;
        switch (t % 8) {
        case 5: // tight clusters
            p.a = cluster_tuple(rng, n, dom, gap);
            p.b = cluster_tuple(rng, n, dom, gap);
            break;
        case 6: { // wide spreads
            const double wide_gap = (n > 1) ? 0.8 * dom.width() / (n - 1) : gap;
            p.a = sample_ordered_tuple(rng, n, dom, wide_gap).values;
            p.b = sample_ordered_tuple(rng, n, dom, wide_gap).values;
            break;
        }
        case 7: { // opposite-end tail excursions
            const bool a_upper = (t / 8) % 2 == 0;
            p.a = tail_tuple(rng, n, dom, gap, a_upper);
            p.b = tail_tuple(rng, n, dom, gap, !a_upper);
            break;
        }
        default:
            p.a = sample_ordered_tuple(rng, n, dom, gap).values;
            p.b = sample_ordered_tuple(rng, n, dom, gap).values;
            break;
        }
        out.push_back(std::move(p));
    }
    return out;
}

struct TupleVerdict {
    double normalized_det = 0.0;
    bool degenerate = false;
};

DetCheckReport aggregate(std::string check, int n, double tol,
                         unsigned long long seed,
                         const std::vector<TupleVerdict>& verdicts,
                         const std::function<Counterexample(std::size_t)>& witness) {
    DetCheckReport rep;
    rep.check = std::move(check);
    rep.n = n;
    rep.tuples_checked = verdicts.size();
    rep.tolerance = tol;
    rep.seed = seed;
    double min_det = 0.0;
    std::size_t arg_min = 0;
    bool have = false;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (verdicts[i].degenerate) rep.degenerate += 1;
        const double d = verdicts[i].normalized_det;
        if (!have || d < min_det) {
            min_det = d;
            arg_min = i;
            have = true;
        }
    }
    rep.min_normalized_det = have ? min_det : 0.0;
    rep.passed = rep.min_normalized_det >= -tol;
    if (!rep.passed) rep.counterexample = witness(arg_min);
    return rep;
}

} // namespace

DetCheckReport check_pf_n(const Density& f, int n, const SamplingPlan& plan,
                          double tol) {
    if (n < 2) throw std::invalid_argument("check_pf_n requires n >= 2");
    const Interval dom = plan.domain.value_or(f.sampling_window());
    if (!dom.finite() || !(dom.hi > dom.lo)) {
        throw std::invalid_argument("check_pf_n: sampling domain must be a finite interval");
    }
    const double gap = plan.min_gap > 0.0 ? plan.min_gap : 1e-3 * dom.width();

    const auto pairs = draw_pairs(plan.count, n, dom, gap, plan.seed);
    std::vector<TupleVerdict> verdicts(pairs.size());
    detail::parallel_for(pairs.size(), [&](std::size_t i) {
        const SquareMatrix m = build_kernel_matrix(f, pairs[i].a, pairs[i].b);
        if (has_dead_line(m)) {
            verdicts[i] = {0.0, true};
        } else {
            verdicts[i] = {det_sign_scaled(m).normalized_det, false};
        }
    });

    return aggregate("pf_n", n, tol, plan.seed, verdicts, [&](std::size_t i) {
        return Counterexample{pairs[i].a, pairs[i].b, verdicts[i].normalized_det};
    });
}

DetCheckReport check_gm_n(const FunctionTuple& functions,
                          const std::vector<OrderedTuple>& x_tuples,
                          double tol, unsigned long long seed_echo) {
    const int n = static_cast<int>(functions.n());
    if (n < 1) throw std::invalid_argument("check_gm_n: empty function tuple");
    for (const auto& t : x_tuples) {
        if (static_cast<int>(t.n()) != n) {
            throw std::invalid_argument("check_gm_n: tuple length must equal function count");
        }
    }

    std::vector<TupleVerdict> verdicts(x_tuples.size());
    detail::parallel_for(x_tuples.size(), [&](std::size_t t) {
        SquareMatrix m(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                m.at(i, j) = functions.fns[static_cast<std::size_t>(i)](
                    x_tuples[t].values[static_cast<std::size_t>(j)]);
            }
        }
        if (has_dead_line(m)) {
            verdicts[t] = {0.0, true};
        } else {
            verdicts[t] = {det_sign_scaled(m).normalized_det, false};
        }
    });

    return aggregate("gm_n", n, tol, seed_echo, verdicts, [&](std::size_t t) {
        return Counterexample{x_tuples[t].values, x_tuples[t].values,
                              verdicts[t].normalized_det};
    });
}

FunctionTuple vandermonde_gm(int n) {
    if (n < 2) throw std::invalid_argument("vandermonde_gm requires n >= 2");
    FunctionTuple ft;
    for (int k = 0; k < n; ++k) {
        ft.names.push_back(k == 0 ? "1" : (k == 1 ? "x" : "x^" + std::to_string(k)));
        ft.fns.push_back([k](double x) { return std::pow(x, k); });
    }
    return ft;
}

namespace {

double det2(double a, double b, double c, double d) { return a * d - b * c; }

double det3(const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

} // namespace

AndreiefResult andreief_check(
    const std::vector<std::vector<std::function<double(double)>>>& function_matrix,
    const Interval& interval, double rel_tol) {
    const std::size_t n = function_matrix.size();
    if (n != 2 && n != 3) {
        throw std::invalid_argument("andreief_check supports n in {2, 3}");
    }
    for (const auto& row : function_matrix) {
        if (row.size() != n) {
            throw std::invalid_argument("andreief_check: function matrix must be square");
        }
    }
    if (!interval.finite()) {
        throw std::invalid_argument("andreief_check: interval must be finite");
    }

    AndreiefResult res;

    SquareMatrix entries(static_cast<int>(n));
    bool all_converged = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const QuadResult q =
                integrate(function_matrix[i][j], interval, 1e-12, 1e-12);
            entries.at(static_cast<int>(i), static_cast<int>(j)) = q.value;
            all_converged = all_converged && q.converged;
        }
    }
    res.lhs = det_plain(entries);
    res.lhs_converged = all_converged;

    auto pointwise_det = [&](std::span<const double> x) {
        if (n == 2) {
            return det2(function_matrix[0][0](x[0]), function_matrix[0][1](x[0]),
                        function_matrix[1][0](x[1]), function_matrix[1][1](x[1]));
        }
        double m[3][3];
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                m[i][j] = function_matrix[i][j](x[i]);
            }
        }
        return det3(m);
    };
    const TensorQuadResult t =
        tensor_integrate(n, pointwise_det, interval, rel_tol, 1e-14, 96);
    res.rhs = t.value;
    res.rhs_converged = t.converged;

    const double scale = std::max(std::fabs(res.lhs), std::fabs(res.rhs));
    res.rel_err = scale > 0.0 ? std::fabs(res.lhs - res.rhs) / scale : 0.0;
    return res;
}

} // namespace polya
