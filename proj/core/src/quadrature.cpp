#include "polya/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace polya {

namespace {

struct AdaptiveState {
    const std::function<void(double, double*)>* f;
    int k;
    double abs_tol;
    double rel_tol;
    double total_width;
    std::vector<double> whole_scale; // |I0| per component, for relative tolerance
    std::vector<double> value;
    std::vector<double> err;
    long panels = 0; // accepted leaf panels
    long work = 0;   // refine calls, bounded by kPanelBudget
    bool budget_ok = true;

    void eval(double x, double* out) const {
        (*f)(x, out);
        for (int c = 0; c < k; ++c) {
            if (std::isnan(out[c]))
                throw QuadratureError("integrand returned NaN", x);
        }
    }

    double local_tol(int c, double h) const {
        double t = std::max(abs_tol, rel_tol * whole_scale[c]);
        return t * (h / total_width);
    }
};

void simpson(std::span<const double> fa, std::span<const double> fm,
             std::span<const double> fb, double h, double* out, int k) {
    for (int c = 0; c < k; ++c)
        out[c] = (fa[c] + 4.0 * fm[c] + fb[c]) * (h / 6.0);
}

// Recursive bisection. fa/fm/fb are the integrand values at a, midpoint, b;
// s is the one-panel Simpson estimate for [a, b].
void refine(AdaptiveState& st, double a, double b,
            std::vector<double> fa, std::vector<double> fm,
            std::vector<double> fb, std::vector<double> s) {
    const int k = st.k;
    const double m = 0.5 * (a + b);
    const double ml = 0.5 * (a + m);
    const double mr = 0.5 * (m + b);

    std::vector<double> fml(k), fmr(k);
    st.eval(ml, fml.data());
    st.eval(mr, fmr.data());

    std::vector<double> sl(k), sr(k);
    simpson(fa, fml, fm, m - a, sl.data(), k);
    simpson(fm, fmr, fb, b - m, sr.data(), k);

    bool ok = true;
    for (int c = 0; c < k; ++c) {
        double diff = (sl[c] + sr[c] - s[c]) / 15.0;
        if (std::abs(diff) > st.local_tol(c, b - a)) {
            ok = false;
            break;
        }
    }

    // Bisection bottoms out when midpoints stop moving in double precision.
    bool atom = (ml <= a || mr <= m || m >= b || m <= a);
    if (++st.work >= kPanelBudget)
        st.budget_ok = false;

    if (ok || atom || !st.budget_ok) {
        for (int c = 0; c < k; ++c) {
            double diff = (sl[c] + sr[c] - s[c]) / 15.0;
            st.value[c] += sl[c] + sr[c] + diff;
            st.err[c] += std::abs(diff);
        }
        st.panels += 2;
        return;
    }

    refine(st, a, m, std::move(fa), std::move(fml), fm, std::move(sl));
    refine(st, m, b, std::move(fm), std::move(fmr), std::move(fb), std::move(sr));
}

} // namespace

MultiQuadResult integrate_many(int n_comp,
                               const std::function<void(double, double*)>& f,
                               Interval iv, double abs_tol, double rel_tol) {
    if (n_comp < 1)
        throw std::invalid_argument("integrate_many: n_comp must be >= 1");
    if (!iv.finite())
        throw std::invalid_argument("integrate_many: interval must be finite");

    MultiQuadResult out;
    out.values.assign(n_comp, 0.0);
    out.errs.assign(n_comp, 0.0);
    if (iv.empty())
        return out;

    AdaptiveState st;
    st.f = &f;
    st.k = n_comp;
    st.abs_tol = abs_tol;
    st.rel_tol = rel_tol;
    st.total_width = iv.width();
    st.value.assign(n_comp, 0.0);
    st.err.assign(n_comp, 0.0);

    const double a = iv.lo, b = iv.hi, m = 0.5 * (a + b);
    std::vector<double> fa(n_comp), fm(n_comp), fb(n_comp), s(n_comp);
    st.eval(a, fa.data());
    st.eval(m, fm.data());
    st.eval(b, fb.data());
    simpson(fa, fm, fb, b - a, s.data(), n_comp);

    st.whole_scale.assign(n_comp, 0.0);
    for (int c = 0; c < n_comp; ++c)
        st.whole_scale[c] = std::abs(s[c]);

    refine(st, a, b, std::move(fa), std::move(fm), std::move(fb), std::move(s));

    out.values = st.value;
    out.errs = st.err;
    out.subdivisions = st.panels;
    out.converged = st.budget_ok;
    return out;
}

QuadResult integrate(const std::function<double(double)>& f, Interval iv,
                     double abs_tol, double rel_tol) {
    auto wrapped = [&f](double x, double* out) { out[0] = f(x); };
    MultiQuadResult m = integrate_many(1, wrapped, iv, abs_tol, rel_tol);
    QuadResult r;
    r.value = m.values[0];
    r.err_estimate = m.errs[0];
    r.subdivisions = m.subdivisions;
    r.converged = m.converged;
    return r;
}

const GaussRule& gauss_legendre(int order) {
    if (order < 1)
        throw std::invalid_argument("gauss_legendre: order must be >= 1");

    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);

    auto it = cache.find(order);
    if (it != cache.end())
        return it->second;

    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int n = 2; n <= order; ++n) {
                double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

TensorQuadResult tensor_integrate(
    int dim, const std::function<double(std::span<const double>)>& f,
    Interval iv, double rel_tol, double abs_tol, int max_order) {
    if (dim < 1 || dim > 4)
        throw std::invalid_argument("tensor_integrate: dim must be in [1, 4]");
    if (!iv.finite() || iv.empty())
        throw std::invalid_argument("tensor_integrate: bad interval");

    const double c = 0.5 * (iv.lo + iv.hi);
    const double hw = 0.5 * iv.width();

    auto evaluate = [&](int order) {
        const GaussRule& rule = gauss_legendre(order);
        std::vector<double> x(dim);
        std::vector<int> idx(dim, 0);
        double total = 0.0;
        while (true) {
            double w = 1.0;
            for (int d = 0; d < dim; ++d) {
                x[d] = c + hw * rule.nodes[idx[d]];
                w *= rule.weights[idx[d]];
            }
            total += w * f(x);
            int d = 0;
            while (d < dim && ++idx[d] == order) {
                idx[d] = 0;
                ++d;
            }
            if (d == dim)
                break;
        }
        double scale = 1.0;
        for (int d = 0; d < dim; ++d)
            scale *= hw;
        return total * scale;
    };

    TensorQuadResult out;
    double prev = evaluate(12);
    for (int order = 24; order <= max_order; order *= 2) {
        double cur = evaluate(order);
        out.value = cur;
        out.err_estimate = std::abs(cur - prev);
        out.order_used = order;
        if (out.err_estimate <= std::max(abs_tol, rel_tol * std::abs(cur)))
            return out;
        prev = cur;
    }
    out.converged = false;
    return out;
}

} // namespace polya
