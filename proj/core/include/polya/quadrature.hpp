#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polya/interval.hpp"

namespace polya {

/// Result of one adaptive integration.
struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;   // sum of |S_fine - S_coarse|/15 over accepted panels
    long subdivisions = 0;       // accepted leaf panels
    bool converged = true;       // false only when the panel budget ran out
    bool empty_window = false;   // set by callers that integrate over an empty window
};

/// Result of integrating several components over one shared partition.
struct MultiQuadResult {
    std::vector<double> values;
    std::vector<double> errs;
    long subdivisions = 0;
    bool converged = true;
};

/// Thrown when an integrand produces NaN; carries the offending abscissa.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& msg, double x)
        : std::runtime_error(msg + " at x=" + std::to_string(x)), abscissa_(x) {}
    double abscissa() const { return abscissa_; }

  private:
    double abscissa_;
};

inline constexpr long kPanelBudget = 1L << 20;

/// Adaptive composite Simpson with Richardson extrapolation per panel.
/// Refines until the local estimate meets max(abs_tol, rel_tol*|I0|)
/// prorated by panel length, or the global panel budget is exhausted.
QuadResult integrate(const std::function<double(double)>& f, Interval iv,
                     double abs_tol = 1e-10, double rel_tol = 1e-10);

/// Same scheme, n_comp integrands evaluated on one shared partition.
/// A panel is accepted only when every component passes its local test,
/// so all components see identical abscissae and weights.
MultiQuadResult integrate_many(int n_comp,
                               const std::function<void(double, double*)>& f,
                               Interval iv, double abs_tol = 1e-10,
                               double rel_tol = 1e-10);

/// Gauss-Legendre nodes and weights on [-1, 1]; results cached per order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// Tensor-product Gauss-Legendre over iv^dim with order doubling:
/// stops when successive levels agree to rel_tol or levels are exhausted.
struct TensorQuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    int order_used = 0;
    bool converged = true;
};
TensorQuadResult tensor_integrate(
    int dim, const std::function<double(std::span<const double>)>& f,
    Interval iv, double rel_tol = 1e-9, double abs_tol = 1e-14,
    int max_order = 96);

} // namespace polya
