#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fracnum/weights.hpp"

namespace fracnum {

/// Real-valued map on an interval of the real line.  An empty function object
/// stands for "not provided" where a field is optional.
using ScalarField1D = std::function<double(double)>;

/// Samples of a scalar function on the uniform grid x_n = origin + n * step.
struct GridFunction {
    double origin = 0.0;
    double step = 0.0;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(double origin_, double step_, std::vector<double> values_)
        : origin(origin_), step(step_), values(std::move(values_)) {
        if (!(step > 0.0)) throw std::invalid_argument("GridFunction: step must be positive");
    }

    std::size_t size() const noexcept { return values.size(); }
    std::size_t last_index() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    double node(std::size_t n) const noexcept { return origin + static_cast<double>(n) * step; }
};

namespace detail {

/// Index of the last grid node at or below x, tolerating ~1e-9 relative
/// jitter so that exact multiples of the step are never truncated by one.
inline std::size_t grid_span(double lower_limit, double x, double h) {
    const double r = (x - lower_limit) / h;
    if (r < 0.0) throw std::domain_error("grunwald: point lies below the lower limit");
    return static_cast<std::size_t>(std::floor(r + 1e-9));
}

} // namespace detail

/// Grunwald formula h^{-a} sum_{k=0}^{n} w_k y[n-k] at grid index n.
/// The table must hold at least n + 1 weights of the same order.
inline double grunwald_apply(const GridFunction& y, std::size_t n, const WeightTable& weights) {
    if (n >= y.size()) throw std::out_of_range("grunwald_apply: index outside the grid");
    if (weights.size() < n + 1)
        throw std::invalid_argument("grunwald_apply: weight table shorter than the sum");
    const std::vector<double>& w = weights.values();
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) acc += w[k] * y.values[n - k];
    return acc / std::pow(y.step, weights.alpha());
}

inline double grunwald_apply(const GridFunction& y, std::size_t n, FractionalOrder alpha) {
    if (n >= y.size()) throw std::out_of_range("grunwald_apply: index outside the grid");
    return grunwald_apply(y, n, grunwald_weights(alpha, n == 0 ? 1 : n));
}

/// Shifted Grunwald formula for the function f - f(lower_limit):
///   h^{-a} sum_{k=0}^{N} w_k (f(x - (k - shift) h) - f(lower_limit)),
/// with N the number of whole steps between the lower limit and x.  The
/// function is sampled directly at the shifted abscissae, which may exceed x
/// by shift * h, so f must be evaluable on [lower_limit, x + shift * h].
inline double shifted_grunwald_apply(const ScalarField1D& f, double lower_limit, double x,
                                     double h, FractionalOrder alpha, double shift) {
    if (!(h > 0.0)) throw std::invalid_argument("shifted_grunwald_apply: h must be positive");
    if (!(shift >= 0.0))
        throw std::invalid_argument("shifted_grunwald_apply: shift must be >= 0");
    const std::size_t span = detail::grid_span(lower_limit, x, h);
    const WeightTable weights = grunwald_weights(alpha, span == 0 ? 1 : span);
    const double base = f(lower_limit);
    double acc = 0.0;
    for (std::size_t k = 0; k <= span; ++k) {
        const double xi = x - (static_cast<double>(k) - shift) * h;
        acc += weights[k] * (f(xi) - base);
    }
    return acc / std::pow(h, alpha.value());
}

/// L1 (piecewise-linear quadrature) approximation
///   h^{-a} sum_{k=0}^{n-1} c_k y[n-k].
/// The formula omits the boundary term in y[0] and is consistent only when
/// the sampled function vanishes at the origin, so y[0] = 0 is required.
inline double l1_apply(const GridFunction& y, std::size_t n, const L1WeightTable& weights) {
    if (n < 1 || n >= y.size()) throw std::out_of_range("l1_apply: index must satisfy 1 <= n <= N");
    if (y.values[0] != 0.0)
        throw std::invalid_argument("l1_apply: requires y[0] = 0 at the lower limit");
    if (weights.size() < n)
        throw std::invalid_argument("l1_apply: weight table shorter than the sum");
    const std::vector<double>& c = weights.values();
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += c[k] * y.values[n - k];
    return acc / std::pow(y.step, weights.alpha());
}

inline double l1_apply(const GridFunction& y, std::size_t n, FractionalOrder alpha) {
    if (n < 1 || n >= y.size()) throw std::out_of_range("l1_apply: index must satisfy 1 <= n <= N");
    return l1_apply(y, n, l1_weights(alpha, n));
}

/// Caputo derivative of x^q of order alpha:
///   Gamma(q+1)/Gamma(q+1-alpha) x^{q-alpha},  q > 0;  zero for q = 0.
/// Exact power rule, used throughout the tests as the reference value.
inline double caputo_monomial(double exponent, FractionalOrder alpha, double x) {
    if (exponent < 0.0)
        throw std::invalid_argument("caputo_monomial: exponent must be >= 0");
    if (exponent == 0.0) return 0.0;
    const double a = alpha.value();
    return std::tgamma(exponent + 1.0) / std::tgamma(exponent + 1.0 - a) *
           std::pow(x, exponent - a);
}

/// Value of a grid function at the off-grid point x_{n - beta}, 0 <= beta <= 2,
/// from its last two (order 2) or three (order 3) samples:
///   order 2:  beta y_{n-1} + (1-beta) y_n                       (exact on lines)
///   order 3:  b(b-1)/2 y_{n-2} + b(2-b) y_{n-1} + (b-1)(b-2)/2 y_n   (exact on quadratics)
inline double interpolate_offgrid(double y_nm2, double y_nm1, double y_n, double beta,
                                  int order) {
    if (!(beta >= 0.0 && beta <= 2.0))
        throw std::domain_error("interpolate_offgrid: beta must lie in [0, 2]");
    switch (order) {
        case 2:
            return beta * y_nm1 + (1.0 - beta) * y_n;
        case 3:
            return 0.5 * beta * (beta - 1.0) * y_nm2 + beta * (2.0 - beta) * y_nm1 +
                   0.5 * (beta - 1.0) * (beta - 2.0) * y_n;
        default:
            throw std::invalid_argument("interpolate_offgrid: order must be 2 or 3");
    }
}

} // namespace fracnum
