#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fracnum/fractional_order.hpp"

namespace fracnum {

/// Hard cap on weight-table length; larger tables are almost certainly a bug
/// in the caller and would exhaust memory before being useful.
inline constexpr std::size_t max_weight_count = 10'000'000;

/// Binomial-series weights w_n = (-1)^n C(alpha, n) of (1 - z)^alpha.
///
/// Immutable after construction.  w[0] = 1, w[1] = -alpha, and the tail is a
/// strictly increasing sequence of negative numbers summing to -1.  Tables
/// are cheap to build; compute one per run and share it freely across
/// threads.
class WeightTable {
public:
    WeightTable(FractionalOrder alpha, std::vector<double> w)
        : alpha_(alpha), w_(std::move(w)) {}

    double alpha() const noexcept { return alpha_.value(); }
    FractionalOrder order() const noexcept { return alpha_; }

    /// Number of stored weights (count + 1 entries, indices 0..count).
    std::size_t size() const noexcept { return w_.size(); }

    double operator[](std::size_t n) const { return w_.at(n); }
    const std::vector<double>& values() const noexcept { return w_; }

private:
    FractionalOrder alpha_;
    std::vector<double> w_;
};

/// Quadrature weights c_k of the piecewise-linear (L1) approximation of the
/// Caputo derivative.  c[0] = 1/Gamma(2-alpha) > 0; c[k] < 0 and increasing
/// for k >= 1; the full series sums to zero.
class L1WeightTable {
public:
    L1WeightTable(FractionalOrder alpha, std::vector<double> c)
        : alpha_(alpha), c_(std::move(c)) {}

    double alpha() const noexcept { return alpha_.value(); }
    FractionalOrder order() const noexcept { return alpha_; }
    std::size_t size() const noexcept { return c_.size(); }

    double operator[](std::size_t k) const { return c_.at(k); }
    const std::vector<double>& values() const noexcept { return c_; }

private:
    FractionalOrder alpha_;
    std::vector<double> c_;
};

/// Leading series coefficients of ((1 - e^{-z})/z)^alpha e^{pz}, the
/// generating function whose expansion gives the error terms of the shifted
/// difference formulas.
struct OmegaCoefficients {
    double c0;
    double c1;
    double c2;
};

namespace detail {

inline void check_count(std::size_t count) {
    if (count < 1) throw std::invalid_argument("weights: count must be >= 1");
    if (count > max_weight_count)
        throw std::invalid_argument("weights: count exceeds the 1e7 table cap");
}

} // namespace detail

/// Weights w_0..w_count via the forward-stable multiplicative recursion
/// w_n = (1 - (alpha+1)/n) w_{n-1}.  Every ratio lies in (0, 1), so no
/// cancellation or overflow can occur.
inline WeightTable grunwald_weights(FractionalOrder alpha, std::size_t count) {
    detail::check_count(count);
    const double a = alpha.value();
    std::vector<double> w(count + 1);
    w[0] = 1.0;
    for (std::size_t n = 1; n <= count; ++n) {
        w[n] = (1.0 - (a + 1.0) / static_cast<double>(n)) * w[n - 1];
    }
    return WeightTable(alpha, std::move(w));
}

/// L1 weights c_0..c_count from the closed form
/// c_k = ((k+1)^{1-a} - 2 k^{1-a} + (k-1)^{1-a}) / Gamma(2-a).
inline L1WeightTable l1_weights(FractionalOrder alpha, std::size_t count) {
    detail::check_count(count);
    const double a = alpha.value();
    const double g = std::tgamma(2.0 - a);
    std::vector<double> c(count + 1);
    c[0] = 1.0 / g;
    for (std::size_t k = 1; k <= count; ++k) {
        const double kd = static_cast<double>(k);
        c[k] = (std::pow(kd + 1.0, 1.0 - a) - 2.0 * std::pow(kd, 1.0 - a) +
                std::pow(kd - 1.0, 1.0 - a)) /
               g;
    }
    return L1WeightTable(alpha, std::move(c));
}

struct WeightBounds {
    double lower;
    double upper;
};

/// Closed-form bracket for |w_n|, valid for n >= 3:
///   e^{-(a+1)^2 (pi^2/6 - 5/4)} a(1-a) 2^a / n^{a+1}  <  |w_n|  <  a 2^{a+1} / (n+1)^{a+1}.
inline WeightBounds weight_bounds(FractionalOrder alpha, std::size_t n) {
    if (n < 3) throw std::invalid_argument("weight_bounds: requires n >= 3");
    const double a = alpha.value();
    const double nd = static_cast<double>(n);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double lower = std::exp(-(a + 1.0) * (a + 1.0) * (pi2 / 6.0 - 1.25)) * a *
                         (1.0 - a) * std::pow(2.0, a) / std::pow(nd, a + 1.0);
    const double upper = a * std::pow(2.0, a + 1.0) / std::pow(nd + 1.0, a + 1.0);
    return {lower, upper};
}

struct TailBounds {
    double lower;
    double exact;
    double upper;
};

/// Bracket and exact value of the weight-tail sum T_n = sum_{k>=n} |w_k|.
/// Because sum_{k>=1} w_k = -1, the tail equals 1 - sum_{k=1}^{n-1} |w_k|,
/// which is evaluated by direct summation of the recursion.  The bracket
///   (1-a)/5 (2/n)^a < T_n < 2 (2/n)^a
/// holds for n >= 2 (and trivially brackets from above at n = 1).
inline TailBounds tail_bounds(FractionalOrder alpha, std::size_t n) {
    if (n < 1) throw std::invalid_argument("tail_bounds: requires n >= 1");
    const double a = alpha.value();
    double partial = 0.0;
    double w = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        w *= 1.0 - (a + 1.0) / static_cast<double>(k);
        partial += -w; // w_k < 0 for k >= 1
    }
    const double scaled = std::pow(2.0 / static_cast<double>(n), a);
    return {(1.0 - a) / 5.0 * scaled, 1.0 - partial, 2.0 * scaled};
}

/// Expansion coefficients c0, c1, c2 of omega_{alpha,p}(z) for shift p >= 0.
inline OmegaCoefficients omega_coefficients(FractionalOrder alpha, double p) {
    if (!(p >= 0.0)) throw std::invalid_argument("omega_coefficients: shift p must be >= 0");
    const double a = alpha.value();
    const double d = p - a / 2.0;
    return {1.0, d, a / 24.0 + 0.5 * d * d};
}

} // namespace fracnum
