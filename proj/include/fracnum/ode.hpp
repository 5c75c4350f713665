#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>

#include "fracnum/caputo.hpp"
#include "fracnum/weights.hpp"

namespace fracnum {

/// Initial-value problem y^(alpha)(x) + y(x) = f(x) on [0, horizon] with
/// y(0) = 0.  `exact` is optional and only used for error measurement.
struct OdeProblem {
    FractionalOrder alpha;
    double horizon = 1.0;
    ScalarField1D rhs;
    ScalarField1D exact{};
};

/// Derivative values of the solution at the origin, used to subtract the
/// Taylor polynomial that spoils the high-order schemes.
struct SmoothingData {
    double l1 = 0.0;                ///< y'(0)
    double l2 = 0.0;                ///< y''(0)
    std::optional<double> l3{};     ///< y'''(0); present selects the cubic transform
};

/// Marching schemes for the scalar fractional relaxation equation.
enum class OdeScheme {
    FirstOrder,          ///< Grunwald step, O(h)
    L1Scheme,            ///< piecewise-linear quadrature step, O(h^{2-alpha})
    SecondOrderOffgrid,  ///< forcing sampled at x_n - alpha h / 2, O(h^2)
    SecondOrderAveraged, ///< forcing averaged over x_{n-1}, x_n, O(h^2)
    ThirdOrder,          ///< three-node weighted scheme, O(h^3)
};

/// Marches the chosen recurrence over N uniform steps of h = horizon / N and
/// returns the full grid of approximations with y[0] = 0 (and y[1] = 0 for
/// the third-order scheme, whose stencil needs two starting values).
///
/// History sums are evaluated by direct convolution, O(N^2) in total.
inline GridFunction solve_ode(const OdeProblem& problem, OdeScheme scheme, std::size_t steps) {
    const std::size_t min_steps = (scheme == OdeScheme::ThirdOrder) ? 3 : 2;
    if (steps < min_steps)
        throw std::invalid_argument("solve_ode: too few steps for this scheme");
    if (!(problem.horizon > 0.0))
        throw std::invalid_argument("solve_ode: horizon must be positive");
    if (!problem.rhs) throw std::invalid_argument("solve_ode: missing right-hand side");

    const std::size_t N = steps;
    const double a = problem.alpha.value();
    const double h = problem.horizon / static_cast<double>(N);
    const double ha = std::pow(h, a);
    const ScalarField1D& f = problem.rhs;
    const auto x = [h](std::size_t n) { return static_cast<double>(n) * h; };

    std::vector<double> y(N + 1, 0.0);

    switch (scheme) {
        case OdeScheme::FirstOrder: {
            const WeightTable w = grunwald_weights(problem.alpha, N);
            for (std::size_t n = 1; n <= N; ++n) {
                double hist = 0.0;
                for (std::size_t k = 1; k <= n; ++k) hist += w[k] * y[n - k];
                y[n] = (ha * f(x(n)) - hist) / (1.0 + ha);
            }
            break;
        }
        case OdeScheme::L1Scheme: {
            const L1WeightTable c = l1_weights(problem.alpha, N);
            for (std::size_t n = 1; n <= N; ++n) {
                double hist = 0.0;
                for (std::size_t k = 1; k <= n; ++k) hist += c[k] * y[n - k];
                y[n] = (ha * f(x(n)) - hist) / (ha + c[0]);
            }
            break;
        }
        case OdeScheme::SecondOrderOffgrid:
        case OdeScheme::SecondOrderAveraged: {
            const WeightTable w = grunwald_weights(problem.alpha, N);
            const double denom = 1.0 + (1.0 - a / 2.0) * ha;
            const bool offgrid = (scheme == OdeScheme::SecondOrderOffgrid);
            for (std::size_t n = 1; n <= N; ++n) {
                double hist = 0.0;
                for (std::size_t k = 2; k <= n; ++k) hist += w[k] * y[n - k];
                const double forcing =
                    offgrid ? ha * f(x(n) - a * h / 2.0)
                            : ha * ((1.0 - a / 2.0) * f(x(n)) + (a / 2.0) * f(x(n - 1)));
                y[n] = (forcing + (a / 2.0) * (2.0 - ha) * y[n - 1] - hist) / denom;
            }
            break;
        }
        case OdeScheme::ThirdOrder: {
            const WeightTable w = grunwald_weights(problem.alpha, N);
            const double b1 = a * a / 8.0 - 5.0 * a / 24.0;
            const double b2 = 11.0 * a / 12.0 - a * a / 4.0;
            const double b3 = 1.0 - 17.0 * a / 24.0 + a * a / 8.0;
            const double gamma = 1.0 + ha * b3;
            for (std::size_t n = 2; n <= N; ++n) {
                double hist = 0.0;
                for (std::size_t k = 1; k <= n; ++k) hist += w[k] * y[n - k];
                y[n] = (ha * b2 * (f(x(n - 1)) - y[n - 1]) +
                        ha * b1 * (f(x(n - 2)) - y[n - 2]) + ha * b3 * f(x(n)) - hist) /
                       gamma;
            }
            break;
        }
    }
    return GridFunction(0.0, h, std::move(y));
}

/// Forcing plus the cubic polynomial (0, p1, p2, p3) that was subtracted from
/// the solution; feeding the transformed forcing to a solver yields the
/// transformed solution, and `desmooth` restores the original one.
struct SmoothedRhs {
    ScalarField1D rhs;
    std::array<double, 4> subtracted_polynomial;
};

/// Transforms f so that z(x) = y(x) - L1 x - L2/2 x^2 [- L3/6 x^3] solves the
/// same equation with the returned forcing:
///   F(x) = f(x) - L1 x - L2/2 x^2 [- L3/6 x^3]
///          - L1 x^{1-a}/Gamma(2-a) - L2 x^{2-a}/Gamma(3-a) [- L3 x^{3-a}/Gamma(4-a)].
/// The transformed solution has vanishing low-order derivatives at 0, which
/// restores the full order of the second- and third-order schemes.
inline SmoothedRhs build_smoothed_rhs(const ScalarField1D& f, const SmoothingData& data,
                                      FractionalOrder alpha) {
    if (!f) throw std::invalid_argument("build_smoothed_rhs: missing right-hand side");
    const double a = alpha.value();
    const double l1 = data.l1;
    const double l2 = data.l2;
    const double l3 = data.l3.value_or(0.0);
    const bool cubic = data.l3.has_value();
    const double g2 = std::tgamma(2.0 - a);
    const double g3 = std::tgamma(3.0 - a);
    const double g4 = std::tgamma(4.0 - a);

    ScalarField1D transformed = [=](double x) {
        double v = f(x) - l1 * x - 0.5 * l2 * x * x - l1 * std::pow(x, 1.0 - a) / g2 -
                   l2 * std::pow(x, 2.0 - a) / g3;
        if (cubic)
            v -= l3 / 6.0 * x * x * x + l3 * std::pow(x, 3.0 - a) / g4;
        return v;
    };
    return {std::move(transformed), {0.0, l1, 0.5 * l2, cubic ? l3 / 6.0 : 0.0}};
}

/// Adds the subtracted polynomial back onto a computed grid solution.
inline GridFunction desmooth(const GridFunction& z, const std::array<double, 4>& polynomial) {
    GridFunction y = z;
    for (std::size_t n = 0; n < y.size(); ++n) {
        const double x = y.node(n);
        y.values[n] += polynomial[0] + x * (polynomial[1] + x * (polynomial[2] + x * polynomial[3]));
    }
    return y;
}

} // namespace fracnum
