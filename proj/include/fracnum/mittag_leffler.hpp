#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace fracnum {

/// Argument triple of the two-parameter Mittag-Leffler function
/// E_{alpha,beta}(z) = sum_{n>=0} z^n / Gamma(alpha n + beta).
struct MittagLefflerParams {
    double alpha;
    double beta = 1.0;
    double z = 0.0;
};

/// Series evaluation is only supported for moderate arguments.
inline constexpr double mittag_leffler_max_abs_z = 50.0;

namespace detail {

/// Scaled complementary error function e^{x^2} erfc(x) for x >= 0.
/// The direct product is stable up to x ~ 25 (both factors stay inside the
/// double range); beyond that the asymptotic expansion converges to machine
/// precision within a dozen terms.
inline double erfcx(double x) {
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 20; ++k) {
        term *= -static_cast<double>(2 * k - 1) * inv2x2;
        sum += term;
        if (std::abs(term) < 1e-18 * sum) break;
    }
    return sum / (x * std::sqrt(std::numbers::pi));
}

/// Plain series summation of E_{alpha,beta}(z), accumulated in binary128 so
/// the alternating-series cancellation at moderately negative z does not eat
/// into the double-precision result.  Terms come from the log-space form
/// exp(n log|z| - lgamma(alpha n + beta)), which cannot overflow prematurely.
inline double mittag_leffler_series(double alpha, double beta, double z) {
    using quad = boost::multiprecision::cpp_bin_float_quad;

    if (z == 0.0) return 1.0 / std::tgamma(beta);

    const std::size_t max_terms = 100'000;
    // Terms peak near n* = |z|^{1/alpha} / alpha; refuse series that would
    // need more terms than the cap before they start decaying.
    const double abs_z = std::abs(z);
    if (abs_z > 1.0) {
        const double peak = std::pow(abs_z, 1.0 / alpha) / alpha;
        if (peak > static_cast<double>(max_terms))
            throw std::domain_error(
                "mittag_leffler: series needs too many terms at this (alpha, z); "
                "use a smaller argument");
    }

    const quad log_abs_z = log(quad(abs_z));
    const quad qalpha(alpha), qbeta(beta);
    quad sum = 0;
    double max_log_term = -std::numeric_limits<double>::infinity();
    bool converged = false;

    for (std::size_t n = 0; n < max_terms; ++n) {
        const quad log_term =
            static_cast<double>(n) * log_abs_z - boost::math::lgamma(qalpha * n + qbeta);
        quad term = exp(log_term);
        if (z < 0.0 && (n % 2 == 1)) term = -term;
        const double lt = static_cast<double>(log_term);
        if (lt > max_log_term) max_log_term = lt;
        // Stop once the incoming term is negligible against the partial sum.
        if (n > 0 && abs(term) < quad(1e-15) * (1 + abs(sum))) {
            converged = true;
            break;
        }
        sum += term;
    }
    if (!converged)
        throw std::domain_error(
            "mittag_leffler: series did not converge; use a smaller argument");

    const double result = static_cast<double>(sum);
    if (!std::isfinite(result))
        throw std::domain_error(
            "mittag_leffler: result is not representable in double precision");
    // The summation carries ~34 significant digits; if the largest term
    // towers over the result by more than ~21 orders of magnitude the digits
    // that survive cancellation are no longer trustworthy.
    const double cancellation =
        std::exp(max_log_term - std::log(std::abs(result) + 1e-300));
    if (!(cancellation < 1e21))
        throw std::domain_error(
            "mittag_leffler: catastrophic cancellation at this (alpha, z); "
            "use a smaller argument");
    return result;
}

} // namespace detail

/// E_{alpha,beta}(z) by direct series summation, truncated when the next
/// term drops below 1e-15 (1 + |partial sum|).  Arguments are limited to
/// |z| <= 50.  For alpha = 1/2, beta = 1 and z <= 0 the identity
/// E_{1/2}(-x) = e^{x^2} erfc(x) is used instead, which stays accurate where
/// the series cancels catastrophically.
inline double mittag_leffler(const MittagLefflerParams& params) {
    if (!(params.alpha > 0.0))
        throw std::domain_error("mittag_leffler: alpha must be positive");
    if (!(params.beta > 0.0))
        throw std::domain_error("mittag_leffler: beta must be positive");
    if (!(std::abs(params.z) <= mittag_leffler_max_abs_z))
        throw std::domain_error(
            "mittag_leffler: |z| exceeds the series guard (50); use a smaller argument");

    if (params.alpha == 0.5 && params.beta == 1.0 && params.z < 0.0)
        return detail::erfcx(-params.z);
    return detail::mittag_leffler_series(params.alpha, params.beta, params.z);
}

inline double mittag_leffler(double alpha, double beta, double z) {
    return mittag_leffler(MittagLefflerParams{alpha, beta, z});
}

} // namespace fracnum
