#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracnum/caputo.hpp"
#include "fracnum/mittag_leffler.hpp"
#include "fracnum/weights.hpp"

namespace fracnum {

/// Real-valued map on a space-time rectangle.
using ScalarField2D = std::function<double(double, double)>;

/// Time-fractional diffusion problem on [0,1] x [0, final_time] with
/// homogeneous initial and boundary data:
///   d^alpha v / dt^alpha = v_xx + source(x, t),  v(0,t) = v(1,t) = 0, v(x,0) = 0.
/// `exact` is optional and only used for error measurement.
struct SubdiffusionProblem {
    FractionalOrder alpha;
    double final_time = 1.0;
    ScalarField2D source;
    ScalarField2D exact{};
};

/// History cap: the solver keeps every time level in memory.
inline constexpr std::size_t max_space_time_cells = 100'000'000;

/// Compact form of the constant tridiagonal scheme matrices
///   P = I + (1 - alpha/2) eta A,   Q = I - (eta/2) A,
/// where A is the (-1, 2, -1) second-difference matrix of dimension N-1 and
/// eta = tau^alpha / h^2.  P is strictly diagonally dominant by construction.
struct SchemeMatrices {
    std::size_t intervals = 0; ///< N; the matrices act on N-1 interior nodes
    double eta = 0.0;
    double p_diag = 0.0;
    double p_off = 0.0;
    double q_diag = 0.0;
    double q_off = 0.0;
};

/// Interior solution values (nodes x_1 .. x_{N-1}) at one time level.
/// Boundary values are identically zero and never stored.
struct Field1D {
    std::size_t time_index = 0;
    std::vector<double> interior;
};

/// Substitution pair removing nonzero initial and boundary data:
///   forward:  (x, t, u)   ->  u - u0(x) - (1-x)(g_left(t) - g_left(0)) - x (g_right(t) - g_right(0))
///   inverse:  (x, t, ub)  ->  the original u.
struct HomogenizationTransform {
    std::function<double(double, double, double)> forward;
    std::function<double(double, double, double)> inverse;
};

/// Builds the homogenizing substitution for initial profile u0 and boundary
/// traces g_left, g_right.  The data must agree at the domain corners,
/// u0(0) = g_left(0) and u0(1) = g_right(0); otherwise the problem is
/// ill-posed and the mismatch is reported.
inline HomogenizationTransform homogenize(const ScalarField1D& u0, const ScalarField1D& g_left,
                                          const ScalarField1D& g_right) {
    if (!u0 || !g_left || !g_right)
        throw std::invalid_argument("homogenize: all three data functions are required");
    const double gl0 = g_left(0.0);
    const double gr0 = g_right(0.0);
    const double scale = 1.0 + std::abs(gl0) + std::abs(gr0);
    if (std::abs(u0(0.0) - gl0) > 1e-12 * scale || std::abs(u0(1.0) - gr0) > 1e-12 * scale)
        throw std::invalid_argument(
            "homogenize: initial and boundary data disagree at a domain corner");

    auto shift = [u0, g_left, g_right, gl0, gr0](double x, double t) {
        return u0(x) + (1.0 - x) * (g_left(t) - gl0) + x * (g_right(t) - gr0);
    };
    HomogenizationTransform transform;
    transform.forward = [shift](double x, double t, double u) { return u - shift(x, t); };
    transform.inverse = [shift](double x, double t, double ub) { return ub + shift(x, t); };
    return transform;
}

/// Source term of the time-smoothed problem.  Subtracting L1(x) t + L2(x) t^2/2
/// from the solution turns the forcing G into
///   H(x,t) = G(x,t) - L1(x) t^{1-a}/Gamma(2-a) - L2(x) t^{2-a}/Gamma(3-a)
///            + L1''(x) t + L2''(x) t^2 / 2.
/// The second derivatives are caller-supplied; no numerical differentiation
/// is performed.
inline ScalarField2D build_smoothed_source(const ScalarField2D& G, const ScalarField1D& L1x,
                                           const ScalarField1D& L2x, const ScalarField1D& L1xx,
                                           const ScalarField1D& L2xx, FractionalOrder alpha) {
    if (!G) throw std::invalid_argument("build_smoothed_source: missing source");
    if (!L1x || !L2x || !L1xx || !L2xx)
        throw std::invalid_argument(
            "build_smoothed_source: all four smoothing callables are required");
    const double a = alpha.value();
    const double g2 = std::tgamma(2.0 - a);
    const double g3 = std::tgamma(3.0 - a);
    return [=](double x, double t) {
        return G(x, t) - L1x(x) * std::pow(t, 1.0 - a) / g2 -
               L2x(x) * std::pow(t, 2.0 - a) / g3 + L1xx(x) * t + 0.5 * L2xx(x) * t * t;
    };
}

/// Scheme matrices for time step tau and space step h = 1/N.
inline SchemeMatrices assemble_matrices(FractionalOrder alpha, double tau, double h,
                                        std::size_t intervals) {
    if (intervals < 2) throw std::invalid_argument("assemble_matrices: need N >= 2");
    if (!(tau > 0.0 && h > 0.0))
        throw std::invalid_argument("assemble_matrices: steps must be positive");
    const double a = alpha.value();
    const double eta = std::pow(tau, a) / (h * h);
    SchemeMatrices m;
    m.intervals = intervals;
    m.eta = eta;
    m.p_diag = 1.0 + 2.0 * (1.0 - a / 2.0) * eta;
    m.p_off = -(1.0 - a / 2.0) * eta;
    m.q_diag = 1.0 - eta;
    m.q_off = eta / 2.0;
    return m;
}

/// Eigenvalues of the (-1, 2, -1) second-difference matrix of dimension N-1:
///   lambda_k = 2 - 2 cos(k pi / N),  k = 1..N-1, ascending, all in (0, 4).
inline std::vector<double> laplacian_eigenvalues(std::size_t intervals) {
    if (intervals < 2) throw std::invalid_argument("laplacian_eigenvalues: need N >= 2");
    std::vector<double> lambda(intervals - 1);
    for (std::size_t k = 1; k < intervals; ++k)
        lambda[k - 1] =
            2.0 - 2.0 * std::cos(static_cast<double>(k) * std::numbers::pi /
                                 static_cast<double>(intervals));
    return lambda;
}

/// Spectral radius of the one-step propagator P^{-1} Q,
///   max_k |(1 - eta lambda_k / 2) / (1 + (1 - alpha/2) eta lambda_k)|,
/// which is strictly below one for every eta > 0: the implicit scheme is
/// unconditionally stable.
inline double step_spectral_radius(FractionalOrder alpha, double eta, std::size_t intervals) {
    if (!(eta > 0.0)) throw std::invalid_argument("step_spectral_radius: eta must be positive");
    const double a = alpha.value();
    double radius = 0.0;
    for (double lambda : laplacian_eigenvalues(intervals)) {
        const double r =
            std::abs((1.0 - eta * lambda / 2.0) / (1.0 + (1.0 - a / 2.0) * eta * lambda));
        if (r > radius) radius = r;
    }
    return radius;
}

/// Thomas elimination for the constant symmetric tridiagonal P.  The forward
/// pass is precomputed once; each solve is then a single sweep, so the same
/// factorization serves every time step.
class TridiagFactor {
public:
    explicit TridiagFactor(const SchemeMatrices& m)
        : off_(m.p_off), pivots_(m.intervals - 1), upper_(m.intervals - 1) {
        const std::size_t dim = m.intervals - 1;
        double pivot = m.p_diag;
        for (std::size_t i = 0; i < dim; ++i) {
            if (pivot == 0.0) throw std::invalid_argument("TridiagFactor: zero pivot");
            pivots_[i] = pivot;
            upper_[i] = off_ / pivot;
            if (i + 1 < dim) pivot = m.p_diag - off_ * upper_[i];
        }
    }

    std::size_t dimension() const noexcept { return pivots_.size(); }

    std::vector<double> solve(const std::vector<double>& rhs) const {
        const std::size_t dim = pivots_.size();
        if (rhs.size() != dim)
            throw std::invalid_argument("TridiagFactor: right-hand side dimension mismatch");
        std::vector<double> x(dim);
        x[0] = rhs[0] / pivots_[0];
        for (std::size_t i = 1; i < dim; ++i) x[i] = (rhs[i] - off_ * x[i - 1]) / pivots_[i];
        for (std::size_t i = dim - 1; i-- > 0;) x[i] -= upper_[i] * x[i + 1];
        return x;
    }

private:
    double off_;
    std::vector<double> pivots_;
    std::vector<double> upper_;
};

/// One-shot solve of P x = rhs.
inline std::vector<double> tridiag_solve(const SchemeMatrices& m, const std::vector<double>& rhs) {
    return TridiagFactor(m).solve(rhs);
}

/// Source sampling rule of the two scheme variants.
enum class PdeVariant {
    Averaged, ///< (alpha/2) H(x, t_{m-1}) + (1 - alpha/2) H(x, t_m)
    Offgrid,  ///< H(x, t_m - (alpha/2) tau)
};

/// Implicit second-order marching scheme: V_0 = 0 and for m = 1..M
///   P V_m = alpha Q V_{m-1} + sum_{k=2}^{m-1} g_k V_{m-k} + tau^alpha S_m,
/// with g_k = -w_k the positive Grunwald weight magnitudes and S_m sampled
/// per the chosen variant.  Returns all time levels V_0..V_M.
inline std::vector<Field1D> solve_subdiffusion(const SubdiffusionProblem& problem,
                                               PdeVariant variant, std::size_t time_steps,
                                               std::size_t space_intervals) {
    if (time_steps < 1) throw std::invalid_argument("solve_subdiffusion: need M >= 1");
    if (space_intervals < 2) throw std::invalid_argument("solve_subdiffusion: need N >= 2");
    if (!(problem.final_time > 0.0))
        throw std::invalid_argument("solve_subdiffusion: final time must be positive");
    if (!problem.source) throw std::invalid_argument("solve_subdiffusion: missing source");
    if (time_steps * space_intervals > max_space_time_cells)
        throw std::invalid_argument("solve_subdiffusion: grid exceeds the history cap");

    const std::size_t M = time_steps;
    const std::size_t N = space_intervals;
    const std::size_t dim = N - 1;
    const double a = problem.alpha.value();
    const double tau = problem.final_time / static_cast<double>(M);
    const double h = 1.0 / static_cast<double>(N);
    const double tau_a = std::pow(tau, a);

    const SchemeMatrices mats = assemble_matrices(problem.alpha, tau, h, N);
    const TridiagFactor factor(mats);
    const WeightTable w = grunwald_weights(problem.alpha, M);

    std::vector<Field1D> states;
    states.reserve(M + 1);
    states.push_back(Field1D{0, std::vector<double>(dim, 0.0)});

    std::vector<double> rhs(dim);
    for (std::size_t m = 1; m <= M; ++m) {
        const std::vector<double>& prev = states[m - 1].interior;
        // alpha Q V_{m-1}
        for (std::size_t i = 0; i < dim; ++i) {
            double qv = mats.q_diag * prev[i];
            if (i > 0) qv += mats.q_off * prev[i - 1];
            if (i + 1 < dim) qv += mats.q_off * prev[i + 1];
            rhs[i] = a * qv;
        }
        // History: sum_{k=2}^{m-1} g_k V_{m-k}, g_k = -w_k > 0.
        for (std::size_t k = 2; k + 1 <= m; ++k) {
            const double g = -w[k];
            const std::vector<double>& past = states[m - k].interior;
            for (std::size_t i = 0; i < dim; ++i) rhs[i] += g * past[i];
        }
        // Source.
        const double tm = static_cast<double>(m) * tau;
        for (std::size_t i = 0; i < dim; ++i) {
            const double x = static_cast<double>(i + 1) * h;
            const double s = (variant == PdeVariant::Offgrid)
                                 ? problem.source(x, tm - a * tau / 2.0)
                                 : (a / 2.0) * problem.source(x, tm - tau) +
                                       (1.0 - a / 2.0) * problem.source(x, tm);
            rhs[i] += tau_a * s;
        }
        states.push_back(Field1D{m, factor.solve(rhs)});
    }
    return states;
}

/// Separation-of-variables reference solution of the source-free problem
/// with initial profile g and homogeneous boundary values:
///   u(x,t) = 2 sum_{n=1}^{terms} c_n E_alpha(-n^2 pi^2 t^alpha) sin(n pi x),
///   c_n = integral_0^1 g(s) sin(n pi s) ds  (composite Simpson, 1024 panels).
/// Requests where the Mittag-Leffler argument leaves the series guard fail
/// with the guard's diagnostic; reduce `terms` or t in that case.
inline double fourier_ml_reference(const ScalarField1D& g, double alpha, double x, double t,
                                   std::size_t terms) {
    if (!g) throw std::invalid_argument("fourier_ml_reference: missing initial profile");
    if (!(alpha > 0.0))
        throw std::domain_error("fourier_ml_reference: alpha must be positive");
    if (!(t >= 0.0)) throw std::domain_error("fourier_ml_reference: t must be >= 0");
    if (terms < 1) throw std::invalid_argument("fourier_ml_reference: need at least one term");

    constexpr std::size_t panels = 1024; // even, >= 1000
    const double dx = 1.0 / static_cast<double>(panels);
    const double pi = std::numbers::pi;
    const double ta = std::pow(t, alpha);

    double u = 0.0;
    for (std::size_t n = 1; n <= terms; ++n) {
        const double np = static_cast<double>(n) * pi;
        double integral = 0.0;
        for (std::size_t j = 0; j <= panels; ++j) {
            const double s = static_cast<double>(j) * dx;
            const double weight = (j == 0 || j == panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            integral += weight * g(s) * std::sin(np * s);
        }
        integral *= dx / 3.0;
        u += integral * mittag_leffler(alpha, 1.0, -np * np * ta) * std::sin(np * x);
    }
    return 2.0 * u;
}

} // namespace fracnum
