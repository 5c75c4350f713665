#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracnum/ode.hpp"
#include "fracnum/subdiffusion.hpp"

namespace fracnum {

/// One refinement level of an error table.
struct ErrorRow {
    double h = 0.0;
    std::optional<double> tau{};
    double max_error = 0.0;
    std::optional<double> ratio{};  ///< previous error / this error
    std::optional<double> order{};  ///< log2(ratio)
};

struct ErrorTable {
    std::vector<ErrorRow> rows;
};

/// Fills the ratio and order columns from consecutive errors.  The first row
/// has no predecessor and keeps empty ratio/order.
inline void attach_ratios(ErrorTable& table) {
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (i == 0) {
            table.rows[i].ratio.reset();
            table.rows[i].order.reset();
        } else {
            const double r = table.rows[i - 1].max_error / table.rows[i].max_error;
            table.rows[i].ratio = r;
            table.rows[i].order = std::log2(r);
        }
    }
}

enum class PresetKind { Ode, Pde };

/// Time-step rule of a space-time refinement study.
enum class TauRule {
    EqualH, ///< tau = h
    HalfH,  ///< tau = h / 2
};

/// A named, ready-to-run problem with a closed-form exact solution.
///
/// ODE presets provide a factory parametrized by alpha (fixed-alpha presets
/// reject other orders); PDE presets likewise.  `reference_only` marks the
/// analytic demo preset whose "solution" is the Fourier series reference
/// rather than a difference scheme.
struct Preset {
    std::string name;
    PresetKind kind = PresetKind::Ode;
    double default_alpha = 0.5;
    bool alpha_fixed = false;
    bool reference_only = false;
    std::string description;
    std::function<OdeProblem(double)> make_ode;
    std::function<SubdiffusionProblem(double)> make_pde;
    ScalarField1D initial_profile; ///< reference demos: the profile g(x)
    SmoothingData smoothing{};     ///< derivative data of the exact solution at 0
};

namespace detail {

inline std::vector<Preset> make_preset_catalog() {
    std::vector<Preset> catalog;

    {
        Preset p;
        p.name = "eq22";
        p.kind = PresetKind::Ode;
        p.default_alpha = 2.0 / 3.0;
        p.description =
            "y^(a) + y = 2x^{2+a} + Gamma(3+a) x^2 on [0,1]; solution y = 2x^{2+a}.";
        p.make_ode = [](double a) {
            const double g3a = std::tgamma(3.0 + a);
            return OdeProblem{
                FractionalOrder(a), 1.0,
                [a, g3a](double x) { return 2.0 * std::pow(x, 2.0 + a) + g3a * x * x; },
                [a](double x) { return 2.0 * std::pow(x, 2.0 + a); }};
        };
        catalog.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "eq34";
        p.kind = PresetKind::Ode;
        p.default_alpha = 0.25;
        p.smoothing.l3 = 24.0; // z'''(0) of the exact solution
        p.description =
            "z^(a) + z = 4x^3 + 6x^{3+a} + 24x^{3-a}/Gamma(4-a) + Gamma(4+a) x^3; "
            "solution z = 4x^3 + 6x^{3+a} (quadratically smoothed problem).";
        p.make_ode = [](double a) {
            const double g4ma = std::tgamma(4.0 - a);
            const double g4pa = std::tgamma(4.0 + a);
            return OdeProblem{
                FractionalOrder(a), 1.0,
                [=](double x) {
                    return 4.0 * x * x * x + 6.0 * std::pow(x, 3.0 + a) +
                           24.0 * std::pow(x, 3.0 - a) / g4ma + g4pa * x * x * x;
                },
                [a](double x) { return 4.0 * x * x * x + 6.0 * std::pow(x, 3.0 + a); }};
        };
        catalog.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "eq35";
        p.kind = PresetKind::Ode;
        p.default_alpha = 0.75;
        p.smoothing.l3 = 0.0;
        p.description =
            "z^(a) + z = 6x^{3+a} + Gamma(4+a) x^3; solution z = 6x^{3+a} "
            "(cubically smoothed problem, suitable for the third-order scheme).";
        p.make_ode = [](double a) {
            const double g4pa = std::tgamma(4.0 + a);
            return OdeProblem{
                FractionalOrder(a), 1.0,
                [=](double x) { return 6.0 * std::pow(x, 3.0 + a) + g4pa * x * x * x; },
                [a](double x) { return 6.0 * std::pow(x, 3.0 + a); }};
        };
        catalog.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "eq36";
        p.kind = PresetKind::Ode;
        p.default_alpha = 0.25;
        p.alpha_fixed = true;
        p.description =
            "y^(1/4) + y = x^{1/4} + Gamma(5/4); solution y = x^{1/4}. The solution is "
            "not differentiable at 0 and the forcing does not vanish there, so the "
            "high-order schemes degrade to order well below one.";
        p.make_ode = [](double a) {
            const double g54 = std::tgamma(1.25);
            return OdeProblem{FractionalOrder(a), 1.0,
                              [g54](double x) { return std::pow(x, 0.25) + g54; },
                              [](double x) { return std::pow(x, 0.25); }};
        };
        catalog.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "eq37";
        p.kind = PresetKind::Ode;
        p.default_alpha = 0.25;
        p.alpha_fixed = true;
        p.description =
            "y^(1/4) + y = Gamma(9/4) x + x^{5/4}; solution y = x^{5/4}. The second "
            "derivative is unbounded at 0, so second-order schemes drop to roughly "
            "order 1.31. The linear-term coefficient Gamma(9/4) is forced by the "
            "exact solution: with Gamma(5/4) instead, x^{5/4} no longer solves the "
            "equation and measured errors stall near 0.107.";
        p.make_ode = [](double a) {
            const double g94 = std::tgamma(2.25);
            return OdeProblem{FractionalOrder(a), 1.0,
                              [g94](double x) { return g94 * x + std::pow(x, 1.25); },
                              [](double x) { return std::pow(x, 1.25); }};
        };
        catalog.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "eq58";
        p.kind = PresetKind::Pde;
        p.default_alpha = 0.5;
        p.description =
            "d^a v/dt^a = v_xx + Gamma(3+a) x^2 (1-x) t^2 + 4(3x-1) t^{2+a} on "
            "[0,1]x[0,1]; solution v = 2x^2(1-x) t^{2+a}. The sign of the t^{2+a} "
            "source term is fixed by the exact solution: with c(x) = 2x^2(1-x) one "
            "has c''(x) = 4 - 12x, and the source contains -c''(x) t^{2+a}.";
        p.make_pde = [](double a) {
            const double g3a = std::tgamma(3.0 + a);
            auto c = [](double x) { return 2.0 * x * x * (1.0 - x); };
            auto cxx = [](double x) { return 4.0 - 12.0 * x; };
            // Already time-smoothed: both derivative profiles vanish.
            ScalarField2D G = [=](double x, double t) {
                return 0.5 * g3a * c(x) * t * t - cxx(x) * std::pow(t, 2.0 + a);
            };
            ScalarField1D zero = [](double) { return 0.0; };
            return SubdiffusionProblem{
                FractionalOrder(a), 1.0,
                build_smoothed_source(G, zero, zero, zero, zero, FractionalOrder(a)),
                [=](double x, double t) { return c(x) * std::pow(t, 2.0 + a); }};
        };
        catalog.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "fde2-ml";
        p.kind = PresetKind::Pde;
        p.default_alpha = 0.5;
        p.reference_only = true;
        p.description =
            "Source-free diffusion with initial profile g(x) = x^2(x-1) and zero "
            "boundary values; the analytic solution is the Fourier series "
            "2 sum c_n E_a(-n^2 pi^2 t^a) sin(n pi x). Reference surface only; use "
            "plot-data to sample it.";
        p.initial_profile = [](double x) { return x * x * (x - 1.0); };
        catalog.push_back(std::move(p));
    }
    return catalog;
}

} // namespace detail

/// The catalog of worked examples.  Built once, immutable afterwards.
inline const std::vector<Preset>& presets() {
    static const std::vector<Preset> catalog = detail::make_preset_catalog();
    return catalog;
}

inline const Preset& find_preset(std::string_view name) {
    for (const Preset& p : presets())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

/// Resolves the order a study or solve should run at: the preset default when
/// no override is given; fixed-alpha presets reject overrides.
inline double resolve_alpha(const Preset& preset, std::optional<double> requested) {
    if (!requested.has_value()) return preset.default_alpha;
    if (preset.alpha_fixed && *requested != preset.default_alpha)
        throw std::invalid_argument("preset '" + preset.name + "' has a fixed alpha of " +
                                    std::to_string(preset.default_alpha));
    return *requested;
}

/// Maximum absolute deviation from the exact solution over all grid nodes.
inline double max_error(const GridFunction& numeric, const ScalarField1D& exact) {
    if (!exact) throw std::invalid_argument("max_error: missing exact solution");
    double err = 0.0;
    for (std::size_t n = 0; n < numeric.size(); ++n)
        err = std::max(err, std::abs(numeric.values[n] - exact(numeric.node(n))));
    return err;
}

/// Maximum absolute deviation over the interior nodes at the final time level.
inline double max_error(const std::vector<Field1D>& states, const ScalarField2D& exact,
                        double final_time, std::size_t space_intervals) {
    if (!exact) throw std::invalid_argument("max_error: missing exact solution");
    if (states.empty()) throw std::invalid_argument("max_error: empty state history");
    const Field1D& last = states.back();
    const double h = 1.0 / static_cast<double>(space_intervals);
    double err = 0.0;
    for (std::size_t i = 0; i < last.interior.size(); ++i) {
        const double x = static_cast<double>(i + 1) * h;
        err = std::max(err, std::abs(last.interior[i] - exact(x, final_time)));
    }
    return err;
}

namespace detail {

inline std::size_t steps_for(double length, double h, const char* what) {
    const double r = length / h;
    const auto n = static_cast<std::size_t>(std::llround(r));
    if (n < 1 || std::abs(static_cast<double>(n) * h - length) > 1e-9 * length)
        throw std::invalid_argument(std::string(what) +
                                    ": step does not evenly divide the interval");
    return n;
}

inline void check_h_list(std::span<const double> h_list) {
    if (h_list.empty()) throw std::invalid_argument("refinement_study: empty step list");
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        if (!(h_list[i] > 0.0))
            throw std::invalid_argument("refinement_study: steps must be positive");
        if (i > 0 && !(h_list[i] < h_list[i - 1]))
            throw std::invalid_argument("refinement_study: steps must be strictly decreasing");
    }
}

} // namespace detail

/// Error table of an ODE preset under grid refinement.
inline ErrorTable refinement_study(const Preset& preset, double alpha, OdeScheme scheme,
                                   std::span<const double> h_list) {
    if (preset.kind != PresetKind::Ode)
        throw std::invalid_argument("refinement_study: preset '" + preset.name +
                                    "' is not an ODE preset");
    detail::check_h_list(h_list);
    const OdeProblem problem = preset.make_ode(alpha);
    ErrorTable table;
    for (double h : h_list) {
        const std::size_t n = detail::steps_for(problem.horizon, h, "refinement_study");
        const GridFunction y = solve_ode(problem, scheme, n);
        table.rows.push_back(ErrorRow{h, std::nullopt, max_error(y, problem.exact)});
    }
    attach_ratios(table);
    return table;
}

/// Error table of a PDE preset under simultaneous space-time refinement,
/// with tau tied to h by the given rule.  Errors are measured at t = T.
inline ErrorTable refinement_study(const Preset& preset, double alpha, PdeVariant variant,
                                   std::span<const double> h_list, TauRule rule) {
    if (preset.kind != PresetKind::Pde || !preset.make_pde)
        throw std::invalid_argument("refinement_study: preset '" + preset.name +
                                    "' is not a solvable PDE preset");
    detail::check_h_list(h_list);
    const SubdiffusionProblem problem = preset.make_pde(alpha);
    ErrorTable table;
    for (double h : h_list) {
        const double tau = (rule == TauRule::EqualH) ? h : h / 2.0;
        const std::size_t n = detail::steps_for(1.0, h, "refinement_study");
        const std::size_t m = detail::steps_for(problem.final_time, tau, "refinement_study");
        const auto states = solve_subdiffusion(problem, variant, m, n);
        table.rows.push_back(
            ErrorRow{h, tau, max_error(states, problem.exact, problem.final_time, n)});
    }
    attach_ratios(table);
    return table;
}

} // namespace fracnum
