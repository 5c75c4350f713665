// Command-line front end: runs the preset problems (or config-defined ones),
// dumps weight tables, error tables and plot data as CSV or JSON.
//
// Exit codes: 0 success, 2 usage error, 3 solver/domain error, 4 I/O error.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fracnum/fracnum.hpp"

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Formatting: locale-independent, deterministic.

std::string fmt_sig(double v, int digits) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

std::string fmt_solution(double v) { return fmt_sig(v, 17); } // full round trip
std::string fmt_table(double v) { return fmt_sig(v, 6); }     // table presentation

// ---------------------------------------------------------------------------
// Option values: command line wins over config file.

struct Options {
    std::optional<std::string> preset;
    std::optional<std::string> alpha;
    std::optional<std::string> scheme;
    std::optional<std::string> h;
    std::optional<std::string> tau;
    std::optional<std::string> tau_rule;
    std::optional<std::string> count;
    std::optional<std::string> steps_n;
    std::optional<std::string> steps_m;
    std::optional<std::string> terms;
    std::optional<std::string> t_max;
    std::optional<std::string> out;
    std::string format = "csv";
    json config; // flat key/value document; may carry an inline problem spec
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw UsageError("malformed config '" + path + "': " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("malformed config '" + path + "': expected an object");
    return cfg;
}

// Fills fields that were not given on the command line from the config.
void merge_config(Options& o) {
    auto fill = [&](std::optional<std::string>& slot, const char* key) {
        if (slot.has_value() || !o.config.contains(key)) return;
        const json& v = o.config.at(key);
        if (v.is_string())
            slot = v.get<std::string>();
        else if (v.is_number())
            slot = fmt_solution(v.get<double>());
        else
            throw UsageError(std::string("config field '") + key + "' must be a string or number");
    };
    fill(o.preset, "preset");
    fill(o.alpha, "alpha");
    fill(o.scheme, "scheme");
    fill(o.h, "h");
    fill(o.tau, "tau");
    fill(o.tau_rule, "tau-rule");
    fill(o.count, "count");
    fill(o.steps_n, "n");
    fill(o.steps_m, "m");
    fill(o.terms, "terms");
    fill(o.t_max, "t-max");
    fill(o.out, "out");
    if (o.config.contains("format") && o.format == "csv")
        o.format = o.config.at("format").get<std::string>();
}

// ---------------------------------------------------------------------------
// Field parsing.

double parse_number(const std::string& text, const char* field) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("invalid value for ") + field + ": '" + text + "'");
    }
}

// Accepts a decimal or an exact fraction such as "2/3".
double parse_alpha(const std::string& text) {
    const auto slash = text.find('/');
    double v = 0.0;
    if (slash == std::string::npos) {
        v = parse_number(text, "--alpha");
    } else {
        const double num = parse_number(text.substr(0, slash), "--alpha");
        const double den = parse_number(text.substr(slash + 1), "--alpha");
        if (den == 0.0) throw UsageError("invalid value for --alpha: division by zero");
        v = num / den;
    }
    if (!(v > 0.0 && v < 1.0))
        throw UsageError("invalid value for --alpha: must lie in (0, 1), got '" + text + "'");
    return v;
}

std::vector<double> parse_h_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_number(item, "--h"));
    }
    if (out.empty()) throw UsageError("invalid value for --h: empty list");
    return out;
}

fracnum::OdeScheme parse_ode_scheme(const std::string& name) {
    using fracnum::OdeScheme;
    if (name == "first-order") return OdeScheme::FirstOrder;
    if (name == "l1") return OdeScheme::L1Scheme;
    if (name == "second-order-offgrid") return OdeScheme::SecondOrderOffgrid;
    if (name == "second-order-averaged") return OdeScheme::SecondOrderAveraged;
    if (name == "third-order") return OdeScheme::ThirdOrder;
    throw UsageError("invalid value for --scheme: '" + name +
                     "' (expected first-order, l1, second-order-offgrid, "
                     "second-order-averaged or third-order)");
}

fracnum::PdeVariant parse_pde_scheme(const std::string& name) {
    using fracnum::PdeVariant;
    if (name == "averaged") return PdeVariant::Averaged;
    if (name == "offgrid") return PdeVariant::Offgrid;
    throw UsageError("invalid value for --scheme: '" + name +
                     "' (expected averaged or offgrid)");
}

fracnum::TauRule parse_tau_rule(const std::string& name) {
    if (name == "h") return fracnum::TauRule::EqualH;
    if (name == "h/2") return fracnum::TauRule::HalfH;
    throw UsageError("invalid value for --tau-rule: '" + name + "' (expected h or h/2)");
}

// ---------------------------------------------------------------------------
// Inline problem specs: sums of monomials given in the config file.
//   "ode-rhs":    [[c, q], ...]        f(x)   = sum c x^q
//   "pde-source": [[c, p, q], ...]     H(x,t) = sum c x^p t^q

fracnum::ScalarField1D monomial_sum_1d(const json& arr, const char* field) {
    if (!arr.is_array()) throw UsageError(std::string("config field '") + field + "' must be an array");
    std::vector<std::pair<double, double>> terms;
    for (const json& t : arr) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number())
            throw UsageError(std::string("config field '") + field + "' entries must be [coef, power]");
        terms.emplace_back(t[0].get<double>(), t[1].get<double>());
    }
    return [terms](double x) {
        double v = 0.0;
        for (const auto& [c, q] : terms) v += c * std::pow(x, q);
        return v;
    };
}

fracnum::ScalarField2D monomial_sum_2d(const json& arr, const char* field) {
    if (!arr.is_array()) throw UsageError(std::string("config field '") + field + "' must be an array");
    std::vector<std::array<double, 3>> terms;
    for (const json& t : arr) {
        if (!t.is_array() || t.size() != 3)
            throw UsageError(std::string("config field '") + field +
                             "' entries must be [coef, xpower, tpower]");
        terms.push_back({t[0].get<double>(), t[1].get<double>(), t[2].get<double>()});
    }
    return [terms](double x, double t) {
        double v = 0.0;
        for (const auto& e : terms) v += e[0] * std::pow(x, e[1]) * std::pow(t, e[2]);
        return v;
    };
}

bool has_inline_spec(const Options& o) {
    return o.config.contains("ode-rhs") || o.config.contains("pde-source");
}

// Problem source: a catalog preset or an inline spec, never both.
struct ResolvedProblem {
    const fracnum::Preset* preset = nullptr; // null for inline specs
    double alpha = 0.0;
    std::optional<fracnum::OdeProblem> ode;
    std::optional<fracnum::SubdiffusionProblem> pde;
    std::string label; // preset name or "inline"
};

ResolvedProblem resolve_problem(const Options& o, fracnum::PresetKind wanted) {
    const bool inline_spec = has_inline_spec(o);
    if (o.preset.has_value() && inline_spec)
        throw UsageError("give either --preset or an inline problem spec, not both");
    if (!o.preset.has_value() && !inline_spec)
        throw UsageError("missing --preset (or an inline problem spec in the config)");

    ResolvedProblem r;
    if (o.preset.has_value()) {
        const fracnum::Preset* preset = nullptr;
        for (const auto& p : fracnum::presets())
            if (p.name == *o.preset) preset = &p;
        if (!preset) throw UsageError("unknown preset '" + *o.preset + "'");
        if (preset->kind != wanted)
            throw UsageError("preset '" + preset->name + "' is not a " +
                             (wanted == fracnum::PresetKind::Ode ? std::string("solve-ode/ode")
                                                                 : std::string("solve-pde/pde")) +
                             " preset");
        std::optional<double> requested;
        if (o.alpha.has_value()) requested = parse_alpha(*o.alpha);
        try {
            r.alpha = fracnum::resolve_alpha(*preset, requested);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        r.preset = preset;
        r.label = preset->name;
        if (preset->reference_only)
            throw UsageError("preset '" + preset->name +
                             "' is an analytic reference surface; use plot-data");
        if (wanted == fracnum::PresetKind::Ode)
            r.ode = preset->make_ode(r.alpha);
        else
            r.pde = preset->make_pde(r.alpha);
        return r;
    }

    // Inline spec.
    if (!o.alpha.has_value()) throw UsageError("inline problem specs require --alpha");
    r.alpha = parse_alpha(*o.alpha);
    r.label = "inline";
    if (wanted == fracnum::PresetKind::Ode) {
        if (!o.config.contains("ode-rhs"))
            throw UsageError("inline ODE spec requires config field 'ode-rhs'");
        fracnum::OdeProblem problem{fracnum::FractionalOrder(r.alpha),
                                    o.config.value("horizon", 1.0),
                                    monomial_sum_1d(o.config.at("ode-rhs"), "ode-rhs")};
        if (o.config.contains("ode-exact"))
            problem.exact = monomial_sum_1d(o.config.at("ode-exact"), "ode-exact");
        r.ode = std::move(problem);
    } else {
        if (!o.config.contains("pde-source"))
            throw UsageError("inline PDE spec requires config field 'pde-source'");
        fracnum::SubdiffusionProblem problem{fracnum::FractionalOrder(r.alpha),
                                             o.config.value("final-time", 1.0),
                                             monomial_sum_2d(o.config.at("pde-source"), "pde-source")};
        if (o.config.contains("pde-exact"))
            problem.exact = monomial_sum_2d(o.config.at("pde-exact"), "pde-exact");
        r.pde = std::move(problem);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Output sink.

void write_output(const Options& o, const std::string& payload) {
    if (!o.out.has_value()) {
        std::cout << payload;
        if (!std::cout) throw IoError("failed writing to standard output");
        return;
    }
    std::ofstream f(*o.out, std::ios::binary);
    if (!f) throw IoError("cannot open output path '" + *o.out + "'");
    f << payload;
    f.flush();
    if (!f) throw IoError("failed writing output path '" + *o.out + "'");
}

void check_format(const Options& o) {
    if (o.format != "csv" && o.format != "json")
        throw UsageError("invalid value for --format: '" + o.format + "' (expected csv or json)");
}

// ---------------------------------------------------------------------------
// Modes.

int run_weights(Options& o) {
    check_format(o);
    if (!o.alpha.has_value()) throw UsageError("weights: missing --alpha");
    if (!o.count.has_value()) throw UsageError("weights: missing --count");
    const double a = parse_alpha(*o.alpha);
    const double countd = parse_number(*o.count, "--count");
    if (countd < 1 || countd != std::floor(countd))
        throw UsageError("invalid value for --count: must be a positive integer");
    const auto table =
        fracnum::grunwald_weights(fracnum::FractionalOrder(a), static_cast<std::size_t>(countd));

    if (o.format == "csv") {
        std::string out = "n,weight\n";
        for (std::size_t n = 0; n < table.size(); ++n)
            out += std::to_string(n) + "," + fmt_solution(table[n]) + "\n";
        write_output(o, out);
    } else {
        json j{{"mode", "weights"}, {"alpha", a}, {"weights", table.values()}};
        write_output(o, j.dump(2) + "\n");
    }
    return 0;
}

std::size_t steps_from_options(double length, const char* h_flag,
                               const std::optional<std::string>& h,
                               const std::optional<std::string>& n, const char* n_flag) {
    if (h.has_value() && n.has_value()) {
        const double hv = parse_number(*h, h_flag);
        const double nv = parse_number(*n, n_flag);
        if (std::abs(nv * hv - length) > 1e-9 * length)
            throw UsageError(std::string("inconsistent grid flags: ") + h_flag + " * " + n_flag +
                             " must equal the interval length");
        return static_cast<std::size_t>(nv);
    }
    if (h.has_value()) {
        const double hv = parse_number(*h, h_flag);
        if (!(hv > 0.0)) throw UsageError(std::string("invalid value for ") + h_flag);
        const double steps = length / hv;
        const auto rounded = std::llround(steps);
        if (rounded < 1 || std::abs(static_cast<double>(rounded) * hv - length) > 1e-9 * length)
            throw UsageError(std::string(h_flag) + " does not evenly divide the interval");
        return static_cast<std::size_t>(rounded);
    }
    if (n.has_value()) {
        const double nv = parse_number(*n, n_flag);
        if (nv < 1 || nv != std::floor(nv))
            throw UsageError(std::string("invalid value for ") + n_flag +
                             ": must be a positive integer");
        return static_cast<std::size_t>(nv);
    }
    throw UsageError(std::string("missing grid flag: give ") + h_flag + " or " + n_flag);
}

std::string solution_csv(const fracnum::GridFunction& y, const fracnum::ScalarField1D& exact) {
    std::string out = exact ? "x,numeric,exact\n" : "x,numeric\n";
    for (std::size_t i = 0; i < y.size(); ++i) {
        out += fmt_solution(y.node(i)) + "," + fmt_solution(y.values[i]);
        if (exact) out += "," + fmt_solution(exact(y.node(i)));
        out += "\n";
    }
    return out;
}

json solution_json(const fracnum::GridFunction& y, const fracnum::ScalarField1D& exact) {
    json rows = json::array();
    for (std::size_t i = 0; i < y.size(); ++i) {
        json row{{"x", y.node(i)}, {"numeric", y.values[i]}};
        if (exact) row["exact"] = exact(y.node(i));
        rows.push_back(row);
    }
    return rows;
}

int run_solve_ode(Options& o) {
    check_format(o);
    ResolvedProblem r = resolve_problem(o, fracnum::PresetKind::Ode);
    if (!o.scheme.has_value()) throw UsageError("solve-ode: missing --scheme");
    const fracnum::OdeScheme scheme = parse_ode_scheme(*o.scheme);
    const std::size_t steps =
        steps_from_options(r.ode->horizon, "--h", o.h, o.steps_n, "--n");

    const fracnum::GridFunction y = fracnum::solve_ode(*r.ode, scheme, steps);
    if (o.format == "csv") {
        write_output(o, solution_csv(y, r.ode->exact));
    } else {
        json j{{"mode", "solve-ode"}, {"problem", r.label},     {"alpha", r.alpha},
               {"scheme", *o.scheme}, {"h", y.step},            {"rows", solution_json(y, r.ode->exact)}};
        write_output(o, j.dump(2) + "\n");
    }
    return 0;
}

int run_solve_pde(Options& o) {
    check_format(o);
    ResolvedProblem r = resolve_problem(o, fracnum::PresetKind::Pde);
    if (!o.scheme.has_value()) throw UsageError("solve-pde: missing --scheme");
    const fracnum::PdeVariant variant = parse_pde_scheme(*o.scheme);
    const std::size_t n = steps_from_options(1.0, "--h", o.h, o.steps_n, "--n");
    const std::size_t m =
        steps_from_options(r.pde->final_time, "--tau", o.tau, o.steps_m, "--m");

    const auto states = fracnum::solve_subdiffusion(*r.pde, variant, m, n);
    const auto& last = states.back().interior;
    const double h = 1.0 / static_cast<double>(n);
    const double T = r.pde->final_time;

    if (o.format == "csv") {
        std::string out = r.pde->exact ? "x,numeric,exact\n" : "x,numeric\n";
        for (std::size_t i = 0; i < last.size(); ++i) {
            const double x = static_cast<double>(i + 1) * h;
            out += fmt_solution(x) + "," + fmt_solution(last[i]);
            if (r.pde->exact) out += "," + fmt_solution(r.pde->exact(x, T));
            out += "\n";
        }
        write_output(o, out);
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < last.size(); ++i) {
            const double x = static_cast<double>(i + 1) * h;
            json row{{"x", x}, {"numeric", last[i]}};
            if (r.pde->exact) row["exact"] = r.pde->exact(x, T);
            rows.push_back(row);
        }
        json j{{"mode", "solve-pde"}, {"problem", r.label}, {"alpha", r.alpha},
               {"scheme", *o.scheme}, {"h", h},             {"tau", T / static_cast<double>(m)},
               {"t", T},              {"rows", rows}};
        write_output(o, j.dump(2) + "\n");
    }
    return 0;
}

int run_study(Options& o) {
    check_format(o);
    if (!o.h.has_value()) throw UsageError("study: missing --h (comma-separated list)");
    const std::vector<double> h_list = parse_h_list(*o.h);
    if (!o.scheme.has_value()) throw UsageError("study: missing --scheme");

    // The scheme name decides whether this is an ODE or a PDE study.
    const bool pde_scheme = (*o.scheme == "averaged" || *o.scheme == "offgrid");
    fracnum::ErrorTable table;
    if (!pde_scheme) {
        const fracnum::OdeScheme scheme = parse_ode_scheme(*o.scheme);
        ResolvedProblem r = resolve_problem(o, fracnum::PresetKind::Ode);
        if (!r.ode->exact) throw UsageError("study requires an exact solution");
        if (r.preset) {
            table = fracnum::refinement_study(*r.preset, r.alpha, scheme, h_list);
        } else {
            for (double h : h_list) {
                const std::size_t n = static_cast<std::size_t>(std::llround(r.ode->horizon / h));
                const auto y = fracnum::solve_ode(*r.ode, scheme, n);
                table.rows.push_back({h, std::nullopt, fracnum::max_error(y, r.ode->exact)});
            }
            fracnum::attach_ratios(table);
        }
    } else {
        const fracnum::PdeVariant variant = parse_pde_scheme(*o.scheme);
        const fracnum::TauRule rule =
            o.tau_rule.has_value() ? parse_tau_rule(*o.tau_rule) : fracnum::TauRule::EqualH;
        ResolvedProblem r = resolve_problem(o, fracnum::PresetKind::Pde);
        if (!r.pde->exact) throw UsageError("study requires an exact solution");
        if (r.preset) {
            table = fracnum::refinement_study(*r.preset, r.alpha, variant, h_list, rule);
        } else {
            for (double h : h_list) {
                const double tau = (rule == fracnum::TauRule::EqualH) ? h : h / 2.0;
                const std::size_t n = static_cast<std::size_t>(std::llround(1.0 / h));
                const std::size_t m =
                    static_cast<std::size_t>(std::llround(r.pde->final_time / tau));
                const auto states = fracnum::solve_subdiffusion(*r.pde, variant, m, n);
                table.rows.push_back({h, tau,
                                      fracnum::max_error(states, r.pde->exact,
                                                         r.pde->final_time, n)});
            }
            fracnum::attach_ratios(table);
        }
    }

    if (o.format == "csv") {
        std::string out = pde_scheme ? "h,tau,error,ratio,order\n" : "h,error,ratio,order\n";
        for (const auto& row : table.rows) {
            out += fmt_table(row.h);
            if (pde_scheme) out += "," + fmt_table(*row.tau);
            out += "," + fmt_table(row.max_error);
            out += ",";
            if (row.ratio) out += fmt_table(*row.ratio);
            out += ",";
            if (row.order) out += fmt_table(*row.order);
            out += "\n";
        }
        write_output(o, out);
    } else {
        json rows = json::array();
        for (const auto& row : table.rows) {
            json jr{{"h", row.h}, {"error", row.max_error}};
            if (row.tau) jr["tau"] = *row.tau;
            if (row.ratio) jr["ratio"] = *row.ratio;
            if (row.order) jr["order"] = *row.order;
            rows.push_back(jr);
        }
        json j{{"mode", "study"}, {"scheme", *o.scheme}, {"rows", rows}};
        write_output(o, j.dump(2) + "\n");
    }
    return 0;
}

int run_plot_data(Options& o) {
    check_format(o);

    // The analytic reference surface is handled apart from the solvers.
    if (o.preset.has_value() && *o.preset == "fde2-ml") {
        const fracnum::Preset& preset = fracnum::find_preset("fde2-ml");
        std::optional<double> requested;
        if (o.alpha.has_value()) requested = parse_alpha(*o.alpha);
        const double alpha = fracnum::resolve_alpha(preset, requested);
        const double t_max = o.t_max.has_value() ? parse_number(*o.t_max, "--t-max") : 0.05;
        if (!(t_max > 0.0)) throw UsageError("invalid value for --t-max: must be positive");
        const double hx = o.h.has_value() ? parse_number(*o.h, "--h") : 0.02;
        const double ht = o.tau.has_value() ? parse_number(*o.tau, "--tau") : t_max / 40.0;
        // Default term count: as many Fourier modes as the Mittag-Leffler
        // evaluation accepts at the latest requested time (probed, since the
        // usable range depends on alpha), capped at 64.
        std::size_t terms;
        if (o.terms.has_value()) {
            const double tv = parse_number(*o.terms, "--terms");
            if (tv < 1 || tv != std::floor(tv))
                throw UsageError("invalid value for --terms: must be a positive integer");
            terms = static_cast<std::size_t>(tv);
        } else {
            const double pi = std::numbers::pi;
            const double ta = std::pow(t_max, alpha);
            terms = 1;
            for (std::size_t n = 1; n <= 64; ++n) {
                try {
                    fracnum::mittag_leffler(alpha, 1.0,
                                            -static_cast<double>(n * n) * pi * pi * ta);
                    terms = n;
                } catch (const std::domain_error&) {
                    break;
                }
            }
        }

        const auto nx = static_cast<std::size_t>(std::llround(1.0 / hx));
        const auto nt = static_cast<std::size_t>(std::llround(t_max / ht));
        if (nx < 1 || nt < 1) throw UsageError("plot-data: grid too coarse");
        std::string out = "x,t,u\n";
        json rows = json::array();
        for (std::size_t j = 0; j <= nt; ++j) {
            const double t = static_cast<double>(j) * t_max / static_cast<double>(nt);
            for (std::size_t i = 0; i <= nx; ++i) {
                const double x = static_cast<double>(i) / static_cast<double>(nx);
                const double u =
                    fracnum::fourier_ml_reference(preset.initial_profile, alpha, x, t, terms);
                if (o.format == "csv")
                    out += fmt_solution(x) + "," + fmt_solution(t) + "," + fmt_solution(u) + "\n";
                else
                    rows.push_back(json{{"x", x}, {"t", t}, {"u", u}});
            }
        }
        if (o.format == "csv") {
            write_output(o, out);
        } else {
            json j{{"mode", "plot-data"}, {"problem", "fde2-ml"}, {"alpha", alpha},
                   {"terms", terms},      {"rows", rows}};
            write_output(o, j.dump(2) + "\n");
        }
        return 0;
    }

    // Difference-scheme plots: reuse the solve paths and their exact columns.
    const bool pde = o.scheme.has_value() &&
                     (*o.scheme == "averaged" || *o.scheme == "offgrid");
    return pde ? run_solve_pde(o) : run_solve_ode(o);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracnum: fractional-order difference schemes and convergence studies"};
    app.require_subcommand(0, 1);
    // The grid flag is literally "--h", so help must not claim the short -h.
    app.set_help_flag("--help", "print help and exit");

    std::string config_path;
    app.add_option("--config", config_path, "flat JSON key/value config; flags override it");

    Options opt;
    std::string alpha_s, preset_s, scheme_s, h_s, tau_s, tau_rule_s, count_s, n_s, m_s, terms_s,
        tmax_s, out_s, format_s;

    auto add_common = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "print help and exit");
        sub->add_option("--alpha", alpha_s, "fractional order in (0,1); decimal or fraction like 2/3");
        sub->add_option("--preset", preset_s, "named problem from the catalog");
        sub->add_option("--scheme", scheme_s,
                        "first-order | l1 | second-order-offgrid | second-order-averaged | "
                        "third-order (ODE); averaged | offgrid (PDE)");
        sub->add_option("--h", h_s, "space/grid step; comma-separated list for studies");
        sub->add_option("--tau", tau_s, "time step (PDE)");
        sub->add_option("--tau-rule", tau_rule_s, "study time-step rule: h or h/2");
        sub->add_option("--count", count_s, "number of weights to emit");
        sub->add_option("--n", n_s, "number of space intervals (alternative to --h)");
        sub->add_option("--m", m_s, "number of time steps (alternative to --tau)");
        sub->add_option("--terms", terms_s, "Fourier terms for the reference surface");
        sub->add_option("--t-max", tmax_s, "latest time of the reference surface");
        sub->add_option("--out", out_s, "output path (default: stdout)");
        sub->add_option("--format", format_s, "csv (default) or json");
        sub->add_option("--config", config_path, "flat JSON key/value config; flags override it");
    };

    CLI::App* weights = app.add_subcommand("weights", "dump a binomial weight table");
    CLI::App* solve_ode = app.add_subcommand("solve-ode", "march one scalar fractional problem");
    CLI::App* solve_pde =
        app.add_subcommand("solve-pde", "run the implicit diffusion scheme; dumps the final slice");
    CLI::App* study = app.add_subcommand("study", "grid-refinement error/order table");
    CLI::App* plot =
        app.add_subcommand("plot-data", "solution columns for external plotting");
    for (CLI::App* sub : {weights, solve_ode, solve_pde, study, plot}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (!config_path.empty()) opt.config = load_config(config_path);

        auto grab = [](CLI::App* sub, const char* name, const std::string& value,
                       std::optional<std::string>& slot) {
            if (sub->count(name) > 0) slot = value;
        };
        std::string mode;
        CLI::App* active = nullptr;
        for (CLI::App* sub : {weights, solve_ode, solve_pde, study, plot})
            if (sub->parsed()) active = sub;
        if (active) {
            mode = active->get_name();
            grab(active, "--alpha", alpha_s, opt.alpha);
            grab(active, "--preset", preset_s, opt.preset);
            grab(active, "--scheme", scheme_s, opt.scheme);
            grab(active, "--h", h_s, opt.h);
            grab(active, "--tau", tau_s, opt.tau);
            grab(active, "--tau-rule", tau_rule_s, opt.tau_rule);
            grab(active, "--count", count_s, opt.count);
            grab(active, "--n", n_s, opt.steps_n);
            grab(active, "--m", m_s, opt.steps_m);
            grab(active, "--terms", terms_s, opt.terms);
            grab(active, "--t-max", tmax_s, opt.t_max);
            grab(active, "--out", out_s, opt.out);
            if (active->count("--format") > 0) opt.format = format_s;
        } else if (opt.config.contains("mode")) {
            mode = opt.config.at("mode").get<std::string>();
        } else {
            std::cerr << "error: no mode given; use a subcommand or a config with \"mode\"\n"
                      << app.help();
            return 2;
        }
        merge_config(opt);

        if (mode == "weights") return run_weights(opt);
        if (mode == "solve-ode") return run_solve_ode(opt);
        if (mode == "solve-pde") return run_solve_pde(opt);
        if (mode == "study") return run_study(opt);
        if (mode == "plot-data") return run_plot_data(opt);
        throw UsageError("unknown mode '" + mode + "'");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
