#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "fracnum/fracnum.hpp"

using testsupport::run_cli;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

} // namespace

TEST_CASE("weights subcommand emits the first three weights") {
    const auto r = run_cli("weights --alpha 0.5 --count 2");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "n,weight");
    CHECK(lines[1] == "0,1");
    CHECK(lines[2] == "1,-0.5");
    CHECK(lines[3] == "2,-0.125");
}

TEST_CASE("fractional alpha strings are accepted") {
    const auto dec = run_cli("weights --alpha 0.5 --count 4");
    const auto frac = run_cli("weights --alpha 1/2 --count 4");
    REQUIRE(dec.exit_code == 0);
    REQUIRE(frac.exit_code == 0);
    CHECK(dec.out == frac.out);
}

TEST_CASE("solve-ode dump starts at zero and round-trips bit-exactly") {
    const auto r = run_cli("solve-ode --preset eq22 --scheme first-order --h 0.5");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 4); // header + 3 nodes
    CHECK(lines[0] == "x,numeric,exact");
    CHECK(split_csv(lines[1])[1] == "0");

    const auto problem = fracnum::find_preset("eq22").make_ode(2.0 / 3.0);
    const auto y = fracnum::solve_ode(problem, fracnum::OdeScheme::FirstOrder, 2);
    for (std::size_t n = 0; n <= 2; ++n) {
        const double parsed = std::stod(split_csv(lines[n + 1])[1]);
        CHECK(parsed == y.values[n]); // 17 significant digits: exact round trip
    }
}

TEST_CASE("repeated study runs are byte-identical") {
    const std::string args =
        "study --preset eq22 --alpha 2/3 --scheme second-order-offgrid --h 0.1,0.05";
    const auto first = run_cli(args);
    const auto second = run_cli(args);
    REQUIRE(first.exit_code == 0);
    REQUIRE(second.exit_code == 0);
    CHECK(first.out == second.out);
    CHECK(first.out.find("0.00146501") != std::string::npos);
}

TEST_CASE("study CSV layout") {
    const auto r = run_cli("study --preset eq58 --scheme offgrid --h 0.1,0.05 --tau-rule h/2");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "h,tau,error,ratio,order");
    const auto first = split_csv(lines[1]);
    CHECK(first[0] == "0.1");
    CHECK(first[1] == "0.05");
    // Ratio and order are empty on the first row: the line ends ",,".
    CHECK(lines[1].substr(lines[1].size() - 2) == ",,");
    const auto second = split_csv(lines[2]);
    REQUIRE(second.size() == 5);
    CHECK(second[3] != "");
    CHECK(second[4] != "");
}

TEST_CASE("usage errors name the offending field and exit 2") {
    struct Case {
        const char* args;
        const char* needle;
    };
    const Case cases[] = {
        {"weights --alpha 1.5 --count 2", "--alpha"},
        {"weights --alpha abc --count 2", "--alpha"},
        {"weights --alpha 0.5", "--count"},
        {"solve-ode --preset nope --scheme l1 --h 0.1", "unknown preset"},
        {"solve-ode --preset eq22 --h 0.1", "--scheme"},
        {"solve-ode --preset eq22 --scheme turbo --h 0.1", "--scheme"},
        {"solve-ode --preset eq36 --alpha 0.5 --scheme l1 --h 0.1", "fixed alpha"},
        {"solve-pde --preset fde2-ml --scheme offgrid --h 0.1 --tau 0.1", "plot-data"},
        {"solve-ode --preset eq22 --scheme l1 --h 0.3", "divide"},
        {"study --preset eq22 --scheme l1 --h 0.1 --format yaml", "--format"},
    };
    for (const Case& c : cases) {
        INFO(c.args);
        const auto r = run_cli(c.args);
        CHECK(r.exit_code == 2);
        CHECK(r.err.find(c.needle) != std::string::npos);
    }
}

TEST_CASE("solver-domain errors exit 3") {
    const auto increasing = run_cli("study --preset eq22 --scheme l1 --h 0.05,0.1");
    CHECK(increasing.exit_code == 3);
    const auto guard = run_cli("plot-data --preset fde2-ml --t-max 1 --terms 10");
    CHECK(guard.exit_code == 3);
    CHECK(guard.err.find("smaller argument") != std::string::npos);
}

TEST_CASE("unwritable output path exits 4") {
    const auto r = run_cli("weights --alpha 0.5 --count 2 --out /nonexistent_dir_zz/w.csv");
    CHECK(r.exit_code == 4);
    CHECK(r.err.find("/nonexistent_dir_zz/w.csv") != std::string::npos);
}

TEST_CASE("config file drives a run and flags override it") {
    const auto dir = testsupport::test_scratch_dir();
    const auto cfg = dir / "study.json";
    {
        std::ofstream f(cfg);
        f << R"({"mode":"study","preset":"eq22","alpha":"2/3",)"
          << R"("scheme":"second-order-offgrid","h":"0.1,0.05"})";
    }
    const auto from_config = run_cli("--config " + cfg.string());
    REQUIRE(from_config.exit_code == 0);
    CHECK(lines_of(from_config.out).size() == 3);
    CHECK(from_config.out.find("0.00146501") != std::string::npos);

    const auto overridden = run_cli("study --config " + cfg.string() + " --h 0.1");
    REQUIRE(overridden.exit_code == 0);
    CHECK(lines_of(overridden.out).size() == 2);

    const auto missing = run_cli("--config " + (dir / "absent.json").string());
    CHECK(missing.exit_code == 4);
    const auto malformed_path = dir / "bad.json";
    {
        std::ofstream f(malformed_path);
        f << "not json";
    }
    const auto malformed = run_cli("--config " + malformed_path.string());
    CHECK(malformed.exit_code == 2);
    CHECK(malformed.err.find("malformed config") != std::string::npos);
}

TEST_CASE("inline problem spec from a config file") {
    const auto dir = testsupport::test_scratch_dir();
    const auto cfg = dir / "inline.json";
    {
        // Manufactured problem: y = x^2 solves y^(1/2) + y = x^2 + 2 x^{3/2} / Gamma(5/2).
        std::ofstream f(cfg);
        f << R"({"alpha":0.5,"ode-rhs":[[1,2],[1.5045055561273502,1.5]],"ode-exact":[[1,2]]})";
    }
    const auto study = run_cli("study --config " + cfg.string() + " --scheme l1 --h 0.1,0.05");
    REQUIRE(study.exit_code == 0);
    const auto rows = lines_of(study.out);
    REQUIRE(rows.size() == 3);
    CHECK(std::stod(split_csv(rows[2])[1]) < std::stod(split_csv(rows[1])[1]));

    const auto both = run_cli("study --config " + cfg.string() +
                              " --preset eq22 --scheme l1 --h 0.1");
    CHECK(both.exit_code == 2);
    CHECK(both.err.find("not both") != std::string::npos);
}

TEST_CASE("step counts may replace step sizes") {
    const auto by_h = run_cli("solve-ode --preset eq22 --scheme l1 --h 0.05");
    const auto by_n = run_cli("solve-ode --preset eq22 --scheme l1 --n 20");
    REQUIRE(by_h.exit_code == 0);
    REQUIRE(by_n.exit_code == 0);
    CHECK(by_h.out == by_n.out);

    const auto inconsistent = run_cli("solve-ode --preset eq22 --scheme l1 --h 0.1 --n 20");
    CHECK(inconsistent.exit_code == 2);
    CHECK(inconsistent.err.find("inconsistent grid flags") != std::string::npos);
    const auto fractional = run_cli("solve-ode --preset eq22 --scheme l1 --n 2.5");
    CHECK(fractional.exit_code == 2);
}

TEST_CASE("plot-data emits solution columns") {
    const auto ode = run_cli("plot-data --preset eq22 --scheme l1 --h 0.25");
    REQUIRE(ode.exit_code == 0);
    const auto ode_lines = lines_of(ode.out);
    CHECK(ode_lines[0] == "x,numeric,exact");
    CHECK(ode_lines.size() == 6);

    const auto pde = run_cli("plot-data --preset eq58 --scheme offgrid --h 0.25 --tau 0.25");
    REQUIRE(pde.exit_code == 0);
    CHECK(lines_of(pde.out)[0] == "x,numeric,exact");
    CHECK(lines_of(pde.out).size() == 4); // 3 interior nodes

    const auto surface = run_cli("plot-data --preset fde2-ml --h 0.25 --tau 0.0125 --t-max 0.05");
    REQUIRE(surface.exit_code == 0);
    const auto rows = lines_of(surface.out);
    CHECK(rows[0] == "x,t,u");
    CHECK(rows.size() == 1 + 5 * 5);
}

TEST_CASE("json output is produced and carries the mode") {
    const auto r = run_cli("weights --alpha 0.5 --count 2 --format json");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"mode\": \"weights\"") != std::string::npos);
    CHECK(r.out.find("-0.125") != std::string::npos);

    const auto study = run_cli(
        "study --preset eq22 --scheme second-order-offgrid --h 0.1,0.05 --format json");
    REQUIRE(study.exit_code == 0);
    CHECK(study.out.find("\"order\"") != std::string::npos);
}

TEST_CASE("output lands in the requested file") {
    const auto dir = testsupport::test_scratch_dir();
    const auto out = dir / "weights.csv";
    const auto r = run_cli("weights --alpha 0.5 --count 2 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(testsupport::slurp(out) == "n,weight\n0,1\n1,-0.5\n2,-0.125\n");
}
