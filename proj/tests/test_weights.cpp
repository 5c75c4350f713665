#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "fracnum/weights.hpp"

using namespace fracnum;

namespace {
const double kAlphaGrid[] = {0.1, 0.25, 0.5, 2.0 / 3.0, 0.75, 0.9};
}

TEST_CASE("FractionalOrder validates the open interval") {
    CHECK(FractionalOrder(0.5).value() == 0.5);
    CHECK_THROWS_AS(FractionalOrder(0.0), std::domain_error);
    CHECK_THROWS_AS(FractionalOrder(1.0), std::domain_error);
    CHECK_THROWS_AS(FractionalOrder(-0.1), std::domain_error);
    CHECK_THROWS_AS(FractionalOrder(1.5), std::domain_error);
    CHECK_THROWS_AS(FractionalOrder(std::numeric_limits<double>::quiet_NaN()),
                    std::domain_error);
}

TEST_CASE("Grunwald weights start 1, -alpha, alpha(alpha-1)/2") {
    const auto w = grunwald_weights(FractionalOrder(0.5), 2);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == -0.5);
    CHECK(w[2] == -0.125);
}

TEST_CASE("Grunwald weight partial sum at alpha = 1/2") {
    const auto w = grunwald_weights(FractionalOrder(0.5), 4);
    double sum = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) sum += w[n];
    CHECK(sum == 0.2734375); // exact in binary arithmetic
}

TEST_CASE("weight table validation") {
    CHECK_THROWS_AS(grunwald_weights(FractionalOrder(0.5), 0), std::invalid_argument);
    CHECK_THROWS_AS(grunwald_weights(FractionalOrder(0.5), max_weight_count + 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(l1_weights(FractionalOrder(0.5), 0), std::invalid_argument);
}

TEST_CASE("weight monotonicity and bounded partial sums") {
    for (double a : kAlphaGrid) {
        const auto w = grunwald_weights(FractionalOrder(a), 10'000);
        for (std::size_t n = 1; n + 1 < w.size(); ++n) {
            CHECK(w[n] < w[n + 1]);
            CHECK(w[n + 1] < 0.0);
        }
        for (std::size_t N : {std::size_t(10), std::size_t(100), std::size_t(1000)}) {
            double sum = 0.0;
            for (std::size_t n = 0; n <= N; ++n) sum += w[n];
            CHECK(sum > 0.0);
            CHECK(sum < 1.0);
            CHECK(sum - 1.0 > -1.0); // sum_{n=1}^{N} w_n in (-1, 0)
            CHECK(sum - 1.0 < 0.0);
        }
    }
}

TEST_CASE("weights decay like alpha / (Gamma(1-alpha) n^{1+alpha})") {
    const std::size_t n = 10'000;
    for (double a : kAlphaGrid) {
        const auto w = grunwald_weights(FractionalOrder(a), n);
        const double scaled =
            std::abs(w[n]) * std::pow(double(n), 1.0 + a) * std::tgamma(1.0 - a) / a;
        CHECK(scaled > 0.9);
        CHECK(scaled < 1.1);
    }
}

TEST_CASE("L1 weights match the closed form at alpha = 1/2") {
    const auto c = l1_weights(FractionalOrder(0.5), 4);
    CHECK_THAT(c[0], Catch::Matchers::WithinRel(1.1283791670955126, 1e-14));
    CHECK_THAT(c[1], Catch::Matchers::WithinRel(-0.6609892125852944, 1e-13));
}

TEST_CASE("L1 weight tail is negative, increasing, telescoping to zero") {
    for (double a : kAlphaGrid) {
        const auto c = l1_weights(FractionalOrder(a), 1000);
        const double g = std::tgamma(2.0 - a);
        double prev_partial = std::numeric_limits<double>::infinity();
        double partial = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (k >= 1) CHECK(c[k] < 0.0);
            if (k >= 2) CHECK(c[k - 1] < c[k]);
            partial += c[k];
            if (k >= 1) {
                const double kd = static_cast<double>(k);
                const double closed =
                    (std::pow(kd + 1.0, 1.0 - a) - std::pow(kd, 1.0 - a)) / g;
                CHECK_THAT(partial, Catch::Matchers::WithinAbs(closed, 1e-12));
                CHECK(partial > 0.0);
                CHECK(partial < prev_partial);
                prev_partial = partial;
            }
        }
    }
}

TEST_CASE("weight magnitude bracket at alpha = 1/2, n = 5") {
    const auto b = weight_bounds(FractionalOrder(0.5), 5);
    CHECK_THAT(b.lower, Catch::Matchers::WithinRel(0.0130042469046222, 1e-12));
    CHECK_THAT(b.upper, Catch::Matchers::WithinRel(0.0962250448649376, 1e-12));
    const double w5 = 0.02734375; // |w_5| from the recursion, exact
    CHECK(b.lower < w5);
    CHECK(w5 < b.upper);
}

TEST_CASE("weight magnitude bracket holds for 3 <= n <= 1000") {
    for (double a : kAlphaGrid) {
        const auto w = grunwald_weights(FractionalOrder(a), 1000);
        for (std::size_t n = 3; n <= 1000; ++n) {
            const auto b = weight_bounds(FractionalOrder(a), n);
            CHECK(b.lower < b.upper);
            CHECK(b.lower < std::abs(w[n]));
            CHECK(std::abs(w[n]) < b.upper);
        }
    }
}

TEST_CASE("weight_bounds requires n >= 3") {
    CHECK_THROWS_AS(weight_bounds(FractionalOrder(0.5), 2), std::invalid_argument);
}

TEST_CASE("tail sum bracket and exact value") {
    const auto t = tail_bounds(FractionalOrder(0.5), 4);
    CHECK_THAT(t.lower, Catch::Matchers::WithinRel(0.0707106781186548, 1e-12));
    CHECK(t.exact == 0.3125); // 1 - (0.5 + 0.125 + 0.0625), exact
    CHECK_THAT(t.upper, Catch::Matchers::WithinRel(1.4142135623730951, 1e-12));

    CHECK(tail_bounds(FractionalOrder(0.5), 1).exact == 1.0);

    const auto t64 = tail_bounds(FractionalOrder(0.25), 64);
    CHECK_THAT(t64.exact, Catch::Matchers::WithinRel(0.2892248839681913, 1e-12));
    CHECK(t64.lower < t64.exact);
    CHECK(t64.exact < t64.upper);
}

TEST_CASE("tail sum bracket holds for 2 <= n <= 1000") {
    for (double a : kAlphaGrid) {
        for (std::size_t n = 2; n <= 1000; ++n) {
            const auto t = tail_bounds(FractionalOrder(a), n);
            CHECK(t.lower < t.exact);
            CHECK(t.exact < t.upper);
        }
    }
}

TEST_CASE("series expansion coefficients of the shifted formula") {
    const auto c = omega_coefficients(FractionalOrder(0.5), 0.0);
    CHECK(c.c0 == 1.0);
    CHECK(c.c1 == -0.25);
    CHECK_THAT(c.c2, Catch::Matchers::WithinRel(5.0 / 96.0, 1e-15));

    for (double a : kAlphaGrid) {
        const auto symmetric = omega_coefficients(FractionalOrder(a), a / 2.0);
        CHECK(symmetric.c1 == 0.0);
        CHECK_THAT(symmetric.c2, Catch::Matchers::WithinRel(a / 24.0, 1e-15));
    }
    CHECK(omega_coefficients(FractionalOrder(0.5), 0.25).c1 == 0.0);
    CHECK_THROWS_AS(omega_coefficients(FractionalOrder(0.5), -0.1), std::invalid_argument);
}
