#include <doctest.h>

#include <cmath>

#include "tiering/analytic.hpp"
#include "tiering/numeric.hpp"

using namespace tiering;

namespace {

// Analytic derivative of r*(u) for uniform(lo,hi), used as the oracle for the
// central-difference sensitivity.
double drstar_du(double u, double lo, double hi) {
    double a = (hi - u) * (hi - u);
    double b = (u - lo) * (u - lo);
    double num = -2.0 * (hi - u) * b - 2.0 * (u - lo) * a;
    return num / ((a + b) * (a + b));
}

MarketModel uniform_model(double u, double lo, double hi) {
    return MarketModel{TieringPolicy{u, 1.0}, LiquidityDistribution::uniform(lo, hi),
                       CostDistribution{}};
}

}  // namespace

TEST_CASE("rate_standard") {
    CHECK(rate_standard(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rate_standard(0.0) == 1.0);
    CHECK(rate_standard(1.0) == 0.0);
    // matches the numeric solver at the JPY-like point
    double numeric = solve_equilibrium(uniform_model(0.495, 0.0, 1.0)).rate_magnitude;
    CHECK(rate_standard(0.495) == doctest::Approx(numeric).epsilon(1e-10));
    CHECK(rate_standard(0.495) == doctest::Approx(0.5100).epsilon(2e-4));
    CHECK_THROWS_AS(rate_standard(1.5), std::domain_error);
    CHECK_THROWS_AS(rate_standard(-0.1), std::domain_error);
}

TEST_CASE("volume_standard") {
    CHECK(volume_standard(0.0) == 0.0);
    CHECK(volume_standard(0.5) == doctest::Approx(0.0625).epsilon(1e-15));
    // maximized at u = 0.5 over a fine grid
    double best_u = 0.0, best_v = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        double u = i / 1000.0;
        double v = volume_standard(u);
        if (v > best_v) {
            best_v = v;
            best_u = u;
        }
    }
    CHECK(best_u == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("negative_share_standard") {
    CHECK(negative_share_standard(0.495) == doctest::Approx(0.1300).epsilon(5e-3));
    CHECK(negative_share_standard(1.0) == 0.0);
    CHECK(negative_share_standard(0.0) == 1.0);
}

TEST_CASE("closed-form symmetry and monotonicity") {
    double prev_r = 2.0, prev_n = 2.0;
    for (int i = 0; i <= 200; ++i) {
        double u = i / 200.0;
        CHECK(rate_standard(u) + rate_standard(1.0 - u) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(volume_standard(u) == doctest::Approx(volume_standard(1.0 - u)).epsilon(1e-12));
        double r = rate_standard(u);
        CHECK(r < prev_r);
        prev_r = r;
        if (i > 0 && i < 200) {
            double n = negative_share_standard(u);
            CHECK(n < prev_n);
            prev_n = n;
        }
        // balance identity from the market-clearing condition
        double lhs = 0.5 * (1.0 - u) * (1.0 - u) * (1.0 - r);
        double rhs = 0.5 * u * u * r;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    // V strictly increasing on [0, 0.5]
    double prev_v = -1.0;
    for (int i = 0; i <= 100; ++i) {
        double v = volume_standard(i / 200.0);
        CHECK(v > prev_v);
        prev_v = v;
    }
}

TEST_CASE("equilibrium_shifted reduces to the standard forms at (0,1)") {
    for (int i = 0; i <= 20; ++i) {
        double u = i / 20.0;
        auto res = equilibrium_shifted(u, 0.0, 1.0);
        CHECK(res.rate_magnitude == doctest::Approx(rate_standard(u)).epsilon(1e-12));
        CHECK(res.volume == doctest::Approx(volume_standard(u)).epsilon(1e-12));
        CHECK(res.negative_share == doctest::Approx(negative_share_standard(u)).epsilon(1e-12));
        CHECK(res.market_rate == -res.rate_magnitude);
    }
}

TEST_CASE("equilibrium_shifted interior values") {
    auto sym = equilibrium_shifted(0.5, 0.3, 0.7);
    CHECK(sym.rate_magnitude == doctest::Approx(0.5).epsilon(1e-15));

    auto jpy = equilibrium_shifted(0.495, 0.3, 0.7);
    CHECK(jpy.rate_magnitude == doctest::Approx(0.5250).epsilon(2e-4));
    // cross-check against the numeric solver
    auto numeric = solve_equilibrium(uniform_model(0.495, 0.3, 0.7));
    CHECK(jpy.rate_magnitude == doctest::Approx(numeric.rate_magnitude).epsilon(1e-10));
    CHECK(jpy.volume == doctest::Approx(numeric.volume).epsilon(1e-9));
    CHECK(jpy.negative_share == doctest::Approx(numeric.negative_share).epsilon(1e-9));
}

TEST_CASE("equilibrium_shifted corners") {
    auto no_borrowers = equilibrium_shifted(0.2, 0.3, 0.7);
    CHECK(no_borrowers.rate_magnitude == 1.0);
    CHECK(no_borrowers.volume == 0.0);
    auto no_lenders = equilibrium_shifted(0.8, 0.3, 0.7);
    CHECK(no_lenders.rate_magnitude == 0.0);
    CHECK(no_lenders.volume == 0.0);
    CHECK(no_lenders.negative_share == 0.0);
}

TEST_CASE("rate_sensitivity against the analytic derivative") {
    // standard support: dr*/du ~ -2, so d(-r*)/dE ~ +1
    double s_std = rate_sensitivity(0.495, 0.0, 1.0, 1e-4);
    CHECK(s_std == doctest::Approx(-drstar_du(0.495, 0.0, 1.0) * 0.5).epsilon(1e-6));
    CHECK(s_std == doctest::Approx(1.0).epsilon(1e-2));

    double s_shifted = rate_sensitivity(0.495, 0.3, 0.7, 1e-4);
    CHECK(s_shifted == doctest::Approx(-drstar_du(0.495, 0.3, 0.7) * 0.5).epsilon(1e-6));
    CHECK(-drstar_du(0.495, 0.3, 0.7) == doctest::Approx(4.99).epsilon(1e-2));

    CHECK(s_shifted / s_std == doctest::Approx(2.50).epsilon(0.02));

    CHECK_THROWS_AS(rate_sensitivity(0.30005, 0.3, 0.7, 1e-3), std::domain_error);
    CHECK_THROWS_AS(rate_sensitivity(0.5, 0.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("volume_sensitivity") {
    // V peaks where the support is symmetric about u
    CHECK(volume_sensitivity(0.5, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(volume_sensitivity(0.5, 0.3, 0.7) == doctest::Approx(0.0).epsilon(1e-9));

    // analytic oracle at u = 0.495: dV/dE = (u*r + u^2/2 * dr/du) * mean
    double r = rate_standard(0.495);
    double expected = (0.495 * r + 0.5 * 0.495 * 0.495 * drstar_du(0.495, 0.0, 1.0)) * 0.5;
    CHECK(volume_sensitivity(0.495, 0.0, 1.0) == doctest::Approx(expected).epsilon(1e-4));

    // near E = 1 the volume-curve slope steepens by about the same factor as
    // the rate curve
    double ratio = volume_sensitivity(0.495, 0.3, 0.7) / volume_sensitivity(0.495, 0.0, 1.0);
    CHECK(ratio == doctest::Approx(2.49).epsilon(0.02));
}
