#include <doctest.h>

#include "tiering/model.hpp"

using namespace tiering;

namespace {

MarketModel make_model(double u, const LiquidityDistribution& liquidity) {
    return MarketModel{TieringPolicy{u, 1.0}, liquidity, CostDistribution{}};
}

}  // namespace

TEST_CASE("uniform liquidity mean and moments") {
    auto d = LiquidityDistribution::uniform(0.0, 1.0);
    CHECK(d.mean() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(LiquidityDistribution::uniform(0.3, 0.7).mean() == doctest::Approx(0.5).epsilon(1e-15));

    // E[max(x-u,0)] and E[max(u-x,0)] for uniform(0,1)
    CHECK(d.expected_excess(0.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(d.expected_shortfall(0.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(d.expected_excess(1.0) == 0.0);
    CHECK(d.expected_shortfall(0.0) == 0.0);
    // threshold outside the support
    CHECK(d.expected_excess(2.0) == 0.0);
    CHECK(d.expected_shortfall(2.0) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("empirical liquidity mean") {
    auto d = LiquidityDistribution::empirical({0.6, 0.2, 0.4});
    CHECK(d.mean() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(d.samples().front() == 0.2);  // stored sorted
    CHECK(d.expected_excess(0.3) == doctest::Approx((0.1 + 0.3) / 3.0).epsilon(1e-12));
}

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(LiquidityDistribution::uniform(0.7, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(LiquidityDistribution::uniform(-0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(LiquidityDistribution::empirical({}), std::invalid_argument);
    CHECK_THROWS_AS(LiquidityDistribution::empirical({0.5, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS((TieringPolicy{-0.1, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((TieringPolicy{0.5, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("exemption share") {
    auto u01 = LiquidityDistribution::uniform(0.0, 1.0);
    CHECK(exemption_share(make_model(0.495, u01)) == doctest::Approx(0.99).epsilon(1e-12));
    CHECK(exemption_share(make_model(0.0, u01)) == 0.0);
    CHECK(exemption_share(make_model(0.495, LiquidityDistribution::uniform(0.3, 0.7))) ==
          doctest::Approx(0.99).epsilon(1e-12));
}

TEST_CASE("threshold_from_share") {
    auto u01 = LiquidityDistribution::uniform(0.0, 1.0);
    CHECK(threshold_from_share(0.99, u01) == doctest::Approx(0.495).epsilon(1e-12));
    CHECK(threshold_from_share(0.0, u01) == 0.0);
    CHECK(threshold_from_share(1.0, u01) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(threshold_from_share(-0.1, u01), std::domain_error);
}

TEST_CASE("exemption share properties") {
    auto u01 = LiquidityDistribution::uniform(0.0, 1.0);
    auto shifted = LiquidityDistribution::uniform(0.3, 0.7);

    // round trip over an E grid
    for (int i = 0; i <= 40; ++i) {
        double share = 2.0 * i / 40.0;
        for (const auto& d : {u01, shifted}) {
            double u = threshold_from_share(share, d);
            CHECK(exemption_share(make_model(u, d)) == doctest::Approx(share).epsilon(1e-12));
        }
    }

    // strictly increasing in u; equals 2u for uniform(0,1)
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
        double u = i / 20.0;
        double e = exemption_share(make_model(u, u01));
        CHECK(e == doctest::Approx(2.0 * u).epsilon(1e-14));
        CHECK(e > prev);
        prev = e;
    }
}
