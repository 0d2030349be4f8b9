#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levylab/firstpassage.hpp"
#include "levylab/overshoot.hpp"
#include "levylab/rng.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace levylab;

TEST_CASE("linear_crossing") {
    CHECK(*linear_crossing(0.0, 1.0, 2.0) == 2.0);
    CHECK(!linear_crossing(0.0, -1.0, 2.0));
    CHECK(!linear_crossing(0.0, 0.0, 2.0));
    CHECK(*linear_crossing(1.5, 0.5, 2.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)linear_crossing(2.0, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS((void)linear_crossing(3.0, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("bridge_crossing_prob closed form") {
    CHECK(bridge_crossing_prob({1.0, 0.01, 0.0, 0.3}) == 1.0);
    CHECK(bridge_crossing_prob({1.0, 0.01, 0.1, 0.05}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(bridge_crossing_prob({1.0, 0.01, 0.5, 0.5}) == doctest::Approx(std::exp(-50.0)).epsilon(1e-9));

    CHECK_THROWS_AS((void)bridge_crossing_prob({0.0, 0.01, 0.1, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS((void)bridge_crossing_prob({1.0, 0.0, 0.1, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS((void)bridge_crossing_prob({1.0, 0.01, -0.1, 0.1}), std::invalid_argument);
}

TEST_CASE("bridge_crossing_prob is symmetric and monotone") {
    RngStream rng(5150);
    for (int i = 0; i < 500; ++i) {
        double sigma = 0.2 + 2.0 * rng.next_uniform();
        double dt = 0.001 + 0.1 * rng.next_uniform();
        double g0 = rng.next_uniform();
        double g1 = rng.next_uniform();
        double p = bridge_crossing_prob({sigma, dt, g0, g1});
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(p == bridge_crossing_prob({sigma, dt, g1, g0}));
        CHECK(bridge_crossing_prob({sigma, dt, g0 + 0.1, g1}) <= p);
        CHECK(bridge_crossing_prob({sigma, dt, g0, g1 + 0.1}) <= p);
        CHECK(bridge_crossing_prob({sigma, dt * 0.5, g0, g1}) <= p);
    }
}

TEST_CASE("bridge-corrected crossing frequency matches the reflection principle") {
    // P(sup of sigma*W over [0,T] >= x) = 2 Phi(-x/(sigma sqrt(T)))
    LevyTriplet bm = test::make_triplet(1.0, {});
    const double level = 0.8, T = 1.0;
    const std::uint64_t n = 20000;
    SimConfig cfg;
    cfg.seed = 90210;
    cfg.horizon = T;
    cfg.dt = 0.01;
    cfg.bridge_correction = true;

    EmpiricalLaw law = estimate_law(bm, level, false, n, cfg);
    double expected = 2.0 * test::normal_cdf(-level / std::sqrt(T));
    double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
    CHECK(std::abs(law.crossed_mass() - expected) <= 3.0 * se);
}
