#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levylab/pathsim.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace levylab;
using test::make_triplet;

TEST_CASE("decompose_jumps bookkeeping") {
    auto t = make_triplet(0.0, {JumpAtom(Rational(1), Rational(1, 2)), JumpAtom(Rational(3), Rational(1, 2)),
                                JumpAtom(Rational(-1), Rational(2))});
    auto d = decompose_jumps(t, 2.0);
    REQUIRE(d.big_part.atoms.size() == 1);
    CHECK(d.big_part.atoms[0].size == Rational(3));
    CHECK(d.beta == 0.5);
    CHECK(d.small_part.jumps.atoms.size() == 2);
    CHECK(d.small_part.sigma2 == t.sigma2);
    CHECK(d.small_part.drift == t.drift);

    auto t2 = make_triplet(0.0, {JumpAtom(Rational(-1), Rational(2))});
    auto d2 = decompose_jumps(t2, 0.5);
    CHECK(d2.big_part.atoms.empty());
    CHECK(d2.beta == 0.0);

    auto t3 = make_triplet(0.0, {JumpAtom(Rational(1), Rational(1, 2)), JumpAtom(Rational(3), Rational(1, 2))});
    auto d3 = decompose_jumps(t3, 0.5);
    CHECK(d3.big_part.atoms.size() == 2);
    CHECK(d3.beta == 1.0);
    CHECK(d3.small_part.jumps.atoms.empty());

    CHECK_THROWS_AS((void)decompose_jumps(t, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)decompose_jumps(t, -1.0), std::invalid_argument);
}

TEST_CASE("tail closed forms agree with quadrature") {
    // density c x^(-1-alpha); quadrature is the independent route
    for (double alpha : {0.7, 1.0, 1.2, 1.7}) {
        PowerTailSide side{alpha, 0.8, 0.0, std::numeric_limits<double>::infinity()};
        double eps = 0.1;
        auto density = [&](double x) { return side.coef * std::pow(x, -1.0 - alpha); };

        // mass above eps: integrate to a far cutoff, bound the remainder crudely
        double big = 1e8;
        double quad = test::adaptive_simpson(density, eps, 1e4, 1e-12) +
                      test::adaptive_simpson(density, 1e4, big, 1e-12);
        double rem_bound = alpha >= 1.0 ? side.coef / big                        // x^(-1-a) <= x^(-2)
                                        : 2.0 * side.coef / std::sqrt(big);      // x^(-1-a) <= x^(-1.5)
        double closed = side.mass_above(eps);
        CHECK(std::abs(closed - quad) <= 1e-6 * closed + rem_bound);

        // variance below eps over a positive window
        PowerTailSide windowed{alpha, 0.8, 0.01, std::numeric_limits<double>::infinity()};
        auto x2_density = [&](double x) { return x * x * density(x); };
        double var_quad = test::adaptive_simpson(x2_density, 0.01, eps, 1e-14);
        CHECK(windowed.variance_below(eps) == doctest::Approx(var_quad).epsilon(1e-8));

        // signed mean over (eps, 1)
        auto x_density = [&](double x) { return x * density(x); };
        double mean_quad = test::adaptive_simpson(x_density, eps, 1.0, 1e-14);
        TailFamily fam = make_stable_tail(alpha, 0.8, 0.3);
        double expected = mean_quad - (0.3 / 0.8) * mean_quad;
        CHECK(fam.signed_mean_between(eps, 1.0) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("tail decomposition splits the rate analytically") {
    auto t = make_triplet(0.0, {}, 0, Cutoff::UnitBall);
    t.jumps.tail = make_stable_tail(1.2, 0.7, 0.4);
    double a = 0.25;
    auto d = decompose_jumps(t, a);
    REQUIRE(d.big_part.tail.has_value());
    double expected = 0.7 * std::pow(a, -1.2) / 1.2;
    CHECK(d.beta == doctest::Approx(expected).epsilon(1e-12));
    CHECK(d.big_part.tail->neg.mass() == 0.0);
    // remainder keeps the full negative side and the positive piece below a
    CHECK(d.small_part.jumps.tail->pos.hi == a);
    CHECK(d.small_part.jumps.tail->neg.hi == t.jumps.tail->neg.hi);
}

TEST_CASE("event-driven engine: staircase and preconditions") {
    auto stair = make_triplet(0.0, {JumpAtom(Rational(1), Rational(1))});
    SimConfig cfg;
    cfg.seed = 11;
    cfg.horizon = 50.0;
    RngStream rng = RngStream::for_replicate(cfg.seed, 0);
    PathSkeleton p = simulate_event_driven(stair, cfg, rng);
    CHECK(skeleton_well_formed(p));
    CHECK(p.final_value() == static_cast<double>(p.jump_count()));
    for (std::size_t i = 1; i < p.records.size(); ++i)
        if (p.records[i].kind == RecordKind::Jump)
            CHECK(p.records[i].value == p.records[i - 1].value + 1.0);

    auto empty = make_triplet(0.0, {});
    RngStream r2(1);
    CHECK_THROWS_AS((void)simulate_event_driven(empty, cfg, r2), std::invalid_argument);
    auto diffusive = make_triplet(1.0, {JumpAtom(Rational(1), Rational(1))});
    CHECK_THROWS_AS((void)simulate_event_driven(diffusive, cfg, r2), std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_grid(stair, cfg, r2), std::invalid_argument);
}

TEST_CASE("event-driven lattice closure is exact") {
    RngStream meta(314);
    const Rational meshes[] = {Rational(1), Rational(1, 2), Rational(1, 3)};
    SimConfig cfg;
    cfg.horizon = 20.0;
    for (int trial = 0; trial < 30; ++trial) {
        const Rational& h = meshes[meta.next_u64() % 3];
        auto up_rate = Rational(1 + static_cast<long long>(meta.next_u64() % 5), 2);
        auto down = -Rational(1 + static_cast<long long>(meta.next_u64() % 4));
        LevyTriplet t = make_triplet(0.0, {JumpAtom(h, up_rate), JumpAtom(down * h, Rational(1))});
        cfg.seed = meta.next_u64();
        RngStream rng = RngStream::for_replicate(cfg.seed, 0);
        PathSkeleton p = simulate_event_driven(t, cfg, rng);
        double mesh = to_double(h);
        for (const auto& rec : p.records) {
            auto k = std::llround(rec.value / mesh);
            CHECK(static_cast<double>(k) * mesh == rec.value);  // bit-exact lattice membership
        }
    }
}

TEST_CASE("mean increment matches the zero-cutoff compensator") {
    auto t = make_triplet(0.0, {JumpAtom(Rational(1), Rational(3, 10)), JumpAtom(Rational(-1), Rational(7, 10))},
                          Rational(1, 4));
    SimConfig cfg;
    cfg.seed = 555;
    cfg.horizon = 2.0;
    const int n = 4000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(i));
        double v = simulate_event_driven(t, cfg, rng).final_value();
        sum += v;
        sum2 += v * v;
    }
    double mean = sum / n;
    double sd = std::sqrt(sum2 / n - mean * mean);
    double expected = 2.0 * (0.25 + 0.3 - 0.7);
    CHECK(std::abs(mean - expected) <= 4.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("passage semantics at and below zero") {
    auto chain = test::birth_death_chain(Rational(3, 10), Rational(7, 10));
    SimConfig cfg;
    cfg.seed = 77;
    cfg.horizon = 10.0;
    RngStream rng = RngStream::for_replicate(cfg.seed, 0);

    PassageOutcome weak = run_to_passage(chain, -1.0, false, cfg, rng);
    CHECK(weak.crossed);
    CHECK(weak.time == 0.0);
    CHECK(weak.position == 0.0);
    CHECK(weak.overshoot == 1.0);
    CHECK(weak.kind == CrossKind::Immediate);

    RngStream rng2 = RngStream::for_replicate(cfg.seed, 1);
    PassageOutcome weak0 = run_to_passage(chain, 0.0, false, cfg, rng2);
    CHECK(weak0.crossed);
    CHECK(weak0.time == 0.0);

    RngStream rng3 = RngStream::for_replicate(cfg.seed, 2);
    PassageOutcome strict_neg = run_to_passage(chain, -0.5, true, cfg, rng3);
    CHECK(strict_neg.crossed);
    CHECK(strict_neg.time == 0.0);

    // strict passage of 0 needs an actual upward move
    auto stair = make_triplet(0.0, {JumpAtom(Rational(1), Rational(1))});
    RngStream rng4 = RngStream::for_replicate(cfg.seed, 3);
    PassageOutcome strict0 = run_to_passage(stair, 0.0, true, cfg, rng4);
    CHECK(strict0.crossed);
    CHECK(strict0.position == 1.0);
    CHECK(strict0.time > 0.0);
}

TEST_CASE("strict passage on the lattice waits for a true exceedance") {
    auto chain = test::birth_death_chain(Rational(1, 2), Rational(1, 2));
    SimConfig cfg;
    cfg.seed = 2718;
    cfg.horizon = 200.0;
    int crossed = 0;
    for (int i = 0; i < 500; ++i) {
        RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(i));
        PassageOutcome o = run_to_passage(chain, 1.0, true, cfg, rng);
        if (o.crossed) {
            ++crossed;
            CHECK(o.position == 2.0);  // skip-free: first strict exceedance of 1 lands at 2
        }
    }
    CHECK(crossed > 400);
}

TEST_CASE("drift crossings land exactly on the level") {
    auto t = make_triplet(0.0, {JumpAtom(Rational(-1), Rational(1))}, Rational(1));
    SimConfig cfg;
    cfg.seed = 31337;
    cfg.horizon = 50.0;
    int crossed = 0;
    for (int i = 0; i < 300; ++i) {
        RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(i));
        PassageOutcome o = run_to_passage(t, 2.0, false, cfg, rng);
        if (o.crossed) {
            ++crossed;
            CHECK(o.position == 2.0);
            CHECK(o.overshoot == 0.0);
            CHECK(o.kind == CrossKind::Drift);
        }
    }
    CHECK(crossed > 0);
}

TEST_CASE("monotone chain passage positions enumerate correctly") {
    auto t = test::monotone_chain();
    SimConfig cfg;
    cfg.seed = 99;
    cfg.horizon = 30.0;
    for (int i = 0; i < 2000; ++i) {
        RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(i));
        PassageOutcome o = run_to_passage(t, 1.5, false, cfg, rng);
        REQUIRE(o.crossed);
        CHECK((o.position == 2.0 || o.position == 3.0 || o.position == 4.0));
        CHECK(o.position >= 1.5);
    }
}

TEST_CASE("outcomes are reproducible per (seed, replicate)") {
    auto chain = test::birth_death_chain(Rational(3, 10), Rational(7, 10));
    SimConfig cfg;
    cfg.seed = 123;
    cfg.horizon = 25.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        RngStream r1 = RngStream::for_replicate(cfg.seed, i);
        RngStream r2 = RngStream::for_replicate(cfg.seed, i);
        PassageOutcome a = run_to_passage(chain, 1.5, false, cfg, r1);
        PassageOutcome b = run_to_passage(chain, 1.5, false, cfg, r2);
        CHECK(a.crossed == b.crossed);
        if (a.crossed) {
            CHECK(a.time == b.time);
            CHECK(a.position == b.position);
        }
    }
}

TEST_CASE("grid engine: Brownian increments have variance dt") {
    auto bm = make_triplet(1.0, {});
    SimConfig cfg;
    cfg.seed = 404;
    cfg.horizon = 1.0;
    cfg.dt = 0.01;
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (int r = 0; r < 100; ++r) {
        RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(r));
        PathSkeleton p = simulate_grid(bm, cfg, rng);
        CHECK(skeleton_well_formed(p));
        for (std::size_t i = 1; i < p.records.size(); ++i) {
            double d = p.records[i].value - p.records[i - 1].value;
            sum += d;
            sum2 += d * d;
            ++count;
        }
    }
    double var = sum2 / static_cast<double>(count);
    CHECK(var == doctest::Approx(cfg.dt).epsilon(0.05));
}

TEST_CASE("grid engine: jump counts over the horizon are Poisson") {
    // chi-square goodness of fit, 10 bins {0..8, >=9}, alpha = 0.01
    auto t = make_triplet(1.0, {JumpAtom(Rational(1), Rational(1))});
    SimConfig cfg;
    cfg.seed = 8080;
    cfg.horizon = 3.0;
    cfg.dt = 0.05;
    const int n = 10000;
    std::vector<std::uint64_t> observed(10, 0);
    for (int r = 0; r < n; ++r) {
        RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(r));
        std::size_t jumps = simulate_grid(t, cfg, rng).jump_count();
        ++observed[std::min<std::size_t>(jumps, 9)];
    }
    double lambda = 3.0;
    std::vector<double> expected(10, 0.0);
    double pmf = std::exp(-lambda), cdf = 0.0;
    for (int k = 0; k < 9; ++k) {
        expected[static_cast<std::size_t>(k)] = n * pmf;
        cdf += pmf;
        pmf *= lambda / static_cast<double>(k + 1);
    }
    expected[9] = n * (1.0 - cdf);
    double chi2 = 0.0;
    for (int k = 0; k < 10; ++k) {
        double diff = static_cast<double>(observed[static_cast<std::size_t>(k)]) - expected[static_cast<std::size_t>(k)];
        chi2 += diff * diff / expected[static_cast<std::size_t>(k)];
    }
    CHECK(chi2 < 21.666);  // chi-square 0.99 quantile, 9 dof
}

TEST_CASE("grid engine compensates the unit-ball convention") {
    // E X_t = t*mu for an atom inside the unit ball; without compensation
    // the sample mean would come out near t*(mu + size*rate)
    auto t = make_triplet(1.0, {JumpAtom(Rational(1, 2), Rational(2))}, Rational(3, 10), Cutoff::UnitBall);
    SimConfig cfg;
    cfg.seed = 6006;
    cfg.horizon = 2.0;
    cfg.dt = 0.01;
    const int n = 3000;
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < n; ++r) {
        RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(r));
        double v = simulate_grid(t, cfg, rng).final_value();
        sum += v;
        sum2 += v * v;
    }
    double mean = sum / n;
    double sd = std::sqrt(sum2 / n - mean * mean);
    CHECK(std::abs(mean - 0.6) <= 4.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("grid engine requires small_jump_eps with a tail") {
    auto t = make_triplet(0.0, {}, 0, Cutoff::UnitBall);
    t.jumps.tail = make_stable_tail(1.2, 1.0, 1.0);
    SimConfig cfg;
    cfg.seed = 1;
    RngStream rng(1);
    CHECK_THROWS_AS((void)simulate_grid(t, cfg, rng), std::invalid_argument);
    cfg.small_jump_eps = 0.05;
    RngStream rng2 = RngStream::for_replicate(1, 0);
    PathSkeleton p = simulate_grid(t, cfg, rng2);
    CHECK(skeleton_well_formed(p));
    CHECK(p.jump_count() > 0);
}

TEST_CASE("gaussian substitution adds the matched small-jump variance") {
    auto t = make_triplet(0.04, {}, 0, Cutoff::UnitBall);
    t.jumps.tail = make_stable_tail(1.5, 0.6, 0.2);
    SimConfig cfg;
    cfg.seed = 1;
    cfg.small_jump_eps = 0.1;
    cfg.gaussian_substitution = true;
    CompiledModel m = compile_model(t, cfg);
    double expected = 0.04 + t.jumps.tail->variance_below(0.1);
    CHECK(m.sigma_total * m.sigma_total == doctest::Approx(expected).epsilon(1e-12));

    cfg.gaussian_substitution = false;
    CompiledModel plain = compile_model(t, cfg);
    CHECK(plain.sigma_total == 0.2);
}

TEST_CASE("strict grid passage keeps record semantics") {
    auto bm = make_triplet(1.0, {});
    SimConfig cfg;
    cfg.seed = 321;
    cfg.horizon = 1.0;
    cfg.dt = 0.01;
    int strict_crossed = 0, weak_bridge = 0;
    for (int i = 0; i < 2000; ++i) {
        RngStream r1 = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(i));
        PassageOutcome strict = run_to_passage(bm, 1.0, true, cfg, r1);
        if (strict.crossed) {
            ++strict_crossed;
            CHECK(strict.position > 1.0);
            CHECK(strict.kind != CrossKind::Bridge);
        }
        RngStream r2 = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(i));
        PassageOutcome weak = run_to_passage(bm, 1.0, false, cfg, r2);
        if (weak.crossed) {
            CHECK(weak.position >= 1.0);
            if (weak.kind == CrossKind::Bridge) {
                ++weak_bridge;
                CHECK(weak.position == 1.0);
            }
        }
    }
    CHECK(strict_crossed > 100);
    CHECK(weak_bridge > 100);
}

TEST_CASE("grid engine lays tail jumps at the analytic truncated rate") {
    auto t = make_triplet(0.0, {}, 0, Cutoff::UnitBall);
    t.jumps.tail = make_stable_tail(1.2, 0.7, 0.4);
    SimConfig cfg;
    cfg.seed = 12321;
    cfg.horizon = 4.0;
    cfg.dt = 0.05;
    cfg.small_jump_eps = 0.2;
    double rate = t.jumps.tail->pos.mass_above(0.2) + t.jumps.tail->neg.mass_above(0.2);
    const int n = 2000;
    double total = 0.0;
    for (int r = 0; r < n; ++r) {
        RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(r));
        total += static_cast<double>(simulate_grid(t, cfg, rng).jump_count());
    }
    double mean = total / n;
    double expected = rate * cfg.horizon;
    // Poisson mean over n replicates: sd = sqrt(expected/n)
    CHECK(std::abs(mean - expected) <= 4.0 * std::sqrt(expected / n));
}

TEST_CASE("halving dt sharpens naive grid overshoots") {
    auto bm = make_triplet(1.0, {});
    auto median_overshoot = [&](double dt, std::uint64_t seed) {
        SimConfig cfg;
        cfg.seed = seed;
        cfg.horizon = 1.0;
        cfg.dt = dt;
        cfg.bridge_correction = false;
        std::vector<double> overshoots;
        for (int r = 0; r < 4000; ++r) {
            RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(r));
            PassageOutcome o = run_to_passage(bm, 0.7, false, cfg, rng);
            if (o.crossed) overshoots.push_back(o.overshoot);
        }
        REQUIRE(overshoots.size() > 100);
        std::nth_element(overshoots.begin(), overshoots.begin() + overshoots.size() / 2, overshoots.end());
        return overshoots[overshoots.size() / 2];
    };
    double m1 = median_overshoot(0.02, 1001);
    double m2 = median_overshoot(0.01, 1002);
    double m3 = median_overshoot(0.005, 1003);
    CHECK(m2 <= m1);
    CHECK(m3 <= m2);
}

TEST_CASE("supremum_jump_diagnostic") {
    PathSkeleton drift_only;
    drift_only.engine = Engine::EventDriven;
    drift_only.drift = 1.0;
    drift_only.records = {{0.0, 0.0, RecordKind::Start}, {5.0, 5.0, RecordKind::Grid}};
    CHECK(supremum_jump_diagnostic(drift_only) == 0.0);

    // +3 from the start, down to 1, then +2.5 lands at 3.5: the running
    // supremum jumps by 3 and then by 0.5
    PathSkeleton jumps;
    jumps.engine = Engine::EventDriven;
    jumps.drift = 0.0;
    jumps.records = {{0.0, 0.0, RecordKind::Start},
                     {1.0, 3.0, RecordKind::Jump},
                     {2.0, 1.0, RecordKind::Jump},
                     {3.0, 3.5, RecordKind::Jump}};
    CHECK(supremum_jump_diagnostic(jumps) == 3.0);

    // drift carries the path to a new maximum before the jump
    PathSkeleton mixed;
    mixed.engine = Engine::EventDriven;
    mixed.drift = 1.0;
    mixed.records = {{0.0, 0.0, RecordKind::Start}, {2.0, 4.0, RecordKind::Jump}};
    // value before the jump is 2.0 (drift), jump lands at 4: supremum jumps by 2
    CHECK(supremum_jump_diagnostic(mixed) == 2.0);

    auto sn = make_triplet(0.0, {JumpAtom(Rational(-1), Rational(1))}, Rational(3, 2));
    SimConfig cfg;
    cfg.seed = 42;
    cfg.horizon = 10.0;
    for (int r = 0; r < 300; ++r) {
        RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(r));
        CHECK(supremum_jump_diagnostic(simulate_event_driven(sn, cfg, rng)) == 0.0);
    }
}

TEST_CASE("censoring reports the horizon") {
    auto chain = test::birth_death_chain(Rational(1, 10), Rational(9, 10));
    SimConfig cfg;
    cfg.seed = 5;
    cfg.horizon = 0.5;
    int censored = 0;
    for (int i = 0; i < 200; ++i) {
        RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(i));
        PassageOutcome o = run_to_passage(chain, 5.0, false, cfg, rng);
        if (!o.crossed) {
            ++censored;
            CHECK(o.horizon == 0.5);
        }
    }
    CHECK(censored > 150);
}
