#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levylab/oracle.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace levylab;

namespace {

LatticeChainSpec birth_death_spec(const Rational& p, const Rational& q) {
    LatticeChainSpec spec;
    spec.h = 1;
    spec.atoms = {{1, p}, {-1, q}};
    return spec;
}

LatticeChainSpec monotone_spec() {
    LatticeChainSpec spec;
    spec.h = 1;
    spec.atoms = {{1, Rational(1, 2)}, {3, Rational(1, 2)}};
    return spec;
}

}  // namespace

TEST_CASE("gambler's ruin absorption probability") {
    // biased walk up w.p. 3/10: P(ever reach +1) = p/q = 3/7 (first-step
    // recursion r = p + q r^2, computed independently of the solver)
    auto spec = birth_death_spec(Rational(3, 10), Rational(7, 10));
    ExactLaw law = exact_passage_law(spec, Rational(1, 2));
    REQUIRE(law.masses.size() == 1);
    REQUIRE(law.masses.count(1) == 1);
    CHECK(law.rational_solve);
    CHECK(law.lost_mass_bound < 1e-9);
    Rational mass = law.masses.at(1);
    CHECK(mass <= Rational(3, 7));
    CHECK(Rational(3, 7) - mass <= rational_from_double(law.lost_mass_bound) + Rational(1, BigInt(1) << 60));

    auto prob = exact_passage_probability(spec, Rational(1, 2));
    CHECK(to_double(prob.value) == doctest::Approx(3.0 / 7.0).epsilon(1e-9));

    // up-drifting walk reaches every level with probability one
    auto up = birth_death_spec(Rational(7, 10), Rational(3, 10));
    auto p_up = exact_passage_probability(up, Rational(1, 2));
    CHECK(to_double(p_up.value) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("enumeration oracle: monotone chain") {
    // first jump +3 ends at 3 (1/2); first +1 then +1 -> 2 (1/4); +1 then +3 -> 4 (1/4)
    ExactLaw law = exact_passage_law(monotone_spec(), Rational(3, 2));
    REQUIRE(law.masses.size() == 3);
    CHECK(law.masses.at(2) == Rational(1, 4));
    CHECK(law.masses.at(3) == Rational(1, 2));
    CHECK(law.masses.at(4) == Rational(1, 4));
    CHECK(law.lost_mass_bound == 0.0);
    CHECK(law.total_mass() == Rational(1));
}

TEST_CASE("single positive atom gives the ceiling point mass") {
    LatticeChainSpec spec;
    spec.h = 1;
    spec.atoms = {{1, Rational(1)}};
    ExactLaw law = exact_passage_law(spec, Rational(5, 2));
    REQUIRE(law.masses.size() == 1);
    CHECK(law.masses.at(3) == Rational(1));

    ProcessClass cls;
    cls.variant = ProcessClass::Variant::UpwardsSkipFree;
    cls.h = 1.0;
    CHECK(*predicted_passage_position(cls, 2.5) == law.position(3));
}

TEST_CASE("skip-free laws are scaled point masses at the ceiling") {
    const Rational levels[] = {Rational(1, 2), Rational(3, 2), Rational(5, 2), Rational(7, 3)};
    auto spec = birth_death_spec(Rational(2, 5), Rational(3, 5));
    spec.h = Rational(1, 2);
    for (const auto& level : levels) {
        ExactLaw law = exact_passage_law(spec, level);
        REQUIRE(law.masses.size() == 1);
        long long k = law.masses.begin()->first;
        CHECK(static_cast<double>(k) * 0.5 == *predicted_passage_position(
                                                  ProcessClass{ProcessClass::Variant::UpwardsSkipFree, 0.5,
                                                               Rational(1, 2), ""},
                                                  to_double(level)));
    }
}

TEST_CASE("floor refinement is monotone") {
    auto spec = birth_death_spec(Rational(3, 10), Rational(7, 10));
    ExactLaw coarse = exact_passage_law_at_floor(spec, Rational(5, 2), 4);
    ExactLaw mid = exact_passage_law_at_floor(spec, Rational(5, 2), 8);
    ExactLaw fine = exact_passage_law_at_floor(spec, Rational(5, 2), 16);
    CHECK(coarse.lost_mass_bound >= mid.lost_mass_bound);
    CHECK(mid.lost_mass_bound >= fine.lost_mass_bound);
    for (const auto& [k, m] : coarse.masses) {
        CHECK(mid.masses.at(k) >= m);
        CHECK(fine.masses.at(k) >= mid.masses.at(k));
    }
    CHECK(coarse.total_mass() + rational_from_double(coarse.lost_mass_bound) <= Rational(1));
}

TEST_CASE("make_lattice_spec applicability") {
    CHECK(make_lattice_spec(test::birth_death_chain(Rational(1, 2), Rational(1, 2))).has_value());
    CHECK(make_lattice_spec(test::monotone_chain()).has_value());

    auto drifting = test::make_triplet(0.0, {JumpAtom(Rational(1), Rational(1))}, Rational(1));
    CHECK(!make_lattice_spec(drifting));
    auto diffusive = test::make_triplet(1.0, {JumpAtom(Rational(1), Rational(1))});
    CHECK(!make_lattice_spec(diffusive));
    auto irrational =
        test::make_triplet(0.0, {JumpAtom(1.0, 0.5), JumpAtom(-std::sqrt(2.0), 0.5)});
    CHECK(!make_lattice_spec(irrational));  // dyadic gcd forces astronomical multiples

    auto spec = make_lattice_spec(test::monotone_chain());
    REQUIRE(spec);
    CHECK(spec->h == Rational(1));
    REQUIRE(spec->atoms.size() == 2);
}

TEST_CASE("oracle rejects bad inputs") {
    auto spec = birth_death_spec(Rational(1, 2), Rational(1, 2));
    CHECK_THROWS_AS((void)exact_passage_law(spec, Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS((void)exact_passage_law(spec, Rational(-1)), std::invalid_argument);

    LatticeChainSpec no_up;
    no_up.h = 1;
    no_up.atoms = {{-1, Rational(1)}};
    CHECK_THROWS_AS((void)exact_passage_law(no_up, Rational(1)), std::invalid_argument);

    LatticeChainSpec empty;
    CHECK_THROWS_AS((void)exact_passage_law(empty, Rational(1)), std::invalid_argument);
}

TEST_CASE("lost_mass_bound dominates the true truncation error") {
    // reference solve with a very deep floor stands in for the untruncated
    // chain; the certified bound must cover the measured gap at every depth
    for (auto [up, down] : {std::pair{3, 7}, std::pair{2, 3}, std::pair{4, 5}}) {
        auto spec = birth_death_spec(Rational(up, 10), Rational(down, 10));
        ExactLaw ref = exact_passage_law_at_floor(spec, Rational(5, 2), 400);
        for (long long L : {4, 8, 16, 32}) {
            ExactLaw law = exact_passage_law_at_floor(spec, Rational(5, 2), L);
            double gap = to_double(ref.masses.at(3) - law.masses.at(3));
            CHECK(gap <= law.lost_mass_bound);
        }
    }
}

TEST_CASE("late crossing bound certifies horizons") {
    auto spec = birth_death_spec(Rational(3, 10), Rational(7, 10));
    double loose = late_crossing_bound_auto(spec, Rational(1, 2), 5.0);
    double tight = late_crossing_bound_auto(spec, Rational(1, 2), 60.0);
    CHECK(tight >= 0.0);
    CHECK(tight < 1e-3);
    CHECK(loose >= tight);
}

TEST_CASE("convolution identity evaluates exactly") {
    CHECK(convolution_identity_exact_gap(monotone_spec(), Rational(3, 2), Rational(1, 2)) == 0.0);
    auto spec = birth_death_spec(Rational(3, 10), Rational(7, 10));
    CHECK(convolution_identity_exact_gap(spec, Rational(5, 2), Rational(6, 5)) <= 1e-8);
    CHECK_THROWS_AS((void)convolution_identity_exact_gap(spec, Rational(1), Rational(2)),
                    std::invalid_argument);
}

TEST_CASE("two-positive-atom chain has a genuinely spread law") {
    LatticeChainSpec spec;
    spec.h = 1;
    spec.atoms = {{1, Rational(1, 2)}, {2, Rational(1, 2)}};
    ExactLaw law = exact_passage_law(spec, Rational(1, 2));
    // first jump decides: +1 -> 1, +2 -> 2
    CHECK(law.masses.at(1) == Rational(1, 2));
    CHECK(law.masses.at(2) == Rational(1, 2));
}
