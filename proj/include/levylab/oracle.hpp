#pragma once

#include "levylab/model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace levylab {

// ---------------------------------------------------------------------------
// Exact first-passage laws for finite-activity lattice chains
// ---------------------------------------------------------------------------

// A drift-free compound Poisson chain on the lattice h*Z, described by the
// integer jump multiples of its atoms. States below -floor_init*h are
// absorbed as "lost" with a certified one-sided bound on the crossing mass
// that truncation can hide.
struct LatticeChainSpec {
    Rational h = 1;
    std::vector<std::pair<long long, Rational>> atoms;  // (size/h, rate), multiples non-zero, distinct
    long long floor_init = 16;        // starting truncation depth, doubled until certified
    long long floor_cap = 1 << 13;    // explicit failure beyond this depth
    double lost_tolerance = 1e-9;

    double mesh_d() const { return to_double(h); }
};

// Builds a spec from a triplet when the oracle applies (sigma2 == 0, no
// tail, zero drift under the Zero-cutoff convention, atoms on a common
// lattice with small integer multiples); nullopt otherwise.
std::optional<LatticeChainSpec> make_lattice_spec(const LevyTriplet& t, long long max_multiple = 1'000'000);

// Exact (sub)probability law of the position at first passage: mass per
// lattice multiple k (position k*h), all k*h >= level. Solved by rational
// Gaussian elimination on the embedded jump chain when the system is small
// (<= 2000 states), in doubles with a residual report otherwise.
struct ExactLaw {
    Rational h = 1;
    std::map<long long, Rational> masses;   // lattice multiple -> absorption probability
    double lost_mass_bound = 0.0;           // crossing mass possibly hidden by the floor
    long long floor_used = 0;
    bool rational_solve = true;
    double residual_inf = 0.0;              // only meaningful for floating solves

    Rational total_mass() const;
    double total_mass_d() const { return to_double(total_mass()); }
    double position(long long k) const { return static_cast<double>(k) * to_double(h); }
};

ExactLaw exact_passage_law(const LatticeChainSpec& spec, const Rational& level);

// Total crossing probability with the truncation bound as one-sided error.
struct PassageProbability {
    Rational value = 0;
    double error_bound = 0.0;
};
PassageProbability exact_passage_probability(const LatticeChainSpec& spec, const Rational& level);

// Solves with an explicitly chosen floor depth (no doubling); exposed for
// the monotone-refinement checks.
ExactLaw exact_passage_law_at_floor(const LatticeChainSpec& spec, const Rational& level, long long floor_depth);

// Upper bound on P(level is crossed, but only after time T): crossings that
// take more than `steps` jumps (substochastic occupation argument) plus the
// chance that `steps` jumps have not all arrived by T. Used to certify
// horizons for Monte Carlo acceptance bands.
double late_crossing_bound(const LatticeChainSpec& spec, const Rational& level, double horizon,
                           long long steps);
// Scans a few step counts and returns the smallest bound.
double late_crossing_bound_auto(const LatticeChainSpec& spec, const Rational& level, double horizon);

// Exact evaluation of both sides of the first-passage convolution identity
// over level b through intermediate level c; returns the largest absolute
// per-position discrepancy (doubles; exact zero for lossless chains).
double convolution_identity_exact_gap(const LatticeChainSpec& spec, const Rational& b, const Rational& c);

}  // namespace levylab
