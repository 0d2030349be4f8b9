#pragma once

#include "levylab/model.hpp"
#include "levylab/pathsim.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace levylab {

// ---------------------------------------------------------------------------
// Empirical first-passage laws
// ---------------------------------------------------------------------------

// Weighted sample form of the (sub)probability law of the position at first
// passage, with the mass censored at the horizon kept explicit. Masses are
// backed by integer replicate counts so the accounting identities
//   crossed_mass + censored_mass == 1   and   sum of weights == crossed_mass
// hold exactly, not merely to rounding.
struct EmpiricalLaw {
    std::map<double, std::uint64_t> counts;  // crossed position -> replicates
    std::uint64_t crossed_count = 0;
    std::uint64_t censored_count = 0;
    std::uint64_t n_replicates = 0;
    double level = 0.0;
    bool strict = false;
    std::uint64_t seed = 0;

    double crossed_mass() const {
        return static_cast<double>(crossed_count) / static_cast<double>(n_replicates);
    }
    double censored_mass() const {
        return static_cast<double>(censored_count) / static_cast<double>(n_replicates);
    }
    double weight_of(std::uint64_t count) const {
        return static_cast<double>(count) / static_cast<double>(n_replicates);
    }

    void add(const PassageOutcome& o);
    // positions of crossed samples, smallest/largest; 0 when empty
    double support_min() const;
    double support_max() const;
    // weighted sample median of the crossed positions
    double median() const;
};

// Merge is associative and commutative in distribution terms; merging in
// replicate order keeps the result independent of worker count.
EmpiricalLaw merge(EmpiricalLaw a, const EmpiricalLaw& b);

// n independent replicates of run_to_passage, one derived RNG stream per
// replicate index. The parallel version fans replicates across OpenMP
// workers and folds outcomes in index order; the serial version is the
// reference implementation and produces bit-identical laws.
EmpiricalLaw estimate_law(const LevyTriplet& t, double level, bool strict, std::uint64_t n,
                          const SimConfig& cfg);
EmpiricalLaw estimate_law_serial(const LevyTriplet& t, double level, bool strict, std::uint64_t n,
                                 const SimConfig& cfg);

// ---------------------------------------------------------------------------
// Degeneracy (P-triviality) testing
// ---------------------------------------------------------------------------

struct TrivialityVerdict {
    enum class Kind { Trivial, NonTrivial, Undecided };
    Kind verdict = Kind::Undecided;
    double point = 0.0;              // valid iff Trivial and not vacuous
    bool vacuous = false;            // fewer than min_crossed samples: trivial by the zero-mass convention
    double support_diameter = 0.0;
    double within_delta_fraction = 0.0;
    double delta = 0.0;
    std::uint64_t crossed = 0;
};

std::string to_string(TrivialityVerdict::Kind k);
std::string summary(const TrivialityVerdict& v);

// Concentration test against the weighted sample median r: Trivial when all
// crossed weight lies in [r-delta, r+delta] and the support diameter is at
// most 2*delta; NonTrivial when the in-band fraction falls below
// 1 - 3*sqrt(0.25/crossed); Undecided in between. With fewer than
// min_crossed crossed samples the verdict is Trivial and flagged vacuous.
// delta == 0 is meaningful (bit-exact concentration) and is the default for
// event-driven engines.
TrivialityVerdict triviality_test(const EmpiricalLaw& law, double delta, std::uint64_t min_crossed = 50);

// Default concentration tolerance: 0 for event-driven triplets, 6*sigma*sqrt(dt)
// for grid triplets (the crossing resolution of the grid engine).
double default_delta(const LevyTriplet& t, const SimConfig& cfg);

// ---------------------------------------------------------------------------
// Convolution identity of the first-passage laws
// ---------------------------------------------------------------------------

struct IdentityBin {
    double lo = 0.0, hi = 0.0;   // bin [lo, hi)
    double lhs = 0.0, rhs = 0.0;
    double se_lhs = 0.0, se_rhs = 0.0;
    double discrepancy = 0.0;    // |lhs - rhs|
    double pooled_se = 0.0;
    double studentized = 0.0;
};

struct IdentityReport {
    double b = 0.0, c = 0.0;
    std::uint64_t n = 0;
    std::vector<IdentityBin> bins;
    double lhs_outside = 0.0, rhs_outside = 0.0;   // crossed mass outside the bins
    double lhs_censored = 0.0;
    double rhs_censored_first = 0.0;               // censored while passing c
    double rhs_censored_second = 0.0;              // censored on the restarted leg
    double max_studentized = 0.0;
};

// Checks that the law over level b equals the composition through level c:
// the left side estimates the law at b directly; the right side samples the
// position at c and restarts an independent replicate from zero at the
// shifted level (stationary independent increments), pairing one
// continuation per replicate. Censored replicates are excluded from both
// sides and reported. Bin edges partition [edges.front(), edges.back());
// mass outside is reported separately.
IdentityReport convolution_check(const LevyTriplet& t, double b, double c, std::uint64_t n,
                                 const SimConfig& cfg, const std::vector<double>& edges);

// Default bins: lattice triplets get unit-mesh bins centred on the lattice
// points of [b, b + largest jump]; otherwise uniform bins of width (b-c)/20.
std::vector<double> default_identity_edges(const LevyTriplet& t, double b, double c);

// ---------------------------------------------------------------------------
// Multi-level consistency
// ---------------------------------------------------------------------------

struct LevelVerdict {
    double level = 0.0;
    TrivialityVerdict verdict;
    double crossed_mass = 0.0;
    double censored_mass = 0.0;
};

struct ConsistencyReport {
    std::vector<LevelVerdict> levels;
    bool homogeneous = true;       // decided, non-vacuous verdicts all agree
    bool theorem_violation = false;  // decided mix of Trivial and NonTrivial
    std::uint64_t decided = 0;
};

// Per-level triviality over two or more levels. One trivial level implies
// all levels trivial, so a decided mixed outcome is flagged as a violation.
ConsistencyReport multi_level_consistency(const LevyTriplet& t, const std::vector<double>& levels,
                                          std::uint64_t n, const SimConfig& cfg, double delta,
                                          std::uint64_t min_crossed = 50);

}  // namespace levylab
