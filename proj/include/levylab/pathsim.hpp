#pragma once

#include "levylab/model.hpp"
#include "levylab/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace levylab {

// ---------------------------------------------------------------------------
// Simulation configuration and outputs
// ---------------------------------------------------------------------------

struct SimConfig {
    std::uint64_t seed = 0;
    double horizon = 10.0;               // > 0
    double dt = 1e-3;                    // > 0, grid engine only
    bool bridge_correction = true;
    std::optional<double> small_jump_eps;  // required iff a tail family is present
    bool gaussian_substitution = false;
};

enum class Engine { EventDriven, Grid };

enum class RecordKind { Start, Jump, Grid };

struct PathRecord {
    double time;
    double value;
    RecordKind kind;
};

// A simulated trajectory. Event-driven skeletons reconstruct the path
// exactly: between records the path is linear with slope `drift`. Grid
// skeletons sample the diffusion at grid times with jumps interleaved.
struct PathSkeleton {
    std::vector<PathRecord> records;   // strictly increasing times, first (0,0,Start)
    Engine engine = Engine::EventDriven;
    double drift = 0.0;                // slope between event-driven records

    double final_value() const { return records.back().value; }
    std::size_t jump_count() const;
};

enum class CrossKind { Immediate, Drift, Jump, GridEndpoint, Bridge };

struct PassageOutcome {
    double level = 0.0;
    bool strict = false;      // first entrance into (level, inf) instead of [level, inf)
    bool crossed = false;
    // valid iff crossed:
    double time = 0.0;
    double position = 0.0;
    double overshoot = 0.0;   // position - level
    CrossKind kind = CrossKind::Immediate;
    // valid iff censored:
    double horizon = 0.0;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

struct JumpDecomposition {
    LevyTriplet small_part;   // sigma2, drift bookkeeping and jumps <= a
    JumpMeasure big_part;     // exactly the jumps of size > a
    double beta = 0.0;        // total rate of big_part; first big jump ~ Exp(beta)
};

// Independent-sum split of the process at threshold a > 0: the compound
// Poisson part of the positive jumps exceeding a, and the remainder.
JumpDecomposition decompose_jumps(const LevyTriplet& t, double a);

// Exact event-driven simulation of a driftful compound Poisson path
// (sigma2 == 0, no tail, nonzero finite jump mass). On a drift-free lattice
// triplet every record value is an exact integer multiple of the mesh.
PathSkeleton simulate_event_driven(const LevyTriplet& t, const SimConfig& cfg, RngStream& rng);

// Euler-grid simulation for triplets with a Brownian part or a tail family.
// Finite-rate jumps (atoms plus the tail above small_jump_eps) are laid at
// exact exponential times between grid records; the truncated small-jump
// remainder is dropped or, with gaussian_substitution, replaced by an
// independent Brownian term of matched variance.
PathSkeleton simulate_grid(const LevyTriplet& t, const SimConfig& cfg, RngStream& rng);

// First passage of the level under the engine the triplet calls for.
// Weak passage (strict == false) of a non-positive level happens at time
// zero. Drift and bridge crossings land exactly on the level; jump and
// grid-endpoint crossings record the path value.
PassageOutcome run_to_passage(const LevyTriplet& t, double level, bool strict, const SimConfig& cfg,
                              RngStream& rng);

// Largest upward jump of the running supremum along the skeleton; zero when
// the running supremum is continuous. Exact for event-driven skeletons.
double supremum_jump_diagnostic(const PathSkeleton& p);

// Engine selection: event-driven iff sigma2 == 0 and no tail family.
Engine required_engine(const LevyTriplet& t);

// ---------------------------------------------------------------------------
// Compiled form used by the replicate loops (public so estimators can hoist
// the per-triplet setup out of hot loops; behaviour identical to the
// uncompiled entry points).
// ---------------------------------------------------------------------------

struct CompiledModel {
    Engine engine = Engine::EventDriven;
    double horizon = 0.0;
    // event engine
    double total_rate = 0.0;            // finite jump intensity (atoms; grid: atoms + truncated tail)
    std::vector<double> atom_sizes;     // sorted ascending
    std::vector<double> atom_cdf;
    double drift = 0.0;                 // effective linear drift per unit time
    // drift-free exact-lattice mode
    bool lattice = false;
    double mesh = 0.0;
    std::vector<long long> atom_multiples;
    // grid engine
    double dt = 0.0;
    double sigma_total = 0.0;           // sqrt(sigma2 [+ substituted small-jump variance])
    bool bridge_correction = false;
    double tail_rate_pos = 0.0, tail_rate_neg = 0.0;
    std::optional<TailFamily> tail;
    double tail_cut = 0.0;              // small_jump_eps
};

CompiledModel compile_model(const LevyTriplet& t, const SimConfig& cfg);
PassageOutcome run_to_passage(const CompiledModel& m, double level, bool strict, RngStream& rng);

// Verifies the record ordering invariants; used by the tests.
bool skeleton_well_formed(const PathSkeleton& p);

}  // namespace levylab
