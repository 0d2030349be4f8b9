#pragma once

#include "levylab/config.hpp"
#include "levylab/oracle.hpp"
#include "levylab/overshoot.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace levylab {

inline constexpr const char* kVersion = "levylab-0.1.0";

struct ReportFile {
    std::string name;
    std::string content;
};

// Everything a run produces. The files are a pure function of (config,
// seed): wall time is measured but deliberately kept out of them so bundles
// reproduce byte-identically.
struct ReportBundle {
    std::vector<ReportFile> files;
    std::string summary;
    int exit_code = 0;        // 0 ok, 1 validation failure, 2 theorem violation
    double wall_seconds = 0.0;
};

bool same_files(const ReportBundle& a, const ReportBundle& b);

ReportBundle run_experiment(const ExperimentConfig& cfg);
void write_bundle(const ReportBundle& b, const std::string& out_dir);

// shortest round-trip formatting shared by all report writers
std::string fmt(double v);

// bin_left,bin_right,mass rows for any plotting tool; a vacuous law yields
// a header-only table that still carries the censored mass
std::string emit_histogram_data(const EmpiricalLaw& law, const std::vector<double>& edges,
                                OutputFormat format);
std::vector<double> default_histogram_edges(const EmpiricalLaw& law);

// ---------------------------------------------------------------------------
// The process zoo
// ---------------------------------------------------------------------------

struct ZooEntry {
    std::string name;
    LevyTriplet triplet;
    double horizon = 10.0;
    double dt = 0.01;
    std::vector<double> levels{0.5, 1.5, 2.5};
};

// Built-in catalog: a spectrally negative compound Poisson process with
// upward drift, Brownian motion with drift, skip-free chains in both drift
// regimes, a two-positive-atom chain, a chain with an irrational atom, and
// Brownian motion with an added positive jump.
std::vector<ZooEntry> zoo_catalog();

struct ZooLevelResult {
    double level = 0.0;
    TrivialityVerdict verdict;
    double crossed_mass = 0.0;
    double censored_mass = 0.0;
    int oracle_ok = -1;   // 1 within band, 0 outside, -1 no oracle
};

struct ZooEntryResult {
    std::string name;
    ProcessClass cls;
    std::vector<ZooLevelResult> levels;
    bool homogeneous = true;
    bool theorem_ok = false;
    bool has_oracle = false;
    double diag_positive_fraction = 0.0;   // replicates whose running supremum jumps
};

struct ZooResult {
    std::vector<ZooEntryResult> entries;
    bool any_violation = false;
    std::uint64_t n = 0;
    std::uint64_t n_diag = 0;
    std::uint64_t seed = 0;
    double diag_horizon = 3.0;
};

// Classifies every catalog entry, estimates per-level laws and verdicts,
// cross-validates against the exact oracle where it applies, and checks
// that the analytic classification agrees with the simulated verdicts.
ZooResult run_zoo(std::uint64_t seed, std::uint64_t n, std::uint64_t n_diag = 1000);

}  // namespace levylab
