#pragma once

#include "levylab/rational.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace levylab {

// ---------------------------------------------------------------------------
// Jump measures
// ---------------------------------------------------------------------------

// A finite jump atom. Sizes and rates are kept as exact rationals: values
// parsed from decimal or "p/q" strings are exact by construction, values
// taken from binary doubles are the (exact) dyadic rational the double
// represents. Cached doubles serve the simulation hot paths.
struct JumpAtom {
    Rational size;   // != 0
    Rational rate;   // > 0
    double size_d = 0.0;
    double rate_d = 0.0;

    JumpAtom() = default;
    JumpAtom(Rational s, Rational r)
        : size(std::move(s)), rate(std::move(r)), size_d(levylab::to_double(size)), rate_d(levylab::to_double(rate)) {}
    JumpAtom(double s, double r) : JumpAtom(rational_from_double(s), rational_from_double(r)) {}
};

// One side of a power-law jump density c * |x|^(-1-alpha) restricted to
// |x| in (lo, hi]. lo == 0 gives the full (infinite-activity) tail.
struct PowerTailSide {
    double alpha = 1.0;  // activity index in (0,2)
    double coef = 0.0;   // c >= 0
    double lo = 0.0;     // >= 0
    double hi = std::numeric_limits<double>::infinity();

    bool active() const { return coef > 0.0 && hi > lo; }
    // total intensity of the window; +inf when lo == 0
    double mass() const;
    // intensity of sizes with |x| > a inside the window
    double mass_above(double a) const;
    // ∫ x^2 over the window intersected with |x| <= a
    double variance_below(double a) const;
    // ∫ |x| over the window intersected with (a, b]
    double abs_mean_between(double a, double b) const;
    // inverse-CDF sample of |x| from the window intersected with |x| > a;
    // u uniform on [0,1)
    double sample_above(double a, double u) const;
};

// Parametric infinite-activity descriptor: stable-like power tails,
// c± |x|^(-1-alpha) dx on each side, with per-side truncation windows.
// min(1, x^2) integrates finitely for every alpha in (0,2).
struct TailFamily {
    double alpha = 0.0;  // activity index in (0,2)
    PowerTailSide pos;
    PowerTailSide neg;

    bool has_positive_mass() const { return pos.active(); }
    double mass_above(double a) const { return pos.mass_above(a); }  // lambda((a,inf))
    // ∫ x^2 over both sides, |x| <= a
    double variance_below(double a) const { return pos.variance_below(a) + neg.variance_below(a); }
    // signed ∫ x over both sides, |x| in (a, b]
    double signed_mean_between(double a, double b) const {
        return pos.abs_mean_between(a, b) - neg.abs_mean_between(a, b);
    }
};

TailFamily make_stable_tail(double alpha, double c_pos, double c_neg);

struct JumpMeasure {
    std::vector<JumpAtom> atoms;           // pairwise distinct non-zero sizes
    std::optional<TailFamily> tail;

    Rational total_finite_rate() const;    // sum of atom rates
    double total_finite_rate_d() const;
    bool has_positive_component() const;   // any mass on (0, inf)
    bool empty() const { return atoms.empty() && !tail; }
};

// ---------------------------------------------------------------------------
// Triplets
// ---------------------------------------------------------------------------

// Drift bookkeeping convention: Zero stores the drift with no jump
// compensation (finite activity only), UnitBall compensates jumps with
// |x| < 1. The stored drift is always relative to the declared cutoff and
// is never rewritten.
enum class Cutoff { Zero, UnitBall };

struct LevyTriplet {
    double sigma2 = 0.0;
    JumpMeasure jumps;
    Rational drift = 0;
    double drift_d = 0.0;
    Cutoff cutoff = Cutoff::Zero;

    void set_drift(Rational d) {
        drift = std::move(d);
        drift_d = levylab::to_double(drift);
    }
    bool finite_activity() const { return !jumps.tail.has_value(); }
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string joined() const;
};

// Reports every violated invariant; an empty report means a valid triplet.
ValidationReport validate_triplet(const LevyTriplet& t);

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

struct ProcessClass {
    enum class Variant { SpectrallyNegative, UpwardsSkipFree, NonDeterministicOvershoots };
    Variant variant = Variant::NonDeterministicOvershoots;
    double h = 0.0;          // mesh, valid iff UpwardsSkipFree
    Rational h_exact = 0;    // exact mesh, valid iff UpwardsSkipFree
    std::string rationale;   // machine-readable reason code

    bool is_skip_free() const { return variant == Variant::UpwardsSkipFree; }
};

std::string to_string(ProcessClass::Variant v);

// Largest h > 0 such that every atom size lies on h*Z (within tol) and the
// positive atom sizes are exactly {h}. tol == 0 runs exact rational gcd
// arithmetic; tol > 0 works on the cached doubles. The positive atom pins
// h, so when a fit exists it is unique.
std::optional<Rational> lattice_fit(std::span<const JumpAtom> atoms, double tol);

// The zero-cutoff drift of a finite-activity triplet (explicit compensation
// sum; the stored drift is left untouched). nullopt when a tail is present.
std::optional<Rational> drift_under_zero_cutoff(const LevyTriplet& t);

// Decides, for a valid triplet, which of the three regimes it falls in:
// no positive jumps at all, a compound Poisson chain on h*Z whose only
// upward jump is +h, or anything else (overshoots then genuinely random).
// lattice_tol is forwarded to lattice_fit.
ProcessClass classify(const LevyTriplet& t, double lattice_tol = 0.0);

// Deterministic position at first passage over level x, when one exists:
// 0 for x <= 0 (passage happens at time zero), x itself when there are no
// positive jumps, h*ceil(x/h) for a skip-free chain, nullopt otherwise.
std::optional<double> predicted_passage_position(const ProcessClass& c, double x);

// Smallest integer k with k*h >= x (resp. k*h > x), robust against the
// rounding of x/h: the returned k is verified with exact double compares.
long long ceil_multiple(double x, double h);
long long ceil_multiple_strict(double x, double h);

// Spatial rescaling x -> s*x: atom sizes and drift scale by s, sigma2 by
// s^2, tail windows by s with intensities adjusted to preserve rates.
LevyTriplet scale_triplet(const LevyTriplet& t, const Rational& s);

}  // namespace levylab
