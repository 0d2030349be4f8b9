#include "levylab/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levylab {

// ---------------------------------------------------------------------------
// Power tails
// ---------------------------------------------------------------------------

namespace {

// ∫_a^b x^(-1-alpha) dx for 0 < a <= b (b may be +inf)
double power_mass(double alpha, double a, double b) {
    if (b <= a) return 0.0;
    double upper = std::isinf(b) ? 0.0 : std::pow(b, -alpha);
    return (std::pow(a, -alpha) - upper) / alpha;
}

// ∫_a^b x^(1-alpha) dx for 0 <= a <= b < inf  (exponent 2-alpha > 0)
double power_second_moment(double alpha, double a, double b) {
    if (b <= a) return 0.0;
    double p = 2.0 - alpha;
    return (std::pow(b, p) - std::pow(a, p)) / p;
}

// ∫_a^b x^(-alpha) dx for 0 < a <= b < inf
double power_first_moment(double alpha, double a, double b) {
    if (b <= a) return 0.0;
    if (alpha == 1.0) return std::log(b / a);
    double p = 1.0 - alpha;
    return (std::pow(b, p) - std::pow(a, p)) / p;
}

}  // namespace

double PowerTailSide::mass() const {
    if (!active()) return 0.0;
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return coef * power_mass(alpha, lo, hi);
}

double PowerTailSide::mass_above(double a) const {
    if (!active()) return 0.0;
    double l = std::max(lo, a);
    if (l == 0.0) return std::numeric_limits<double>::infinity();
    return coef * power_mass(alpha, l, hi);
}

double PowerTailSide::variance_below(double a) const {
    if (!active()) return 0.0;
    double u = std::min(hi, a);
    return coef * power_second_moment(alpha, lo, u);
}

double PowerTailSide::abs_mean_between(double a, double b) const {
    if (!active()) return 0.0;
    double l = std::max(lo, a);
    double u = std::min(hi, b);
    if (u <= l) return 0.0;
    if (l == 0.0 && alpha >= 1.0) return std::numeric_limits<double>::infinity();
    return coef * power_first_moment(alpha, l, u);
}

double PowerTailSide::sample_above(double a, double u) const {
    double l = std::max(lo, a);
    if (!(l > 0.0) || l >= hi) throw std::invalid_argument("sample_above: empty or unbounded-rate window");
    double la = std::pow(l, -alpha);
    double ha = std::isinf(hi) ? 0.0 : std::pow(hi, -alpha);
    return std::pow(la - u * (la - ha), -1.0 / alpha);
}

TailFamily make_stable_tail(double alpha, double c_pos, double c_neg) {
    TailFamily f;
    f.alpha = alpha;
    f.pos = PowerTailSide{alpha, c_pos, 0.0, std::numeric_limits<double>::infinity()};
    f.neg = PowerTailSide{alpha, c_neg, 0.0, std::numeric_limits<double>::infinity()};
    return f;
}

// ---------------------------------------------------------------------------
// Jump measures and triplets
// ---------------------------------------------------------------------------

Rational JumpMeasure::total_finite_rate() const {
    Rational sum = 0;
    for (const auto& a : atoms) sum += a.rate;
    return sum;
}

double JumpMeasure::total_finite_rate_d() const {
    double sum = 0.0;
    for (const auto& a : atoms) sum += a.rate_d;
    return sum;
}

bool JumpMeasure::has_positive_component() const {
    for (const auto& a : atoms)
        if (a.size > 0) return true;
    return tail && tail->has_positive_mass();
}

std::string ValidationReport::joined() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v;
    }
    return out;
}

ValidationReport validate_triplet(const LevyTriplet& t) {
    ValidationReport rep;
    auto flag = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };

    if (std::isnan(t.sigma2)) flag("sigma2 not finite");
    else if (t.sigma2 < 0.0) flag("sigma2 negative");

    for (std::size_t i = 0; i < t.jumps.atoms.size(); ++i) {
        const auto& a = t.jumps.atoms[i];
        if (a.size == 0) flag("atom size zero");
        if (a.rate <= 0) flag("atom rate not positive");
        for (std::size_t j = i + 1; j < t.jumps.atoms.size(); ++j)
            if (a.size == t.jumps.atoms[j].size) flag("duplicate atom sizes");
    }

    if (t.jumps.tail) {
        const TailFamily& f = *t.jumps.tail;
        if (!(f.alpha > 0.0 && f.alpha < 2.0)) flag("tail alpha outside (0,2)");
        if (f.pos.coef < 0.0 || f.neg.coef < 0.0) flag("tail coefficient negative");
        if (!f.pos.active() && !f.neg.active()) flag("tail family with zero mass");
        for (const PowerTailSide* s : {&f.pos, &f.neg})
            if (s->coef > 0.0 && (s->lo < 0.0 || s->hi <= s->lo)) flag("tail window invalid");
        if (t.cutoff == Cutoff::Zero) flag("Zero cutoff with infinite activity");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Lattice detection and classification
// ---------------------------------------------------------------------------

std::optional<Rational> lattice_fit(std::span<const JumpAtom> atoms, double tol) {
    if (atoms.empty()) throw std::invalid_argument("lattice_fit: empty atom list");
    if (tol < 0.0) throw std::invalid_argument("lattice_fit: negative tolerance");

    if (tol == 0.0) {
        const JumpAtom* positive = nullptr;
        Rational g = 0;
        for (const auto& a : atoms) {
            if (a.size > 0) {
                if (positive) return std::nullopt;  // two distinct positive sizes
                positive = &a;
            }
            g = rational_gcd(g, a.size);
        }
        if (!positive) return std::nullopt;
        // any admissible h divides the gcd, and the positive atom must sit at h
        if (g != positive->size) return std::nullopt;
        return g;
    }

    double h = 0.0;
    for (const auto& a : atoms)
        if (a.size_d > 0.0) h = std::max(h, a.size_d);
    if (h == 0.0) return std::nullopt;
    for (const auto& a : atoms) {
        double m = std::round(a.size_d / h);
        if (a.size_d > 0.0 && m != 1.0) return std::nullopt;
        if (m == 0.0 || std::abs(a.size_d - m * h) > tol) return std::nullopt;
    }
    return rational_from_double(h);
}

std::optional<Rational> drift_under_zero_cutoff(const LevyTriplet& t) {
    if (t.jumps.tail) return std::nullopt;
    if (t.cutoff == Cutoff::Zero) return t.drift;
    Rational comp = 0;  // UnitBall compensates jumps with |x| < 1
    for (const auto& a : t.jumps.atoms)
        if (boost::multiprecision::abs(a.size) < 1) comp += a.size * a.rate;
    return t.drift - comp;
}

std::string to_string(ProcessClass::Variant v) {
    switch (v) {
        case ProcessClass::Variant::SpectrallyNegative: return "SpectrallyNegative";
        case ProcessClass::Variant::UpwardsSkipFree: return "UpwardsSkipFree";
        case ProcessClass::Variant::NonDeterministicOvershoots: return "NonDeterministicOvershoots";
    }
    return "?";
}

ProcessClass classify(const LevyTriplet& t, double lattice_tol) {
    auto rep = validate_triplet(t);
    if (!rep.ok()) throw std::invalid_argument("classify: invalid triplet: " + rep.joined());

    auto result = [](ProcessClass::Variant v, std::string why) {
        ProcessClass c;
        c.variant = v;
        c.rationale = std::move(why);
        return c;
    };
    using V = ProcessClass::Variant;

    if (!t.jumps.has_positive_component()) return result(V::SpectrallyNegative, "no_positive_jumps");

    if (t.jumps.tail) return result(V::NonDeterministicOvershoots, "infinite_activity");
    if (t.sigma2 > 0.0) return result(V::NonDeterministicOvershoots, "sigma2_positive");
    if (*drift_under_zero_cutoff(t) != 0) return result(V::NonDeterministicOvershoots, "nonzero_drift");

    std::size_t positives = 0;
    for (const auto& a : t.jumps.atoms)
        if (a.size > 0) ++positives;
    if (positives > 1) return result(V::NonDeterministicOvershoots, "multiple_positive_atoms");

    auto fit = lattice_fit(t.jumps.atoms, lattice_tol);
    if (!fit) return result(V::NonDeterministicOvershoots, "non_lattice_support");

    ProcessClass c;
    c.variant = V::UpwardsSkipFree;
    c.h_exact = *fit;
    c.h = to_double(c.h_exact);
    c.rationale = "compound_poisson_skip_free";
    return c;
}

long long ceil_multiple(double x, double h) {
    auto k = static_cast<long long>(std::ceil(x / h));
    while (static_cast<double>(k) * h < x) ++k;
    while (static_cast<double>(k - 1) * h >= x) --k;
    return k;
}

long long ceil_multiple_strict(double x, double h) {
    auto k = static_cast<long long>(std::floor(x / h)) + 1;
    while (static_cast<double>(k) * h <= x) ++k;
    while (static_cast<double>(k - 1) * h > x) --k;
    return k;
}

std::optional<double> predicted_passage_position(const ProcessClass& c, double x) {
    if (x <= 0.0) return 0.0;  // the level is entered at time zero
    switch (c.variant) {
        case ProcessClass::Variant::SpectrallyNegative: return x;
        case ProcessClass::Variant::UpwardsSkipFree:
            return static_cast<double>(ceil_multiple(x, c.h)) * c.h;
        case ProcessClass::Variant::NonDeterministicOvershoots: return std::nullopt;
    }
    return std::nullopt;
}

LevyTriplet scale_triplet(const LevyTriplet& t, const Rational& s) {
    if (s <= 0) throw std::invalid_argument("scale_triplet: scale must be positive");
    double sd = to_double(s);

    LevyTriplet out;
    out.sigma2 = t.sigma2 * sd * sd;
    out.cutoff = t.cutoff;
    out.jumps.atoms.reserve(t.jumps.atoms.size());
    for (const auto& a : t.jumps.atoms) out.jumps.atoms.emplace_back(a.size * s, a.rate);
    if (t.jumps.tail) {
        TailFamily f = *t.jumps.tail;
        for (PowerTailSide* side : {&f.pos, &f.neg}) {
            side->lo *= sd;
            side->hi *= sd;
            side->coef *= std::pow(sd, f.alpha);  // preserves window rates
        }
        out.jumps.tail = f;
    }

    Rational drift = t.drift * s;
    if (t.cutoff == Cutoff::UnitBall && s != 1) {
        // Rescaling moves jumps across the |x| < 1 compensation boundary;
        // adjust the stored drift so the scaled triplet is the law of s*X.
        Rational atom_corr = 0;
        for (const auto& a : out.jumps.atoms) {
            auto abs_size = boost::multiprecision::abs(a.size);
            bool in_new = abs_size < 1;
            bool in_old = abs_size < s;  // image of the original unit ball
            if (in_new && !in_old) atom_corr += a.size * a.rate;
            if (!in_new && in_old) atom_corr -= a.size * a.rate;
        }
        drift += atom_corr;
        if (out.jumps.tail) {
            double lo = std::min(1.0, sd), hi = std::max(1.0, sd);
            double tail_corr = out.jumps.tail->signed_mean_between(lo, hi);
            if (sd > 1.0) tail_corr = -tail_corr;
            drift += rational_from_double(tail_corr);
        }
    }
    out.set_drift(std::move(drift));
    return out;
}

}  // namespace levylab
