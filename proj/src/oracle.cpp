#include "levylab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace levylab {

namespace {

long long rational_ceil(const Rational& q) {
    BigInt n = numerator(q), d = denominator(q);  // d > 0 by normalization
    BigInt fl = n / d;
    if (n % d != 0 && n < 0) fl -= 1;
    BigInt ce = (n % d == 0) ? fl : fl + 1;
    return ce.convert_to<long long>();
}

// ---------------------------------------------------------------------------
// Banded LU for the absorption system (I - P)U = B. The matrix is a
// nonsingular M-matrix, so elimination without pivoting is safe; with
// Rational scalars the solve is exact.
// ---------------------------------------------------------------------------

template <typename Scalar>
struct BandSystem {
    long long n = 0;
    long long bl = 0, bu = 0;                 // lower/upper bandwidth
    std::vector<std::vector<Scalar>> band;    // band[i][j - i + bl]
    std::vector<std::vector<Scalar>> rhs;     // rhs[i][t]

    BandSystem(long long n_, long long bl_, long long bu_, long long targets)
        : n(n_), bl(bl_), bu(bu_),
          band(static_cast<std::size_t>(n_), std::vector<Scalar>(static_cast<std::size_t>(bl_ + bu_ + 1), Scalar(0))),
          rhs(static_cast<std::size_t>(n_), std::vector<Scalar>(static_cast<std::size_t>(targets), Scalar(0))) {}

    Scalar& a(long long i, long long j) {
        return band[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i + bl)];
    }

    void solve() {
        for (long long i = 0; i < n; ++i) {
            Scalar pivot = a(i, i);
            for (long long r = i + 1; r <= std::min(n - 1, i + bl); ++r) {
                Scalar f = a(r, i) / pivot;
                if (f == Scalar(0)) continue;
                for (long long c = i; c <= std::min(n - 1, i + bu); ++c) a(r, c) -= f * a(i, c);
                auto& br = rhs[static_cast<std::size_t>(r)];
                const auto& bi = rhs[static_cast<std::size_t>(i)];
                for (std::size_t t = 0; t < br.size(); ++t) br[t] -= f * bi[t];
            }
        }
        for (long long i = n - 1; i >= 0; --i) {
            auto& bi = rhs[static_cast<std::size_t>(i)];
            for (std::size_t t = 0; t < bi.size(); ++t) {
                Scalar x = bi[t];
                for (long long c = i + 1; c <= std::min(n - 1, i + bu); ++c)
                    x -= a(i, c) * rhs[static_cast<std::size_t>(c)][t];
                bi[t] = x / a(i, i);
            }
        }
    }
};

struct ChainLayout {
    long long K = 0;        // absorbing multiples are >= K
    long long L = 0;        // transient states are -L .. K-1
    long long n = 0;
    long long umax = 0;     // largest positive multiple
    long long dmax = 0;     // largest downward reach
};

ChainLayout make_layout(const LatticeChainSpec& spec, const Rational& level, long long floor_depth) {
    ChainLayout lay;
    lay.K = rational_ceil(Rational(level / spec.h));
    lay.L = floor_depth;
    lay.n = lay.L + lay.K;
    for (const auto& [m, rate] : spec.atoms) {
        lay.umax = std::max(lay.umax, m);
        lay.dmax = std::max(lay.dmax, -m);
    }
    return lay;
}

// Fills the system for the embedded jump chain. Targets: column c in
// [0, umax) is absorption at multiple K + c; the last column is the floor.
template <typename Scalar>
void build_system(const LatticeChainSpec& spec, const ChainLayout& lay,
                  const std::vector<Scalar>& probs, BandSystem<Scalar>& sys) {
    for (long long i = 0; i < lay.n; ++i) {
        sys.a(i, i) = Scalar(1);
        long long k = i - lay.L;
        for (std::size_t j = 0; j < spec.atoms.size(); ++j) {
            long long to = k + spec.atoms[j].first;
            if (to >= lay.K)
                sys.rhs[static_cast<std::size_t>(i)][static_cast<std::size_t>(to - lay.K)] += probs[j];
            else if (to < -lay.L)
                sys.rhs[static_cast<std::size_t>(i)][static_cast<std::size_t>(lay.umax)] += probs[j];
            else
                sys.a(i, to + lay.L) -= probs[j];
        }
    }
}

std::vector<Rational> rational_probs(const LatticeChainSpec& spec) {
    Rational total = 0;
    for (const auto& [m, rate] : spec.atoms) total += rate;
    if (total <= 0) throw std::invalid_argument("oracle: chain needs positive total rate");
    std::vector<Rational> p;
    p.reserve(spec.atoms.size());
    for (const auto& [m, rate] : spec.atoms) p.push_back(rate / total);
    return p;
}

std::vector<double> double_probs(const LatticeChainSpec& spec) {
    double total = 0.0;
    for (const auto& [m, rate] : spec.atoms) total += to_double(rate);
    std::vector<double> p;
    p.reserve(spec.atoms.size());
    for (const auto& [m, rate] : spec.atoms) p.push_back(to_double(rate) / total);
    return p;
}

// Adjustment coefficient of the embedded walk in per-multiple units:
// the positive root of sum q_j exp(gamma m_j) = 1, or 0 when the walk does
// not drift down. exp(-gamma * gap) bounds the crossing probability from
// `gap` multiples below the level.
double adjustment_coefficient(const std::vector<std::pair<long long, Rational>>& atoms,
                              const std::vector<double>& probs) {
    double mean = 0.0;
    bool has_up = false;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        mean += probs[j] * static_cast<double>(atoms[j].first);
        has_up = has_up || atoms[j].first > 0;
    }
    if (!has_up || mean >= 0.0) return 0.0;
    auto f = [&](double g) {
        double s = -1.0;
        for (std::size_t j = 0; j < atoms.size(); ++j)
            s += probs[j] * std::exp(g * static_cast<double>(atoms[j].first));
        return s;
    };
    double hi = 1.0;
    while (f(hi) < 0.0 && hi < 700.0) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return lo;
}

double floor_escape_factor(const LatticeChainSpec& spec, const ChainLayout& lay,
                           const std::vector<double>& probs) {
    bool has_up = false;
    for (const auto& [m, rate] : spec.atoms) has_up = has_up || m > 0;
    if (!has_up) return 0.0;  // nothing below the floor can ever cross
    double gamma = adjustment_coefficient(spec.atoms, probs);
    if (gamma == 0.0) return 1.0;
    return std::exp(-gamma * static_cast<double>(lay.K + lay.L + 1));
}

template <typename Scalar>
ExactLaw solve_law(const LatticeChainSpec& spec, const Rational& level, long long floor_depth,
                   bool rational) {
    ChainLayout lay = make_layout(spec, level, floor_depth);
    if (lay.umax == 0) throw std::invalid_argument("oracle: chain has no upward jumps, passage law is null");
    long long bl = std::min(lay.dmax, lay.n);
    long long bu = std::min(lay.umax, lay.n);
    BandSystem<Scalar> sys(lay.n, bl, bu, lay.umax + 1);

    std::vector<Scalar> probs;
    if constexpr (std::is_same_v<Scalar, Rational>) {
        probs = rational_probs(spec);
    } else {
        probs = double_probs(spec);
    }
    build_system(spec, lay, probs, sys);
    BandSystem<Scalar> saved = rational ? BandSystem<Scalar>(0, 0, 0, 0) : sys;  // keep A,B for the residual
    sys.solve();

    ExactLaw law;
    law.h = spec.h;
    law.floor_used = floor_depth;
    law.rational_solve = rational;
    const auto& row0 = sys.rhs[static_cast<std::size_t>(lay.L)];  // start state 0
    Rational floor_prob = 0;
    for (long long c = 0; c < lay.umax; ++c) {
        const Scalar& mass = row0[static_cast<std::size_t>(c)];
        if (mass != Scalar(0)) {
            if constexpr (std::is_same_v<Scalar, Rational>) {
                law.masses[lay.K + c] = mass;
            } else {
                law.masses[lay.K + c] = rational_from_double(mass);
            }
        }
    }
    if constexpr (std::is_same_v<Scalar, Rational>) {
        floor_prob = row0[static_cast<std::size_t>(lay.umax)];
    } else {
        floor_prob = rational_from_double(row0[static_cast<std::size_t>(lay.umax)]);
    }
    // rounded up by an ulp-scale margin: for single-step-down chains the
    // escape factor is tight, and a certificate must never round below the
    // true error
    law.lost_mass_bound =
        to_double(floor_prob) * floor_escape_factor(spec, lay, double_probs(spec)) * (1.0 + 1e-12);

    if constexpr (std::is_same_v<Scalar, double>) {
        // one pass of |A x - b| over the saved system
        double res = 0.0;
        for (long long i = 0; i < lay.n; ++i) {
            for (std::size_t t = 0; t < saved.rhs[0].size(); ++t) {
                double acc = 0.0;
                for (long long c = std::max<long long>(0, i - bl); c <= std::min(lay.n - 1, i + bu); ++c)
                    acc += saved.a(i, c) * sys.rhs[static_cast<std::size_t>(c)][t];
                res = std::max(res, std::abs(acc - saved.rhs[static_cast<std::size_t>(i)][t]));
            }
        }
        law.residual_inf = res;
    }
    return law;
}

void check_spec(const LatticeChainSpec& spec) {
    if (spec.h <= 0) throw std::invalid_argument("oracle: mesh must be positive");
    if (spec.atoms.empty()) throw std::invalid_argument("oracle: empty chain");
    for (const auto& [m, rate] : spec.atoms) {
        if (m == 0) throw std::invalid_argument("oracle: zero jump multiple");
        if (rate <= 0) throw std::invalid_argument("oracle: non-positive rate");
    }
}

}  // namespace

Rational ExactLaw::total_mass() const {
    Rational sum = 0;
    for (const auto& [k, m] : masses) sum += m;
    return sum;
}

std::optional<LatticeChainSpec> make_lattice_spec(const LevyTriplet& t, long long max_multiple) {
    if (t.sigma2 != 0.0 || t.jumps.tail || t.jumps.atoms.empty()) return std::nullopt;
    auto drift0 = drift_under_zero_cutoff(t);
    if (!drift0 || *drift0 != 0) return std::nullopt;
    Rational g = 0;
    for (const auto& a : t.jumps.atoms) g = rational_gcd(g, a.size);
    if (g <= 0) return std::nullopt;
    LatticeChainSpec spec;
    spec.h = g;
    for (const auto& a : t.jumps.atoms) {
        Rational q = a.size / g;
        if (!is_integer(q)) return std::nullopt;
        BigInt num = numerator(q);
        if (boost::multiprecision::abs(num) > max_multiple) return std::nullopt;
        spec.atoms.emplace_back(num.convert_to<long long>(), a.rate);
    }
    return spec;
}

ExactLaw exact_passage_law_at_floor(const LatticeChainSpec& spec, const Rational& level,
                                    long long floor_depth) {
    check_spec(spec);
    if (level <= 0) throw std::invalid_argument("oracle: level must be positive");
    if (floor_depth < 1) throw std::invalid_argument("oracle: floor depth must be >= 1");
    ChainLayout lay = make_layout(spec, level, floor_depth);
    bool rational = lay.n <= 2000;
    return rational ? solve_law<Rational>(spec, level, floor_depth, true)
                    : solve_law<double>(spec, level, floor_depth, false);
}

ExactLaw exact_passage_law(const LatticeChainSpec& spec, const Rational& level) {
    check_spec(spec);
    if (level <= 0) throw std::invalid_argument("oracle: level must be positive");
    long long L = std::max<long long>(1, spec.floor_init);
    while (true) {
        ExactLaw law = exact_passage_law_at_floor(spec, level, L);
        if (law.lost_mass_bound < spec.lost_tolerance) return law;
        if (L >= spec.floor_cap)
            throw std::runtime_error("oracle: floor cap exceeded without certifying lost mass");
        L = std::min(spec.floor_cap, 2 * L);
    }
}

PassageProbability exact_passage_probability(const LatticeChainSpec& spec, const Rational& level) {
    ExactLaw law = exact_passage_law(spec, level);
    return PassageProbability{law.total_mass(), law.lost_mass_bound};
}

double late_crossing_bound(const LatticeChainSpec& spec, const Rational& level, double horizon,
                           long long steps) {
    check_spec(spec);
    if (level <= 0) throw std::invalid_argument("oracle: level must be positive");
    ExactLaw law = exact_passage_law(spec, level);
    ChainLayout lay = make_layout(spec, level, law.floor_used);

    // crossing probability started from every transient state
    BandSystem<double> sys(lay.n, std::min(lay.dmax, lay.n), std::min(lay.umax, lay.n), lay.umax + 1);
    std::vector<double> probs = double_probs(spec);
    build_system(spec, lay, probs, sys);
    sys.solve();
    std::vector<double> cross_from(static_cast<std::size_t>(lay.n), 0.0);
    for (long long i = 0; i < lay.n; ++i)
        for (long long c = 0; c < lay.umax; ++c)
            cross_from[static_cast<std::size_t>(i)] += sys.rhs[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];

    // substochastic occupation after `steps` jumps, started at 0
    std::vector<double> occ(static_cast<std::size_t>(lay.n), 0.0);
    occ[static_cast<std::size_t>(lay.L)] = 1.0;
    double floor_mass = 0.0;
    for (long long s = 0; s < steps; ++s) {
        std::vector<double> next(static_cast<std::size_t>(lay.n), 0.0);
        for (long long i = 0; i < lay.n; ++i) {
            double w = occ[static_cast<std::size_t>(i)];
            if (w == 0.0) continue;
            long long k = i - lay.L;
            for (std::size_t j = 0; j < spec.atoms.size(); ++j) {
                long long to = k + spec.atoms[j].first;
                if (to >= lay.K) continue;  // already crossed: not a late crossing
                if (to < -lay.L)
                    floor_mass += w * probs[j];
                else
                    next[static_cast<std::size_t>(to + lay.L)] += w * probs[j];
            }
        }
        occ.swap(next);
    }
    double late_by_steps = 0.0;
    for (long long i = 0; i < lay.n; ++i)
        late_by_steps += occ[static_cast<std::size_t>(i)] * cross_from[static_cast<std::size_t>(i)];
    late_by_steps += floor_mass * floor_escape_factor(spec, lay, probs) + law.lost_mass_bound;

    // chance that `steps` arrivals have not all occurred by the horizon
    double rate = 0.0;
    for (const auto& [m, r] : spec.atoms) rate += to_double(r);
    double lambda = rate * horizon;
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    for (long long k = 1; k < steps; ++k) {
        pmf *= lambda / static_cast<double>(k);
        cdf += pmf;
    }
    return late_by_steps + cdf;
}

double late_crossing_bound_auto(const LatticeChainSpec& spec, const Rational& level, double horizon) {
    double rate = 0.0;
    for (const auto& [m, r] : spec.atoms) rate += to_double(r);
    double expected = rate * horizon;
    double best = 1.0;
    for (double frac : {0.3, 0.4, 0.5, 0.6, 0.7, 0.8}) {
        auto steps = static_cast<long long>(std::max(1.0, std::floor(expected * frac)));
        best = std::min(best, late_crossing_bound(spec, level, horizon, steps));
    }
    return best;
}

double convolution_identity_exact_gap(const LatticeChainSpec& spec, const Rational& b, const Rational& c) {
    if (!(c > 0 && c < b)) throw std::invalid_argument("oracle: require 0<c<b");
    ExactLaw lhs = exact_passage_law(spec, b);
    ExactLaw law_c = exact_passage_law(spec, c);

    std::map<long long, Rational> rhs;
    for (const auto& [kc, mc] : law_c.masses) {
        Rational remaining = b - Rational(kc) * spec.h;
        if (remaining <= 0) {
            rhs[kc] += mc;  // the continuation crosses at time zero in place
            continue;
        }
        ExactLaw law2 = exact_passage_law(spec, remaining);
        for (const auto& [k2, m2] : law2.masses) rhs[kc + k2] += mc * m2;
    }

    double gap = 0.0;
    for (const auto& [k, m] : lhs.masses) {
        auto it = rhs.find(k);
        Rational r = it == rhs.end() ? Rational(0) : it->second;
        gap = std::max(gap, std::abs(to_double(m - r)));
    }
    for (const auto& [k, r] : rhs)
        if (!lhs.masses.count(k)) gap = std::max(gap, std::abs(to_double(r)));
    return gap;
}

}  // namespace levylab
