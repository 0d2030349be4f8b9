#include "levylab/overshoot.hpp"

#include "levylab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace levylab {

// ---------------------------------------------------------------------------
// EmpiricalLaw
// ---------------------------------------------------------------------------

void EmpiricalLaw::add(const PassageOutcome& o) {
    ++n_replicates;
    if (o.crossed) {
        ++crossed_count;
        ++counts[o.position];
    } else {
        ++censored_count;
    }
}

double EmpiricalLaw::support_min() const { return counts.empty() ? 0.0 : counts.begin()->first; }
double EmpiricalLaw::support_max() const { return counts.empty() ? 0.0 : counts.rbegin()->first; }

double EmpiricalLaw::median() const {
    if (crossed_count == 0) return 0.0;
    std::uint64_t half = (crossed_count + 1) / 2;
    std::uint64_t cum = 0;
    for (const auto& [pos, cnt] : counts) {
        cum += cnt;
        if (cum >= half) return pos;
    }
    return counts.rbegin()->first;
}

EmpiricalLaw merge(EmpiricalLaw a, const EmpiricalLaw& b) {
    if (a.level != b.level || a.strict != b.strict)
        throw std::invalid_argument("merge: laws target different passage problems");
    for (const auto& [pos, cnt] : b.counts) a.counts[pos] += cnt;
    a.crossed_count += b.crossed_count;
    a.censored_count += b.censored_count;
    a.n_replicates += b.n_replicates;
    return a;
}

// ---------------------------------------------------------------------------
// Estimation
// ---------------------------------------------------------------------------

namespace {

EmpiricalLaw fold_outcomes(const std::vector<PassageOutcome>& outs, double level, bool strict,
                           std::uint64_t seed) {
    EmpiricalLaw law;
    law.level = level;
    law.strict = strict;
    law.seed = seed;
    for (const auto& o : outs) law.add(o);
    return law;
}

}  // namespace

EmpiricalLaw estimate_law_serial(const LevyTriplet& t, double level, bool strict, std::uint64_t n,
                                 const SimConfig& cfg) {
    if (n < 1) throw std::invalid_argument("estimate_law: need at least one replicate");
    CompiledModel m = compile_model(t, cfg);
    std::vector<PassageOutcome> outs(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        RngStream rng = RngStream::for_replicate(cfg.seed, i);
        outs[i] = run_to_passage(m, level, strict, rng);
    }
    return fold_outcomes(outs, level, strict, cfg.seed);
}

EmpiricalLaw estimate_law(const LevyTriplet& t, double level, bool strict, std::uint64_t n,
                          const SimConfig& cfg) {
    if (n < 1) throw std::invalid_argument("estimate_law: need at least one replicate");
    CompiledModel m = compile_model(t, cfg);
    std::vector<PassageOutcome> outs(n);
    auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        RngStream rng = RngStream::for_replicate(cfg.seed, static_cast<std::uint64_t>(i));
        outs[static_cast<std::size_t>(i)] = run_to_passage(m, level, strict, rng);
    }
    return fold_outcomes(outs, level, strict, cfg.seed);
}

// ---------------------------------------------------------------------------
// Triviality
// ---------------------------------------------------------------------------

std::string to_string(TrivialityVerdict::Kind k) {
    switch (k) {
        case TrivialityVerdict::Kind::Trivial: return "Trivial";
        case TrivialityVerdict::Kind::NonTrivial: return "NonTrivial";
        case TrivialityVerdict::Kind::Undecided: return "Undecided";
    }
    return "?";
}

std::string summary(const TrivialityVerdict& v) {
    if (v.vacuous) return "Trivial(vacuous)";
    if (v.verdict == TrivialityVerdict::Kind::Trivial)
        return "Trivial(" + std::to_string(v.point) + ")";
    return to_string(v.verdict);
}

TrivialityVerdict triviality_test(const EmpiricalLaw& law, double delta, std::uint64_t min_crossed) {
    if (delta < 0.0) throw std::invalid_argument("triviality_test: delta must be nonnegative");

    TrivialityVerdict v;
    v.delta = delta;
    v.crossed = law.crossed_count;
    if (law.crossed_count < min_crossed) {
        // too little (possibly zero) mass reached the level: trivial by the
        // zero-mass convention, flagged so callers can exclude it
        v.verdict = TrivialityVerdict::Kind::Trivial;
        v.vacuous = true;
        v.point = std::numeric_limits<double>::quiet_NaN();
        v.within_delta_fraction = 1.0;
        return v;
    }

    double median = law.median();
    std::uint64_t in_band = 0;
    for (const auto& [pos, cnt] : law.counts)
        if (pos >= median - delta && pos <= median + delta) in_band += cnt;
    v.within_delta_fraction = static_cast<double>(in_band) / static_cast<double>(law.crossed_count);
    v.support_diameter = law.support_max() - law.support_min();

    if (in_band == law.crossed_count && v.support_diameter <= 2.0 * delta) {
        v.verdict = TrivialityVerdict::Kind::Trivial;
        v.point = median;
    } else {
        // Bernoulli bound on the in-band fraction: variance <= 1/4
        double slack = 3.0 * std::sqrt(0.25 / static_cast<double>(law.crossed_count));
        v.verdict = v.within_delta_fraction < 1.0 - slack ? TrivialityVerdict::Kind::NonTrivial
                                                          : TrivialityVerdict::Kind::Undecided;
    }
    return v;
}

double default_delta(const LevyTriplet& t, const SimConfig& cfg) {
    if (required_engine(t) == Engine::EventDriven) return 0.0;
    double variance = t.sigma2;
    if (t.jumps.tail && cfg.gaussian_substitution && cfg.small_jump_eps)
        variance += t.jumps.tail->variance_below(*cfg.small_jump_eps);
    return 6.0 * std::sqrt(variance) * std::sqrt(cfg.dt);
}

// ---------------------------------------------------------------------------
// Convolution identity
// ---------------------------------------------------------------------------

std::vector<double> default_identity_edges(const LevyTriplet& t, double b, double c) {
    if (required_engine(t) == Engine::EventDriven && !t.jumps.atoms.empty() && t.drift == 0) {
        // lattice-point bins of width h covering [b, b + largest jump],
        // provided the lattice is coarse enough to enumerate
        Rational g = 0;
        for (const auto& a : t.jumps.atoms) g = rational_gcd(g, a.size);
        double jump_max = 0.0;
        for (const auto& a : t.jumps.atoms) jump_max = std::max(jump_max, a.size_d);
        if (g > 0 && jump_max > 0.0) {
            double h = to_double(g);
            long long k0 = ceil_multiple(b, h);
            long long k1 = ceil_multiple(b + jump_max, h);
            if (k1 - k0 <= 10000) {
                std::vector<double> edges;
                for (long long k = k0; k <= k1 + 1; ++k)
                    edges.push_back((static_cast<double>(k) - 0.5) * h);
                return edges;
            }
        }
    }
    double width = (b - c) / 20.0;
    std::vector<double> edges;
    for (int i = 0; i <= 40; ++i) edges.push_back(b - width / 2.0 + width * i);
    return edges;
}

namespace {

std::size_t bin_index(const std::vector<double>& edges, double x) {
    // edges define bins [e_i, e_{i+1}); returns edges.size()-1 for "outside"
    if (x < edges.front() || x >= edges.back()) return edges.size() - 1;
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    return static_cast<std::size_t>(it - edges.begin()) - 1;
}

double binom_se(double p, std::uint64_t n) {
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

}  // namespace

IdentityReport convolution_check(const LevyTriplet& t, double b, double c, std::uint64_t n,
                                 const SimConfig& cfg, const std::vector<double>& edges) {
    if (!(c > 0.0 && c < b)) throw std::invalid_argument("convolution_check: require 0<c<b");
    if (n < 1) throw std::invalid_argument("convolution_check: need at least one replicate");
    if (edges.size() < 2) throw std::invalid_argument("convolution_check: need at least one bin");

    CompiledModel m = compile_model(t, cfg);
    std::size_t n_bins = edges.size() - 1;
    IdentityReport rep;
    rep.b = b;
    rep.c = c;
    rep.n = n;

    // Left side: the law over b sampled directly.
    std::uint64_t seed_lhs = derive_seed(cfg.seed, 0xB001);
    std::vector<std::uint64_t> lhs_counts(n_bins + 1, 0);
    std::uint64_t lhs_censored = 0;
    // Right side: sample the position at c, restart from zero at b - x_c,
    // one independent continuation per replicate.
    std::uint64_t seed_c = derive_seed(cfg.seed, 0xB002);
    std::uint64_t seed_cont = derive_seed(cfg.seed, 0xB003);
    std::vector<std::uint64_t> rhs_counts(n_bins + 1, 0);
    std::uint64_t rhs_censored_first = 0, rhs_censored_second = 0;

    auto count = static_cast<std::int64_t>(n);
#pragma omp parallel
    {
        std::vector<std::uint64_t> l_loc(n_bins + 1, 0), r_loc(n_bins + 1, 0);
        std::uint64_t lc = 0, rc1 = 0, rc2 = 0;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < count; ++i) {
            auto idx = static_cast<std::uint64_t>(i);
            RngStream rng_l = RngStream::for_replicate(seed_lhs, idx);
            PassageOutcome lhs = run_to_passage(m, b, false, rng_l);
            if (lhs.crossed)
                ++l_loc[bin_index(edges, lhs.position)];
            else
                ++lc;

            RngStream rng_c = RngStream::for_replicate(seed_c, idx);
            PassageOutcome oc = run_to_passage(m, c, false, rng_c);
            if (!oc.crossed) {
                ++rc1;
                continue;
            }
            RngStream rng_r = RngStream::for_replicate(seed_cont, idx);
            PassageOutcome cont = run_to_passage(m, b - oc.position, false, rng_r);
            if (!cont.crossed) {
                ++rc2;
                continue;
            }
            ++r_loc[bin_index(edges, oc.position + cont.position)];
        }
#pragma omp critical
        {
            for (std::size_t k = 0; k <= n_bins; ++k) {
                lhs_counts[k] += l_loc[k];
                rhs_counts[k] += r_loc[k];
            }
            lhs_censored += lc;
            rhs_censored_first += rc1;
            rhs_censored_second += rc2;
        }
    }

    rep.lhs_censored = static_cast<double>(lhs_censored) / static_cast<double>(n);
    rep.rhs_censored_first = static_cast<double>(rhs_censored_first) / static_cast<double>(n);
    rep.rhs_censored_second = static_cast<double>(rhs_censored_second) / static_cast<double>(n);
    rep.lhs_outside = static_cast<double>(lhs_counts[n_bins]) / static_cast<double>(n);
    rep.rhs_outside = static_cast<double>(rhs_counts[n_bins]) / static_cast<double>(n);

    for (std::size_t k = 0; k < n_bins; ++k) {
        IdentityBin bin;
        bin.lo = edges[k];
        bin.hi = edges[k + 1];
        bin.lhs = static_cast<double>(lhs_counts[k]) / static_cast<double>(n);
        bin.rhs = static_cast<double>(rhs_counts[k]) / static_cast<double>(n);
        bin.se_lhs = binom_se(bin.lhs, n);
        bin.se_rhs = binom_se(bin.rhs, n);
        bin.discrepancy = std::abs(bin.lhs - bin.rhs);
        bin.pooled_se = std::sqrt(bin.se_lhs * bin.se_lhs + bin.se_rhs * bin.se_rhs);
        if (bin.discrepancy == 0.0)
            bin.studentized = 0.0;
        else if (bin.pooled_se == 0.0)
            bin.studentized = std::numeric_limits<double>::infinity();
        else
            bin.studentized = bin.discrepancy / bin.pooled_se;
        rep.max_studentized = std::max(rep.max_studentized, bin.studentized);
        rep.bins.push_back(bin);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Multi-level consistency
// ---------------------------------------------------------------------------

ConsistencyReport multi_level_consistency(const LevyTriplet& t, const std::vector<double>& levels,
                                          std::uint64_t n, const SimConfig& cfg, double delta,
                                          std::uint64_t min_crossed) {
    if (levels.size() < 2) throw std::invalid_argument("multi_level_consistency: need at least two levels");

    ConsistencyReport rep;
    bool seen_trivial = false, seen_nontrivial = false;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        SimConfig level_cfg = cfg;
        level_cfg.seed = derive_seed(cfg.seed, 0xC000 + i);
        EmpiricalLaw law = estimate_law(t, levels[i], false, n, level_cfg);
        LevelVerdict lv;
        lv.level = levels[i];
        lv.verdict = triviality_test(law, delta, min_crossed);
        lv.crossed_mass = law.crossed_mass();
        lv.censored_mass = law.censored_mass();
        if (!lv.verdict.vacuous) {
            if (lv.verdict.verdict == TrivialityVerdict::Kind::Trivial) {
                seen_trivial = true;
                ++rep.decided;
            } else if (lv.verdict.verdict == TrivialityVerdict::Kind::NonTrivial) {
                seen_nontrivial = true;
                ++rep.decided;
            }
        }
        rep.levels.push_back(std::move(lv));
    }
    rep.theorem_violation = seen_trivial && seen_nontrivial;
    rep.homogeneous = !rep.theorem_violation;
    return rep;
}

}  // namespace levylab
