#include "levylab/pathsim.hpp"

#include "levylab/firstpassage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace levylab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kEventBudget = 100'000'000;

void check_config(const SimConfig& cfg) {
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("sim config: horizon must be positive");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("sim config: dt must be positive");
    if (cfg.small_jump_eps && !(*cfg.small_jump_eps > 0.0))
        throw std::invalid_argument("sim config: small_jump_eps must be positive");
}

PassageOutcome censored_outcome(double level, bool strict, double horizon) {
    PassageOutcome o;
    o.level = level;
    o.strict = strict;
    o.crossed = false;
    o.horizon = horizon;
    return o;
}

PassageOutcome crossed_outcome(double level, bool strict, double time, double position, CrossKind kind) {
    PassageOutcome o;
    o.level = level;
    o.strict = strict;
    o.crossed = true;
    o.time = time;
    o.position = position;
    o.overshoot = position - level;
    o.kind = kind;
    return o;
}

}  // namespace

std::size_t PathSkeleton::jump_count() const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const PathRecord& r) { return r.kind == RecordKind::Jump; }));
}

Engine required_engine(const LevyTriplet& t) {
    return (t.sigma2 == 0.0 && !t.jumps.tail) ? Engine::EventDriven : Engine::Grid;
}

JumpDecomposition decompose_jumps(const LevyTriplet& t, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("decompose_jumps: threshold must be positive");
    auto rep = validate_triplet(t);
    if (!rep.ok()) throw std::invalid_argument("decompose_jumps: invalid triplet: " + rep.joined());

    JumpDecomposition d;
    d.small_part.sigma2 = t.sigma2;
    d.small_part.cutoff = t.cutoff;
    d.small_part.set_drift(t.drift);

    for (const auto& atom : t.jumps.atoms) {
        if (atom.size_d > a)
            d.big_part.atoms.push_back(atom);
        else
            d.small_part.jumps.atoms.push_back(atom);
    }
    if (t.jumps.tail) {
        TailFamily small = *t.jumps.tail;
        if (small.pos.active() && small.pos.hi > a) {
            if (small.pos.mass_above(a) > 0.0) {
                TailFamily big = *t.jumps.tail;
                big.neg = PowerTailSide{big.alpha, 0.0, 0.0, kInf};
                big.pos.lo = std::max(big.pos.lo, a);
                d.big_part.tail = big;
            }
            small.pos.hi = std::min(small.pos.hi, a);
        }
        d.small_part.jumps.tail = small;
    }

    double beta = 0.0;
    for (const auto& atom : d.big_part.atoms) beta += atom.rate_d;
    if (d.big_part.tail) beta += d.big_part.tail->pos.mass();
    d.beta = beta;
    return d;
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

CompiledModel compile_model(const LevyTriplet& t, const SimConfig& cfg) {
    check_config(cfg);
    auto rep = validate_triplet(t);
    if (!rep.ok()) throw std::invalid_argument("simulate: invalid triplet: " + rep.joined());

    CompiledModel m;
    m.engine = required_engine(t);
    m.horizon = cfg.horizon;
    m.dt = cfg.dt;
    m.bridge_correction = cfg.bridge_correction;

    // atoms in canonical (ascending size) order so stream consumption does
    // not depend on input ordering
    std::vector<const JumpAtom*> atoms;
    for (const auto& a : t.jumps.atoms) atoms.push_back(&a);
    std::sort(atoms.begin(), atoms.end(),
              [](const JumpAtom* x, const JumpAtom* y) { return x->size_d < y->size_d; });

    double atom_rate = 0.0;
    for (const JumpAtom* a : atoms) {
        atom_rate += a->rate_d;
        m.atom_sizes.push_back(a->size_d);
        m.atom_cdf.push_back(atom_rate);
    }
    m.total_rate = atom_rate;

    if (m.engine == Engine::EventDriven) {
        m.drift = to_double(*drift_under_zero_cutoff(t));
        // drift-free rational chains run on integer lattice coordinates
        if (*drift_under_zero_cutoff(t) == 0 && !atoms.empty()) {
            Rational g = 0;
            for (const JumpAtom* a : atoms) g = rational_gcd(g, a->size);
            bool ok = g > 0;
            std::vector<long long> mult;
            for (const JumpAtom* a : atoms) {
                if (!ok) break;
                Rational q = a->size / g;
                BigInt num = numerator(q);
                if (denominator(q) != 1 || boost::multiprecision::abs(num) > 1'000'000) {
                    ok = false;
                    break;
                }
                mult.push_back(num.convert_to<long long>());
            }
            if (ok) {
                m.lattice = true;
                m.mesh = to_double(g);
                m.atom_multiples = std::move(mult);
            }
        }
        return m;
    }

    // grid engine
    if (t.jumps.tail) {
        if (!cfg.small_jump_eps)
            throw std::invalid_argument("grid engine: small_jump_eps required with a tail family");
        m.tail = t.jumps.tail;
        m.tail_cut = *cfg.small_jump_eps;
        m.tail_rate_pos = m.tail->pos.mass_above(m.tail_cut);
        m.tail_rate_neg = m.tail->neg.mass_above(m.tail_cut);
        m.total_rate += m.tail_rate_pos + m.tail_rate_neg;
    }
    double variance = t.sigma2;
    if (m.tail && cfg.gaussian_substitution) variance += m.tail->variance_below(m.tail_cut);
    m.sigma_total = std::sqrt(variance);

    // effective linear drift: stored drift minus the UnitBall compensation of
    // every jump that is simulated explicitly; the dropped (or substituted)
    // sub-eps tail is a centred martingale under that convention
    double d = t.drift_d;
    if (t.cutoff == Cutoff::UnitBall) {
        for (const JumpAtom* a : atoms)
            if (std::abs(a->size_d) < 1.0) d -= a->size_d * a->rate_d;
        if (m.tail) d -= m.tail->signed_mean_between(m.tail_cut, 1.0);
    }
    m.drift = d;
    return m;
}

namespace {

// index into atom_sizes, or -1 / -2 for a positive / negative tail draw
int sample_jump_category(const CompiledModel& m, RngStream& rng) {
    if (m.atom_sizes.size() == 1 && m.tail_rate_pos == 0.0 && m.tail_rate_neg == 0.0) return 0;
    double u = rng.next_uniform() * m.total_rate;
    for (std::size_t i = 0; i < m.atom_cdf.size(); ++i)
        if (u < m.atom_cdf[i]) return static_cast<int>(i);
    double atom_rate = m.atom_cdf.empty() ? 0.0 : m.atom_cdf.back();
    if (u < atom_rate + m.tail_rate_pos) return -1;
    return -2;
}

double sample_jump_value(const CompiledModel& m, int category, RngStream& rng) {
    if (category >= 0) return m.atom_sizes[static_cast<std::size_t>(category)];
    if (category == -1) return m.tail->pos.sample_above(m.tail_cut, rng.next_uniform());
    return -m.tail->neg.sample_above(m.tail_cut, rng.next_uniform());
}

}  // namespace

// ---------------------------------------------------------------------------
// Skeleton simulation
// ---------------------------------------------------------------------------

PathSkeleton simulate_event_driven(const LevyTriplet& t, const SimConfig& cfg, RngStream& rng) {
    if (required_engine(t) != Engine::EventDriven)
        throw std::invalid_argument("event-driven engine requires sigma2 == 0 and no tail family");
    if (t.jumps.atoms.empty())
        throw std::invalid_argument("event-driven engine: zero jump mass is not compound Poisson");
    CompiledModel m = compile_model(t, cfg);

    PathSkeleton p;
    p.engine = Engine::EventDriven;
    p.drift = m.drift;
    p.records.push_back({0.0, 0.0, RecordKind::Start});

    double time = 0.0;
    double value = 0.0;
    long long k = 0;  // lattice coordinate when m.lattice
    while (true) {
        double tj = time + rng.next_exponential(m.total_rate);
        if (tj > m.horizon) break;
        int cat = sample_jump_category(m, rng);
        if (m.lattice) {
            k += m.atom_multiples[static_cast<std::size_t>(cat)];
            value = static_cast<double>(k) * m.mesh;
        } else {
            value += m.drift * (tj - time) + m.atom_sizes[static_cast<std::size_t>(cat)];
        }
        p.records.push_back({tj, value, RecordKind::Jump});
        time = tj;
        if (p.records.size() > kEventBudget) throw std::runtime_error("simulate_event_driven: event budget exceeded");
    }
    if (p.records.back().time < m.horizon)
        p.records.push_back({m.horizon, value + m.drift * (m.horizon - time), RecordKind::Grid});
    return p;
}

PathSkeleton simulate_grid(const LevyTriplet& t, const SimConfig& cfg, RngStream& rng) {
    if (required_engine(t) != Engine::Grid)
        throw std::invalid_argument("grid engine requires sigma2 > 0 or a tail family");
    CompiledModel m = compile_model(t, cfg);

    PathSkeleton p;
    p.engine = Engine::Grid;
    p.drift = m.drift;
    p.records.push_back({0.0, 0.0, RecordKind::Start});

    double time = 0.0;
    double value = 0.0;
    long long grid_i = 0;
    double next_jump = m.total_rate > 0.0 ? rng.next_exponential(m.total_rate) : kInf;
    while (time < m.horizon) {
        double next_grid = static_cast<double>(grid_i + 1) * m.dt;
        double t_next = std::min({next_grid, next_jump, m.horizon});
        double step = t_next - time;
        if (step > 0.0 && m.sigma_total > 0.0)
            value += m.drift * step + m.sigma_total * std::sqrt(step) * rng.next_normal();
        else
            value += m.drift * step;

        bool is_jump = next_jump <= t_next;
        if (is_jump) {
            int cat = sample_jump_category(m, rng);
            value += sample_jump_value(m, cat, rng);
            if (t_next > p.records.back().time) p.records.push_back({t_next, value, RecordKind::Jump});
            next_jump = t_next + rng.next_exponential(m.total_rate);
        } else if (t_next > p.records.back().time) {
            p.records.push_back({t_next, value, RecordKind::Grid});
        }
        if (t_next == next_grid) ++grid_i;
        time = t_next;
        if (p.records.size() > kEventBudget) throw std::runtime_error("simulate_grid: event budget exceeded");
    }
    return p;
}

// ---------------------------------------------------------------------------
// First passage
// ---------------------------------------------------------------------------

namespace {

PassageOutcome passage_event_driven(const CompiledModel& m, double level, bool strict, RngStream& rng) {
    if (m.lattice) {
        long long k = 0;
        long long target = strict ? ceil_multiple_strict(level, m.mesh) : ceil_multiple(level, m.mesh);
        double time = 0.0;
        std::size_t events = 0;
        while (true) {
            time += rng.next_exponential(m.total_rate);
            if (time > m.horizon) return censored_outcome(level, strict, m.horizon);
            int cat = sample_jump_category(m, rng);
            k += m.atom_multiples[static_cast<std::size_t>(cat)];
            if (k >= target)
                return crossed_outcome(level, strict, time, static_cast<double>(k) * m.mesh, CrossKind::Jump);
            if (++events > kEventBudget) throw std::runtime_error("run_to_passage: event budget exceeded");
        }
    }

    double time = 0.0;
    double value = 0.0;
    std::size_t events = 0;
    while (true) {
        double t_jump = m.total_rate > 0.0 ? time + rng.next_exponential(m.total_rate) : kInf;
        // linear segment up to the next jump (or the horizon)
        if (m.drift > 0.0) {
            double tc;
            if (strict && value >= level) {
                tc = time;  // already at the level; the slope pushes strictly above
            } else {
                tc = time + (level - value) / m.drift;
            }
            if (tc < t_jump && tc <= m.horizon)
                return crossed_outcome(level, strict, tc, level, CrossKind::Drift);
        }
        if (t_jump > m.horizon) return censored_outcome(level, strict, m.horizon);
        value += m.drift * (t_jump - time);
        int cat = sample_jump_category(m, rng);
        value += m.atom_sizes[static_cast<std::size_t>(cat)];
        time = t_jump;
        if ((!strict && value >= level) || (strict && value > level))
            return crossed_outcome(level, strict, time, value, CrossKind::Jump);
        if (++events > kEventBudget) throw std::runtime_error("run_to_passage: event budget exceeded");
    }
}

PassageOutcome passage_grid(const CompiledModel& m, double level, bool strict, RngStream& rng) {
    double time = 0.0;
    double value = 0.0;
    long long grid_i = 0;
    std::size_t steps = 0;
    double next_jump = m.total_rate > 0.0 ? rng.next_exponential(m.total_rate) : kInf;
    while (time < m.horizon) {
        double next_grid = static_cast<double>(grid_i + 1) * m.dt;
        double t_next = std::min({next_grid, next_jump, m.horizon});
        double step = t_next - time;
        double v_new = value + m.drift * step;
        if (step > 0.0 && m.sigma_total > 0.0) v_new += m.sigma_total * std::sqrt(step) * rng.next_normal();

        if (!strict && v_new >= level)
            return crossed_outcome(level, strict, t_next, v_new, CrossKind::GridEndpoint);
        if (strict && v_new > level)
            return crossed_outcome(level, strict, t_next, v_new, CrossKind::GridEndpoint);
        // Brownian-bridge correction between segment endpoints. A bridge
        // crossing is continuous, so the recorded position is the level
        // itself. Strict passage keeps plain record semantics.
        if (!strict && m.bridge_correction && m.sigma_total > 0.0 && step > 0.0) {
            BridgeQuery q{m.sigma_total, step, level - value, level - v_new};
            if (rng.next_uniform() < bridge_crossing_prob(q))
                return crossed_outcome(level, strict, t_next, level, CrossKind::Bridge);
        }

        if (next_jump <= t_next) {
            int cat = sample_jump_category(m, rng);
            v_new += sample_jump_value(m, cat, rng);
            if ((!strict && v_new >= level) || (strict && v_new > level))
                return crossed_outcome(level, strict, t_next, v_new, CrossKind::Jump);
            next_jump = t_next + rng.next_exponential(m.total_rate);
        }
        if (t_next == next_grid) ++grid_i;
        time = t_next;
        value = v_new;
        if (++steps > kEventBudget) throw std::runtime_error("run_to_passage: step budget exceeded");
    }
    return censored_outcome(level, strict, m.horizon);
}

}  // namespace

PassageOutcome run_to_passage(const CompiledModel& m, double level, bool strict, RngStream& rng) {
    if ((!strict && level <= 0.0) || (strict && level < 0.0))
        return crossed_outcome(level, strict, 0.0, 0.0, CrossKind::Immediate);
    if (m.engine == Engine::EventDriven) return passage_event_driven(m, level, strict, rng);
    return passage_grid(m, level, strict, rng);
}

PassageOutcome run_to_passage(const LevyTriplet& t, double level, bool strict, const SimConfig& cfg,
                              RngStream& rng) {
    CompiledModel m = compile_model(t, cfg);
    return run_to_passage(m, level, strict, rng);
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

double supremum_jump_diagnostic(const PathSkeleton& p) {
    if (p.records.empty()) return 0.0;
    double running_max = p.records.front().value;
    double diag = 0.0;
    for (std::size_t i = 1; i < p.records.size(); ++i) {
        const PathRecord& prev = p.records[i - 1];
        const PathRecord& r = p.records[i];
        // value just before this record: linear drift for event-driven
        // skeletons, previous record value otherwise
        double v_pre = prev.value;
        if (p.engine == Engine::EventDriven) v_pre += p.drift * (r.time - prev.time);
        double max_pre = std::max(running_max, std::max(prev.value, v_pre));
        if (r.kind == RecordKind::Jump && r.value > max_pre) diag = std::max(diag, r.value - max_pre);
        running_max = std::max(max_pre, r.value);
    }
    return diag;
}

bool skeleton_well_formed(const PathSkeleton& p) {
    if (p.records.empty()) return false;
    const PathRecord& first = p.records.front();
    if (first.time != 0.0 || first.value != 0.0 || first.kind != RecordKind::Start) return false;
    for (std::size_t i = 1; i < p.records.size(); ++i) {
        if (!(p.records[i].time > p.records[i - 1].time)) return false;
        if (p.records[i].kind == RecordKind::Start) return false;
    }
    return true;
}

}  // namespace levylab
