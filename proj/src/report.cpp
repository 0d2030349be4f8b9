#include "levylab/report.hpp"

#include "levylab/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace levylab {

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

bool same_files(const ReportBundle& a, const ReportBundle& b) {
    if (a.files.size() != b.files.size()) return false;
    for (std::size_t i = 0; i < a.files.size(); ++i)
        if (a.files[i].name != b.files[i].name || a.files[i].content != b.files[i].content) return false;
    return true;
}

namespace {

// One tabular report: ordered meta fields plus rows. Rendered as CSV with a
// leading "# key=value" line, or as the JSON mirror with the same names.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const {
        std::string out = "#";
        for (std::size_t i = 0; i < meta.size(); ++i)
            out += (i ? "," : " ") + meta[i].first + "=" + meta[i].second;
        out += "\n";
        for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
        out += "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
            out += "\n";
        }
        return out;
    }

    std::string to_json() const {
        nlohmann::ordered_json j;
        for (const auto& [k, v] : meta) j[k] = v;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json r;
            for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) r[columns[i]] = row[i];
            j["rows"].push_back(std::move(r));
        }
        return j.dump(2) + "\n";
    }

    std::string render(OutputFormat f) const { return f == OutputFormat::Csv ? to_csv() : to_json(); }
};

std::string ext(OutputFormat f) { return f == OutputFormat::Csv ? ".csv" : ".json"; }

std::string verdict_point(const TrivialityVerdict& v) {
    if (v.vacuous) return "vacuous";
    if (v.verdict == TrivialityVerdict::Kind::Trivial) return fmt(v.point);
    return "";
}

Table law_table(const EmpiricalLaw& law) {
    Table t;
    t.meta = {{"level", fmt(law.level)},
              {"strict", law.strict ? "1" : "0"},
              {"crossed_mass", fmt(law.crossed_mass())},
              {"censored_mass", fmt(law.censored_mass())},
              {"n_replicates", std::to_string(law.n_replicates)},
              {"seed", std::to_string(law.seed)},
              {"version", kVersion}};
    t.columns = {"position", "weight"};
    for (const auto& [pos, cnt] : law.counts) t.rows.push_back({fmt(pos), fmt(law.weight_of(cnt))});
    return t;
}

Table exact_law_table(const ExactLaw& law, const Rational& level, std::uint64_t seed) {
    Table t;
    t.meta = {{"level", to_string(level)},
              {"lost_mass_bound", fmt(law.lost_mass_bound)},
              {"floor", std::to_string(law.floor_used)},
              {"solve", law.rational_solve ? "rational" : "double"},
              {"residual_inf", fmt(law.residual_inf)},
              {"seed", std::to_string(seed)},
              {"version", kVersion}};
    t.columns = {"position", "mass", "mass_exact"};
    for (const auto& [k, m] : law.masses)
        t.rows.push_back({fmt(law.position(k)), fmt(to_double(m)), to_string(m)});
    return t;
}

}  // namespace

std::vector<double> default_histogram_edges(const EmpiricalLaw& law) {
    std::vector<double> positions;
    for (const auto& [pos, cnt] : law.counts) positions.push_back(pos);
    if (positions.empty()) return {0.0, 1.0};
    if (positions.size() == 1) return {positions[0] - 0.5, positions[0] + 0.5};
    if (positions.size() <= 50) {
        // bins centred on the observed support
        std::vector<double> edges;
        edges.push_back(positions.front() - 0.5 * (positions[1] - positions[0]));
        for (std::size_t i = 0; i + 1 < positions.size(); ++i)
            edges.push_back(0.5 * (positions[i] + positions[i + 1]));
        edges.push_back(positions.back() + 0.5 * (positions[positions.size() - 1] - positions[positions.size() - 2]));
        return edges;
    }
    double lo = positions.front(), hi = positions.back();
    double width = (hi - lo) / 30.0;
    std::vector<double> edges;
    for (int i = 0; i <= 30; ++i) edges.push_back(lo + width * i);
    edges.back() = std::nextafter(hi, std::numeric_limits<double>::infinity());
    return edges;
}

std::string emit_histogram_data(const EmpiricalLaw& law, const std::vector<double>& edges,
                                OutputFormat format) {
    if (edges.size() < 2) throw std::invalid_argument("emit_histogram_data: need at least one bin");
    Table t;
    t.meta = {{"level", fmt(law.level)},
              {"crossed_mass", fmt(law.crossed_mass())},
              {"censored_mass", fmt(law.censored_mass())},
              {"n_replicates", std::to_string(law.n_replicates)},
              {"seed", std::to_string(law.seed)},
              {"version", kVersion}};
    t.columns = {"bin_left", "bin_right", "mass"};
    std::vector<std::uint64_t> counts(edges.size() - 1, 0);
    for (const auto& [pos, cnt] : law.counts) {
        auto it = std::upper_bound(edges.begin(), edges.end(), pos);
        if (it == edges.begin() || it == edges.end()) continue;  // outside the binned range
        counts[static_cast<std::size_t>(it - edges.begin()) - 1] += cnt;
    }
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (counts[i] == 0) continue;
        t.rows.push_back({fmt(edges[i]), fmt(edges[i + 1]), fmt(law.weight_of(counts[i]))});
    }
    return t.render(format);
}

// ---------------------------------------------------------------------------
// Zoo
// ---------------------------------------------------------------------------

namespace {

LevyTriplet make_triplet(double sigma2, std::vector<JumpAtom> atoms, Rational drift, Cutoff cutoff) {
    LevyTriplet t;
    t.sigma2 = sigma2;
    t.jumps.atoms = std::move(atoms);
    t.set_drift(std::move(drift));
    t.cutoff = cutoff;
    return t;
}

}  // namespace

std::vector<ZooEntry> zoo_catalog() {
    std::vector<ZooEntry> zoo;

    ZooEntry sn_cp;
    sn_cp.name = "cp_drift_up_spectrally_negative";
    sn_cp.triplet = make_triplet(0.0, {JumpAtom(Rational(-1), Rational(1))}, Rational(3, 2), Cutoff::Zero);
    sn_cp.horizon = 12.0;
    zoo.push_back(sn_cp);

    ZooEntry bm;
    bm.name = "brownian_motion_down_drift";
    bm.triplet = make_triplet(1.0, {}, Rational(-1, 2), Cutoff::Zero);
    bm.horizon = 10.0;
    zoo.push_back(bm);

    ZooEntry up;
    up.name = "skip_free_up_drift";
    up.triplet = make_triplet(0.0, {JumpAtom(Rational(1), Rational(7, 10)), JumpAtom(Rational(-1), Rational(3, 10))},
                              Rational(0), Cutoff::Zero);
    up.horizon = 12.0;
    zoo.push_back(up);

    ZooEntry down;
    down.name = "skip_free_down_drift";
    down.triplet = make_triplet(0.0, {JumpAtom(Rational(1), Rational(3, 10)), JumpAtom(Rational(-1), Rational(7, 10))},
                                Rational(0), Cutoff::Zero);
    down.horizon = 40.0;
    zoo.push_back(down);

    ZooEntry two;
    two.name = "two_positive_atoms";
    two.triplet = make_triplet(0.0, {JumpAtom(Rational(1), Rational(1, 2)), JumpAtom(Rational(2), Rational(1, 2))},
                               Rational(0), Cutoff::Zero);
    two.horizon = 12.0;
    zoo.push_back(two);

    ZooEntry irr;
    irr.name = "irrational_atom";
    irr.triplet = make_triplet(
        0.0, {JumpAtom(Rational(1), Rational(1, 2)), JumpAtom(rational_from_double(-std::sqrt(2.0)), Rational(1, 2))},
        Rational(0), Cutoff::Zero);
    irr.horizon = 40.0;
    zoo.push_back(irr);

    ZooEntry bmj;
    bmj.name = "brownian_plus_positive_jump";
    bmj.triplet = make_triplet(0.01, {JumpAtom(Rational(1), Rational(1))}, Rational(0), Cutoff::Zero);
    bmj.horizon = 3.0;
    zoo.push_back(bmj);

    return zoo;
}

namespace {

// |empirical - exact| per reachable lattice atom, within four binomial
// standard errors plus the certified truncation and late-crossing slack
bool oracle_band_ok(const EmpiricalLaw& law, const ExactLaw& exact, const LatticeChainSpec& spec,
                    double late_bound, std::uint64_t n) {
    double mesh = to_double(spec.h);
    long long k_lo = exact.masses.empty() ? 0 : exact.masses.begin()->first;
    long long k_hi = exact.masses.empty() ? -1 : exact.masses.rbegin()->first;
    double slack = exact.lost_mass_bound + late_bound;
    for (long long k = k_lo; k <= k_hi; ++k) {
        auto it = exact.masses.find(k);
        double p = it == exact.masses.end() ? 0.0 : to_double(it->second);
        double position = static_cast<double>(k) * mesh;
        auto cit = law.counts.find(position);
        double p_hat = cit == law.counts.end() ? 0.0 : law.weight_of(cit->second);
        double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
        if (std::abs(p_hat - p) > 4.0 * se + slack) return false;
    }
    return true;
}

}  // namespace

ZooResult run_zoo(std::uint64_t seed, std::uint64_t n, std::uint64_t n_diag) {
    ZooResult result;
    result.n = n;
    result.n_diag = n_diag;
    result.seed = seed;

    auto catalog = zoo_catalog();
    for (std::size_t e = 0; e < catalog.size(); ++e) {
        const ZooEntry& entry = catalog[e];
        ZooEntryResult er;
        er.name = entry.name;
        er.cls = classify(entry.triplet);

        SimConfig base;
        base.horizon = entry.horizon;
        base.dt = entry.dt;

        auto spec = make_lattice_spec(entry.triplet);
        er.has_oracle = spec.has_value();

        bool seen_trivial = false, seen_nontrivial = false;
        std::uint64_t decided = 0;
        for (std::size_t j = 0; j < entry.levels.size(); ++j) {
            double level = entry.levels[j];
            SimConfig cfg = base;
            cfg.seed = derive_seed(seed, (e + 1) * 1000 + j);
            EmpiricalLaw law = estimate_law(entry.triplet, level, false, n, cfg);

            ZooLevelResult lr;
            lr.level = level;
            lr.verdict = triviality_test(law, default_delta(entry.triplet, cfg));
            lr.crossed_mass = law.crossed_mass();
            lr.censored_mass = law.censored_mass();
            if (spec) {
                ExactLaw exact = exact_passage_law(*spec, rational_from_double(level));
                double late = late_crossing_bound_auto(*spec, rational_from_double(level), entry.horizon);
                lr.oracle_ok = oracle_band_ok(law, exact, *spec, late, n) ? 1 : 0;
            }
            if (!lr.verdict.vacuous) {
                if (lr.verdict.verdict == TrivialityVerdict::Kind::Trivial) {
                    seen_trivial = true;
                    ++decided;
                } else if (lr.verdict.verdict == TrivialityVerdict::Kind::NonTrivial) {
                    seen_nontrivial = true;
                    ++decided;
                }
            }
            er.levels.push_back(std::move(lr));
        }

        er.homogeneous = !(seen_trivial && seen_nontrivial);
        bool expected_nontrivial = er.cls.variant == ProcessClass::Variant::NonDeterministicOvershoots;
        er.theorem_ok = er.homogeneous && decided > 0 && (expected_nontrivial == seen_nontrivial);

        // supremum-jump diagnostic over fresh skeletons at a short horizon
        SimConfig diag_cfg = base;
        diag_cfg.horizon = result.diag_horizon;
        std::uint64_t positive = 0;
        std::uint64_t diag_seed = derive_seed(seed, 0xD1A0 + e);
        bool event = required_engine(entry.triplet) == Engine::EventDriven;
        for (std::uint64_t r = 0; r < n_diag; ++r) {
            RngStream rng = RngStream::for_replicate(diag_seed, r);
            PathSkeleton p = event ? simulate_event_driven(entry.triplet, diag_cfg, rng)
                                   : simulate_grid(entry.triplet, diag_cfg, rng);
            if (supremum_jump_diagnostic(p) > 0.0) ++positive;
        }
        er.diag_positive_fraction = static_cast<double>(positive) / static_cast<double>(n_diag);

        if (!er.theorem_ok) result.any_violation = true;
        result.entries.push_back(std::move(er));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

namespace {

void add_file(ReportBundle& b, std::string name, std::string content) {
    b.files.push_back({std::move(name), std::move(content)});
}

void run_classify(const ExperimentConfig& cfg, ReportBundle& out) {
    const LevyTriplet& t = *cfg.triplet;
    ProcessClass cls = classify(t, cfg.lattice_tol);

    Table table;
    table.meta = {{"seed", std::to_string(cfg.sim.seed)}, {"version", kVersion}};
    table.columns = {"field", "value"};
    table.rows.push_back({"class", to_string(cls.variant)});
    table.rows.push_back({"h", cls.is_skip_free() ? fmt(cls.h) : "n/a"});
    table.rows.push_back({"h_exact", cls.is_skip_free() ? to_string(cls.h_exact) : "n/a"});
    table.rows.push_back({"rationale", cls.rationale});
    for (const auto& level : cfg.levels) {
        double x = to_double(level);
        auto pred = predicted_passage_position(cls, x);
        table.rows.push_back({"predicted_position[" + fmt(x) + "]", pred ? fmt(*pred) : "nondeterministic"});
    }
    add_file(out, "classify" + ext(cfg.format), table.render(cfg.format));

    out.summary += "class " + to_string(cls.variant) + " (" + cls.rationale + ")";
    if (cls.is_skip_free()) out.summary += " h=" + to_string(cls.h_exact);
    out.summary += "\n";
}

void run_qx(const ExperimentConfig& cfg, ReportBundle& out) {
    const LevyTriplet& t = *cfg.triplet;
    double delta = cfg.delta.value_or(default_delta(t, cfg.sim));
    auto spec = make_lattice_spec(t);

    Table verdicts;
    verdicts.meta = {{"n", std::to_string(cfg.n)},
                     {"seed", std::to_string(cfg.sim.seed)},
                     {"delta", fmt(delta)},
                     {"strict", cfg.strict ? "1" : "0"},
                     {"version", kVersion}};
    verdicts.columns = {"level", "verdict", "point", "crossed_mass", "censored_mass",
                        "support_diameter", "within_delta_fraction"};

    for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
        double level = to_double(cfg.levels[i]);
        SimConfig sim = cfg.sim;
        sim.seed = derive_seed(cfg.sim.seed, 0xA000 + i);
        EmpiricalLaw law = estimate_law(t, level, cfg.strict, cfg.n, sim);
        law.seed = cfg.sim.seed;  // reports name the config-level seed
        TrivialityVerdict v = triviality_test(law, delta, cfg.min_crossed);

        std::string tag = std::to_string(i);
        add_file(out, "qx_law_" + tag + ext(cfg.format), law_table(law).render(cfg.format));
        add_file(out, "qx_hist_" + tag + ext(cfg.format),
                 emit_histogram_data(law, default_histogram_edges(law), cfg.format));
        if (spec && cfg.levels[i] > 0) {
            ExactLaw exact = exact_passage_law(*spec, cfg.levels[i]);
            add_file(out, "qx_exact_" + tag + ext(cfg.format),
                     exact_law_table(exact, cfg.levels[i], cfg.sim.seed).render(cfg.format));
        }
        verdicts.rows.push_back({fmt(level), to_string(v.verdict), verdict_point(v), fmt(law.crossed_mass()),
                                 fmt(law.censored_mass()), fmt(v.support_diameter),
                                 fmt(v.within_delta_fraction)});
        out.summary += "x=" + fmt(level) + ": " + summary(v) + " crossed=" + fmt(law.crossed_mass()) + "\n";
    }
    add_file(out, "qx_verdicts" + ext(cfg.format), verdicts.render(cfg.format));

    if (cfg.dump_skeletons > 0) {
        bool event = required_engine(t) == Engine::EventDriven;
        std::uint64_t sseed = derive_seed(cfg.sim.seed, 0x5CE7);
        for (std::uint64_t r = 0; r < cfg.dump_skeletons; ++r) {
            RngStream rng = RngStream::for_replicate(sseed, r);
            PathSkeleton p = event ? simulate_event_driven(t, cfg.sim, rng) : simulate_grid(t, cfg.sim, rng);
            Table sk;
            sk.meta = {{"replicate", std::to_string(r)}, {"seed", std::to_string(cfg.sim.seed)}, {"version", kVersion}};
            sk.columns = {"time", "value", "kind"};
            for (const auto& rec : p.records) {
                const char* kind = rec.kind == RecordKind::Start ? "start"
                                   : rec.kind == RecordKind::Jump ? "jump"
                                                                  : "grid";
                sk.rows.push_back({fmt(rec.time), fmt(rec.value), kind});
            }
            add_file(out, "qx_skeleton_" + std::to_string(r) + ".csv", sk.to_csv());
        }
    }
}

void run_identity(const ExperimentConfig& cfg, ReportBundle& out) {
    const LevyTriplet& t = *cfg.triplet;
    double b = to_double(cfg.b), c = to_double(cfg.c);
    auto edges = default_identity_edges(t, b, c);
    IdentityReport rep = convolution_check(t, b, c, cfg.n, cfg.sim, edges);

    std::string exact_gap = "n/a";
    if (auto spec = make_lattice_spec(t)) exact_gap = fmt(convolution_identity_exact_gap(*spec, cfg.b, cfg.c));

    Table table;
    table.meta = {{"b", fmt(b)},
                  {"c", fmt(c)},
                  {"n", std::to_string(cfg.n)},
                  {"seed", std::to_string(cfg.sim.seed)},
                  {"max_studentized", fmt(rep.max_studentized)},
                  {"lhs_censored", fmt(rep.lhs_censored)},
                  {"rhs_censored_first", fmt(rep.rhs_censored_first)},
                  {"rhs_censored_second", fmt(rep.rhs_censored_second)},
                  {"lhs_outside", fmt(rep.lhs_outside)},
                  {"rhs_outside", fmt(rep.rhs_outside)},
                  {"exact_gap", exact_gap},
                  {"version", kVersion}};
    table.columns = {"bin_left", "bin_right", "lhs", "rhs", "abs_discrepancy", "pooled_se", "studentized"};
    for (const auto& bin : rep.bins)
        table.rows.push_back({fmt(bin.lo), fmt(bin.hi), fmt(bin.lhs), fmt(bin.rhs), fmt(bin.discrepancy),
                              fmt(bin.pooled_se), fmt(bin.studentized)});
    add_file(out, "identity" + ext(cfg.format), table.render(cfg.format));

    out.summary += "identity b=" + fmt(b) + " c=" + fmt(c) + " max_studentized=" + fmt(rep.max_studentized) +
                   " exact_gap=" + exact_gap + "\n";
}

void run_consistency(const ExperimentConfig& cfg, ReportBundle& out) {
    const LevyTriplet& t = *cfg.triplet;
    double delta = cfg.delta.value_or(default_delta(t, cfg.sim));
    ConsistencyReport rep =
        multi_level_consistency(t, cfg.levels_d(), cfg.n, cfg.sim, delta, cfg.min_crossed);

    Table table;
    table.meta = {{"n", std::to_string(cfg.n)},
                  {"seed", std::to_string(cfg.sim.seed)},
                  {"delta", fmt(delta)},
                  {"homogeneous", rep.homogeneous ? "1" : "0"},
                  {"theorem_violation", rep.theorem_violation ? "1" : "0"},
                  {"decided", std::to_string(rep.decided)},
                  {"version", kVersion}};
    table.columns = {"level", "verdict", "point", "crossed_mass", "censored_mass", "support_diameter",
                     "within_delta_fraction"};
    for (const auto& lv : rep.levels)
        table.rows.push_back({fmt(lv.level), to_string(lv.verdict.verdict), verdict_point(lv.verdict),
                              fmt(lv.crossed_mass), fmt(lv.censored_mass), fmt(lv.verdict.support_diameter),
                              fmt(lv.verdict.within_delta_fraction)});
    add_file(out, "consistency" + ext(cfg.format), table.render(cfg.format));

    out.summary += std::string("consistency: ") + (rep.theorem_violation ? "VIOLATION" : "homogeneous") + "\n";
    if (rep.theorem_violation) out.exit_code = 2;
}

void run_zoo_experiment(const ExperimentConfig& cfg, ReportBundle& out) {
    ZooResult zoo = run_zoo(cfg.sim.seed, cfg.n);

    Table table;
    table.meta = {{"n", std::to_string(zoo.n)},
                  {"n_diag", std::to_string(zoo.n_diag)},
                  {"seed", std::to_string(zoo.seed)},
                  {"diag_horizon", fmt(zoo.diag_horizon)},
                  {"any_violation", zoo.any_violation ? "1" : "0"},
                  {"version", kVersion}};
    table.columns = {"name",       "class",      "h",      "rationale", "verdicts",
                     "homogeneous", "theorem_ok", "oracle", "diag_positive_fraction"};

    Table levels;
    levels.meta = table.meta;
    levels.columns = {"name",          "level",          "verdict",
                      "point",         "crossed_mass",   "censored_mass",
                      "support_diameter", "within_delta_fraction", "oracle_ok"};

    for (const auto& er : zoo.entries) {
        std::string verdicts;
        std::string oracle = er.has_oracle ? "ok" : "n/a";
        for (const auto& lr : er.levels) {
            if (!verdicts.empty()) verdicts += "|";
            verdicts += summary(lr.verdict);
            if (lr.oracle_ok == 0) oracle = "FAIL";
            levels.rows.push_back({er.name, fmt(lr.level), to_string(lr.verdict.verdict), verdict_point(lr.verdict),
                                   fmt(lr.crossed_mass), fmt(lr.censored_mass), fmt(lr.verdict.support_diameter),
                                   fmt(lr.verdict.within_delta_fraction),
                                   lr.oracle_ok < 0 ? "n/a" : (lr.oracle_ok ? "1" : "0")});
        }
        table.rows.push_back({er.name, to_string(er.cls.variant), er.cls.is_skip_free() ? fmt(er.cls.h) : "n/a",
                              er.cls.rationale, verdicts, er.homogeneous ? "1" : "0", er.theorem_ok ? "1" : "0",
                              oracle, fmt(er.diag_positive_fraction)});
        out.summary += er.name + ": " + to_string(er.cls.variant) + " [" + verdicts + "] theorem_ok=" +
                       (er.theorem_ok ? "yes" : "NO") + "\n";
    }
    add_file(out, "zoo_table" + ext(cfg.format), table.render(cfg.format));
    add_file(out, "zoo_levels" + ext(cfg.format), levels.render(cfg.format));

    out.summary += std::string("theorem cross-validation: ") + (zoo.any_violation ? "VIOLATION" : "OK") + "\n";
    if (zoo.any_violation) out.exit_code = 2;
}

}  // namespace

ReportBundle run_experiment(const ExperimentConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    ReportBundle out;
    switch (cfg.experiment) {
        case ExperimentKind::Classify: run_classify(cfg, out); break;
        case ExperimentKind::Qx: run_qx(cfg, out); break;
        case ExperimentKind::Identity: run_identity(cfg, out); break;
        case ExperimentKind::Consistency: run_consistency(cfg, out); break;
        case ExperimentKind::Zoo: run_zoo_experiment(cfg, out); break;
    }
    add_file(out, "summary.txt", out.summary);
    out.wall_seconds =
        std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() - start).count();
    return out;
}

void write_bundle(const ReportBundle& b, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const auto& f : b.files) {
        std::ofstream out(std::filesystem::path(out_dir) / f.name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + f.name + " under " + out_dir);
        out << f.content;
    }
}

}  // namespace levylab
