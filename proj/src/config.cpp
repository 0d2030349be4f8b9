#include "levylab/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace levylab {

using nlohmann::json;

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Classify: return "classify";
        case ExperimentKind::Qx: return "qx";
        case ExperimentKind::Identity: return "identity";
        case ExperimentKind::Consistency: return "consistency";
        case ExperimentKind::Zoo: return "zoo";
    }
    return "?";
}

std::optional<ExperimentKind> experiment_from_string(const std::string& s) {
    if (s == "classify") return ExperimentKind::Classify;
    if (s == "qx") return ExperimentKind::Qx;
    if (s == "identity") return ExperimentKind::Identity;
    if (s == "consistency") return ExperimentKind::Consistency;
    if (s == "zoo") return ExperimentKind::Zoo;
    return std::nullopt;
}

std::string ConfigError::join(const std::vector<std::string>& p) {
    std::string out = "config invalid:";
    for (const auto& s : p) out += "\n  - " + s;
    return out;
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

namespace {

class Parser {
public:
    explicit Parser(std::string origin) : origin_(std::move(origin)) {}

    std::vector<std::string> problems;

    void fail(const std::string& where, const std::string& what) {
        problems.push_back(origin_ + ": " + where + ": " + what);
    }

    // number-or-string -> exact rational
    std::optional<Rational> rational_field(const json& j, const std::string& where) {
        if (j.is_string()) {
            auto r = parse_rational(j.get<std::string>());
            if (!r) fail(where, "cannot parse \"" + j.get<std::string>() + "\" as a rational or decimal");
            return r;
        }
        if (j.is_number_integer()) return Rational(j.get<long long>());
        if (j.is_number()) return rational_from_double(j.get<double>());
        fail(where, "expected a number or a numeric string");
        return std::nullopt;
    }

    std::optional<double> double_field(const json& j, const std::string& where) {
        auto r = rational_field(j, where);
        if (!r) return std::nullopt;
        return to_double(*r);
    }

    std::optional<LevyTriplet> triplet(const json& j) {
        if (!j.is_object()) {
            fail("triplet", "expected an object");
            return std::nullopt;
        }
        LevyTriplet t;
        if (j.contains("sigma2")) {
            if (auto v = double_field(j.at("sigma2"), "triplet.sigma2")) t.sigma2 = *v;
        }
        if (j.contains("drift")) {
            if (auto v = rational_field(j.at("drift"), "triplet.drift")) t.set_drift(*v);
        }
        if (j.contains("cutoff")) {
            std::string c = j.at("cutoff").is_string() ? j.at("cutoff").get<std::string>() : "";
            if (c == "zero") t.cutoff = Cutoff::Zero;
            else if (c == "unit_ball") t.cutoff = Cutoff::UnitBall;
            else fail("triplet.cutoff", "expected \"zero\" or \"unit_ball\"");
        }
        if (j.contains("atoms")) {
            const json& atoms = j.at("atoms");
            if (!atoms.is_array()) {
                fail("triplet.atoms", "expected an array of [size, rate] pairs");
            } else {
                for (std::size_t i = 0; i < atoms.size(); ++i) {
                    const json& a = atoms[i];
                    std::string where = "triplet.atoms[" + std::to_string(i) + "]";
                    if (!a.is_array() || a.size() != 2) {
                        fail(where, "expected a [size, rate] pair");
                        continue;
                    }
                    auto size = rational_field(a[0], where + ".size");
                    auto rate = rational_field(a[1], where + ".rate");
                    if (size && rate) t.jumps.atoms.emplace_back(*size, *rate);
                }
            }
        }
        if (j.contains("tail")) {
            const json& tj = j.at("tail");
            if (!tj.is_object() || !tj.contains("alpha")) {
                fail("triplet.tail", "expected an object with at least \"alpha\"");
            } else {
                std::string family = tj.value("family", "stable");
                if (family != "stable") fail("triplet.tail.family", "unknown family \"" + family + "\"");
                double alpha = tj.at("alpha").is_number() ? tj.at("alpha").get<double>() : -1.0;
                double cp = tj.value("c_pos", 0.0);
                double cn = tj.value("c_neg", 0.0);
                t.jumps.tail = make_stable_tail(alpha, cp, cn);
            }
        }
        // unknown keys are schema errors, not silently ignored
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            if (k != "sigma2" && k != "drift" && k != "cutoff" && k != "atoms" && k != "tail")
                fail("triplet." + k, "unknown field");
        }
        return t;
    }

private:
    std::string origin_;
};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({origin + ": " + e.what()});
    }
    if (!j.is_object()) throw ConfigError({origin + ": top level must be an object"});

    Parser p(origin);
    ExperimentConfig cfg;

    if (j.contains("experiment")) {
        std::string s = j.at("experiment").is_string() ? j.at("experiment").get<std::string>() : "";
        auto kind = experiment_from_string(s);
        if (!kind) p.fail("experiment", "expected classify|qx|identity|consistency|zoo");
        else cfg.experiment = *kind;
    } else {
        p.fail("experiment", "missing");
    }

    if (j.contains("triplet")) cfg.triplet = p.triplet(j.at("triplet"));
    if (j.contains("levels")) {
        const json& ls = j.at("levels");
        if (!ls.is_array()) p.fail("levels", "expected an array");
        else
            for (std::size_t i = 0; i < ls.size(); ++i)
                if (auto r = p.rational_field(ls[i], "levels[" + std::to_string(i) + "]"))
                    cfg.levels.push_back(*r);
    }
    if (j.contains("strict")) cfg.strict = j.at("strict").is_boolean() && j.at("strict").get<bool>();
    if (j.contains("n")) {
        if (j.at("n").is_number_unsigned() || (j.at("n").is_number_integer() && j.at("n").get<long long>() > 0))
            cfg.n = j.at("n").get<std::uint64_t>();
        else
            p.fail("n", "expected a positive integer");
    }
    if (j.contains("b"))
        if (auto r = p.rational_field(j.at("b"), "b")) cfg.b = *r;
    if (j.contains("c"))
        if (auto r = p.rational_field(j.at("c"), "c")) cfg.c = *r;
    if (j.contains("delta"))
        if (auto v = p.double_field(j.at("delta"), "delta")) cfg.delta = *v;
    if (j.contains("min_crossed")) {
        if (j.at("min_crossed").is_number_unsigned()) cfg.min_crossed = j.at("min_crossed").get<std::uint64_t>();
        else p.fail("min_crossed", "expected a nonnegative integer");
    }
    if (j.contains("lattice_tol"))
        if (auto v = p.double_field(j.at("lattice_tol"), "lattice_tol")) cfg.lattice_tol = *v;
    if (j.contains("dump_skeletons")) {
        if (j.at("dump_skeletons").is_number_unsigned())
            cfg.dump_skeletons = j.at("dump_skeletons").get<std::uint64_t>();
        else
            p.fail("dump_skeletons", "expected a nonnegative integer");
    }

    if (j.contains("sim")) {
        const json& s = j.at("sim");
        if (!s.is_object()) {
            p.fail("sim", "expected an object");
        } else {
            if (s.contains("seed")) {
                if (s.at("seed").is_number_unsigned()) cfg.sim.seed = s.at("seed").get<std::uint64_t>();
                else p.fail("sim.seed", "expected a nonnegative integer");
            }
            if (s.contains("horizon"))
                if (auto v = p.double_field(s.at("horizon"), "sim.horizon")) cfg.sim.horizon = *v;
            if (s.contains("dt"))
                if (auto v = p.double_field(s.at("dt"), "sim.dt")) cfg.sim.dt = *v;
            if (s.contains("bridge_correction")) {
                if (s.at("bridge_correction").is_boolean())
                    cfg.sim.bridge_correction = s.at("bridge_correction").get<bool>();
                else
                    p.fail("sim.bridge_correction", "expected a boolean");
            }
            if (s.contains("small_jump_eps"))
                if (auto v = p.double_field(s.at("small_jump_eps"), "sim.small_jump_eps"))
                    cfg.sim.small_jump_eps = *v;
            if (s.contains("gaussian_substitution")) {
                if (s.at("gaussian_substitution").is_boolean())
                    cfg.sim.gaussian_substitution = s.at("gaussian_substitution").get<bool>();
                else
                    p.fail("sim.gaussian_substitution", "expected a boolean");
            }
        }
    }
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    if (j.contains("format")) {
        std::string f = j.at("format").is_string() ? j.at("format").get<std::string>() : "";
        if (f == "csv") cfg.format = OutputFormat::Csv;
        else if (f == "json") cfg.format = OutputFormat::Json;
        else p.fail("format", "expected \"csv\" or \"json\"");
    }

    // cross-field validation
    bool needs_triplet = cfg.experiment != ExperimentKind::Zoo;
    if (needs_triplet && !cfg.triplet) p.fail("triplet", "required for this experiment");
    if (cfg.triplet) {
        auto rep = validate_triplet(*cfg.triplet);
        for (const auto& v : rep.violations) p.fail("triplet", v);
    }
    if (cfg.experiment == ExperimentKind::Qx && cfg.levels.empty())
        p.fail("levels", "qx requires at least one level");
    if (cfg.experiment == ExperimentKind::Consistency && cfg.levels.size() < 2)
        p.fail("levels", "consistency requires at least two levels");
    if (cfg.experiment == ExperimentKind::Identity && !(cfg.c > 0 && cfg.c < cfg.b))
        p.fail("b/c", "require 0<c<b");
    if (cfg.n < 1) p.fail("n", "need at least one replicate");
    if (!(cfg.sim.horizon > 0.0)) p.fail("sim.horizon", "must be positive");
    if (!(cfg.sim.dt > 0.0)) p.fail("sim.dt", "must be positive");
    if (cfg.delta && *cfg.delta < 0.0) p.fail("delta", "must be nonnegative");
    if (cfg.lattice_tol < 0.0) p.fail("lattice_tol", "must be nonnegative");
    bool has_tail = cfg.triplet && cfg.triplet->jumps.tail.has_value();
    if (has_tail && !cfg.sim.small_jump_eps) p.fail("sim.small_jump_eps", "required with a tail family");
    if (!has_tail && cfg.sim.small_jump_eps && cfg.triplet)
        p.fail("sim.small_jump_eps", "only meaningful with a tail family");

    if (!p.problems.empty()) throw ConfigError(std::move(p.problems));
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path + ": cannot open"});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace levylab
