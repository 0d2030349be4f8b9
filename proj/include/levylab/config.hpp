#pragma once

#include "levylab/model.hpp"
#include "levylab/pathsim.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace levylab {

enum class ExperimentKind { Classify, Qx, Identity, Consistency, Zoo };
enum class OutputFormat { Csv, Json };

std::string to_string(ExperimentKind k);
std::optional<ExperimentKind> experiment_from_string(const std::string& s);

// One JSON document drives a whole run. Atom sizes/rates, drift, levels and
// the identity levels b, c may be given as numbers or as exactness-preserving
// strings ("0.3", "1/3"); strings are parsed into exact rationals.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Zoo;
    std::optional<LevyTriplet> triplet;        // required except for zoo
    std::vector<Rational> levels;              // qx / consistency
    bool strict = false;
    std::uint64_t n = 10'000;
    Rational b = 0, c = 0;                     // identity: 0 < c < b
    std::optional<double> delta;               // triviality tolerance override
    std::uint64_t min_crossed = 50;
    double lattice_tol = 0.0;
    std::uint64_t dump_skeletons = 0;          // qx: debug skeleton dumps
    SimConfig sim;
    std::string output = "out";
    OutputFormat format = OutputFormat::Csv;

    std::vector<double> levels_d() const {
        std::vector<double> out;
        for (const auto& l : levels) out.push_back(to_double(l));
        return out;
    }
};

// Carries every problem found, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    static std::string join(const std::vector<std::string>& p);
    std::vector<std::string> problems_;
};

ExperimentConfig load_config(const std::string& path);
// `origin` names the source in diagnostics (a path or "<inline>").
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

}  // namespace levylab
