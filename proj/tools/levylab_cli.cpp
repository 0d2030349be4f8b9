#include "levylab/config.hpp"
#include "levylab/report.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required) {
    auto* c = cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--format", opts.format, "csv or json (overrides config)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opts.seed, "seed (overrides config)");
}

int run(levylab::ExperimentKind kind, const CommonOpts& opts) {
    using namespace levylab;
    ExperimentConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = load_config(opts.config_path);
        if (cfg.experiment != kind) {
            std::cerr << "config declares experiment \"" << to_string(cfg.experiment)
                      << "\" but the subcommand is \"" << to_string(kind) << "\"\n";
            return 1;
        }
    } else {
        cfg.experiment = kind;  // zoo runs entirely from built-ins
    }
    if (!opts.out_dir.empty()) cfg.output = opts.out_dir;
    if (!opts.format.empty()) cfg.format = opts.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (opts.seed) cfg.sim.seed = *opts.seed;

    ReportBundle bundle = run_experiment(cfg);
    write_bundle(bundle, cfg.output);
    std::cout << bundle.summary;
    std::cout << "wrote " << bundle.files.size() << " files to " << cfg.output << " in "
              << bundle.wall_seconds << " s\n";
    return bundle.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"levylab: first-passage experiments for Levy processes"};
    app.require_subcommand(1);

    CommonOpts opts;
    app.add_subcommand("classify", "classify a triplet and predict passage positions");
    app.add_subcommand("qx", "estimate first-passage laws and test degeneracy");
    app.add_subcommand("identity", "check the first-passage convolution identity");
    app.add_subcommand("consistency", "per-level verdicts and homogeneity across levels");
    app.add_subcommand("zoo", "run the built-in process catalog and cross-validate");
    for (auto* cmd : app.get_subcommands({}))
        add_common(cmd, opts, /*config_required=*/cmd->get_name() != "zoo");

    CLI11_PARSE(app, argc, argv);

    auto kind = levylab::experiment_from_string(app.get_subcommands()[0]->get_name());
    try {
        return run(*kind, opts);
    } catch (const levylab::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
