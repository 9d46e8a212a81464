#include "qsched/cli.hpp"
#include "qsched/config.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using qsched::config::RunConfig;

namespace {

// Flags shared by every subcommand; set values override the config file.
struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> load;
    std::optional<std::int64_t> interval_ns;
    std::optional<std::int64_t> slots;
    std::optional<std::string> lut;
    std::optional<int> workers;
    std::optional<std::string> scheduler;
    std::optional<int> epochs;
    std::vector<std::string> models;  // name:k=path

    void attach(CLI::App* app) {
        app->add_option("-c,--config", config_path, "run configuration (JSON)");
        app->add_option("--seed", seed, "master seed");
        app->add_option("--load", load, "slot interval preset: low | medium | high");
        app->add_option("--interval-ns", interval_ns, "slot interval");
        app->add_option("--slots", slots, "number of time slots");
        app->add_option("--lut", lut, "lookup table path");
        app->add_option("--workers", workers, "worker threads");
        app->add_option("--scheduler", scheduler, "fifo | greedy | pfair | dqn:delay | dqn:fair");
        app->add_option("--epochs", epochs, "training epochs");
        app->add_option("--model", models, "model file as name:k=path, e.g. dqn:delay:3=m3.json");
    }

    RunConfig resolve() const {
        RunConfig cfg = config_path.empty() ? RunConfig{} : qsched::config::load_run_config(config_path);
        if (seed) cfg.seed = *seed;
        if (load) cfg.slots.slot_interval = qsched::config::load_preset_interval(*load);
        if (interval_ns) cfg.slots.slot_interval = *interval_ns;
        if (slots) cfg.slots.num_slots = *slots;
        if (lut) cfg.lut_path = *lut;
        if (workers) cfg.workers = *workers;
        if (scheduler) cfg.scheduler = *scheduler;
        if (epochs) cfg.train.epochs = *epochs;
        for (const auto& spec : models) {
            const auto eq = spec.find('=');
            const auto colon = spec.rfind(':', eq);
            if (eq == std::string::npos || colon == std::string::npos || colon == 0) {
                throw std::invalid_argument("--model expects name:k=path, got '" + spec + "'");
            }
            cfg.models[spec.substr(0, colon)][std::stoi(spec.substr(colon + 1, eq - colon - 1))] =
                spec.substr(eq + 1);
        }
        cfg.validate();
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement request scheduling simulator"};
    app.require_subcommand(1);

    CommonFlags lut_flags;
    std::string lut_out;
    auto* build_lut = app.add_subcommand("build-lut", "build the per-hop lookup table");
    lut_flags.attach(build_lut);
    build_lut->add_option("-o,--out", lut_out, "output path (default: lut.path from the config)");

    CommonFlags train_flags;
    int k = 0;
    double c_d = 0.9;
    double c_j = 0.1;
    std::string model_out;
    auto* train = app.add_subcommand("train", "train one DQN model");
    train_flags.attach(train);
    train->add_option("-k", k, "requests per episode (3, 4 or 5)")->required();
    train->add_option("--c-d", c_d, "delay reward coefficient");
    train->add_option("--c-j", c_j, "fairness reward coefficient");
    train->add_option("-o,--out", model_out, "model file")->required();

    CommonFlags sim_flags;
    std::string sim_out;
    auto* simulate = app.add_subcommand("simulate", "run one scheduler");
    sim_flags.attach(simulate);
    simulate->add_option("-o,--out", sim_out, "output directory (default: output_dir)");

    CommonFlags cmp_flags;
    std::vector<std::string> schedulers{"fifo", "greedy", "pfair"};
    int replicates = 1;
    std::string cmp_out;
    auto* compare = app.add_subcommand("compare", "compare schedulers on shared traces");
    cmp_flags.attach(compare);
    compare->add_option("-s,--schedulers", schedulers, "schedulers to compare")->delimiter(',');
    compare->add_option("-r,--replicates", replicates, "independent replicates");
    compare->add_option("-o,--out", cmp_out, "output directory (default: output_dir)");

    std::string report_dir;
    auto* report = app.add_subcommand("report", "summarize a compare directory as markdown");
    report->add_option("dir", report_dir, "compare output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*build_lut) {
            const RunConfig cfg = lut_flags.resolve();
            qsched::cli::build_lut(cfg, lut_out.empty() ? cfg.lut_path : fs::path(lut_out), std::cout);
        } else if (*train) {
            const RunConfig cfg = train_flags.resolve();
            qsched::cli::train_model(cfg, k, c_d, c_j, model_out, std::cout);
        } else if (*simulate) {
            const RunConfig cfg = sim_flags.resolve();
            qsched::cli::simulate(cfg, sim_out.empty() ? cfg.output_dir : fs::path(sim_out), std::cout);
        } else if (*compare) {
            const RunConfig cfg = cmp_flags.resolve();
            qsched::cli::compare(cfg, schedulers, replicates,
                                 cmp_out.empty() ? cfg.output_dir : fs::path(cmp_out), std::cout);
        } else if (*report) {
            qsched::cli::report(report_dir, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
