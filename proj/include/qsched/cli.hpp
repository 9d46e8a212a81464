#pragma once

#include "qsched/config.hpp"
#include "qsched/deepq/trainer.hpp"
#include "qsched/metrics.hpp"
#include "qsched/qlink/lookup_table.hpp"
#include "qsched/sched.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qsched::cli {

inline constexpr int kOutputVersion = 1;

// Builds the table for the configured physics, covering the topology
// diameter unless lut_max_hops is set, and writes it to `out`.
qlink::LookupTable build_lut(const config::RunConfig& cfg, const std::filesystem::path& out,
                             std::ostream& log);

// Trains one model for k arrivals. Only k in {3, 4, 5} is accepted.
// Writes the model file and, next to it, <stem>.curve.csv.
deepq::TrainResult train_model(const config::RunConfig& cfg, int k, double c_d, double c_j,
                               const std::filesystem::path& model_out, std::ostream& log);

std::filesystem::path curve_path_for(const std::filesystem::path& model_out);

// Models for a DQN scheduler name, from cfg.models. Empty for other names.
sched::ModelBank load_model_bank(const config::RunConfig& cfg, const std::string& scheduler);

// Writes config.json, topology.json, requests.jsonl, metrics.json,
// delays.csv and cdf.csv into out_dir.
metrics::RunMetrics simulate(const config::RunConfig& cfg, const std::filesystem::path& out_dir,
                             std::ostream& log);

struct RunSummary {
    std::string scheduler;
    std::uint64_t trace_hash = 0;
    std::size_t arrivals = 0;
    std::size_t completed = 0;
    std::size_t dropped = 0;
    std::size_t unresolved = 0;
    double mean_delay = 0.0;
    double jain = 0.0;
    double drop_rate = 0.0;
};

struct GainSummary {
    std::string a;
    std::string b;
    double mean_gain = 0.0;  // replicate mean of (J_a - J_b) / (J_max - J_min)
    int positive = 0;        // replicates with J_a > J_b
};

struct Comparison {
    std::vector<std::string> schedulers;
    std::vector<std::uint64_t> trace_hashes;       // per replicate
    std::vector<std::vector<RunSummary>> runs;     // [replicate][scheduler]
    std::vector<RunSummary> mean;                  // per scheduler, over replicates
    std::vector<GainSummary> gains;                // every ordered pair
    std::vector<std::vector<double>> pooled_delays;  // per scheduler
};

// Every scheduler replays the same trace and attempt streams within a
// replicate. Writes config.json, metadata.json, comparison.csv,
// replicates.csv, gains.csv and cdf_<scheduler>.csv into out_dir.
Comparison compare(const config::RunConfig& cfg, const std::vector<std::string>& schedulers,
                   int replicates, const std::filesystem::path& out_dir, std::ostream& log);

// Markdown summary of a compare directory.
void report(const std::filesystem::path& dir, std::ostream& out);

std::string file_safe(const std::string& scheduler);
std::string hex64(std::uint64_t v);

}  // namespace qsched::cli
