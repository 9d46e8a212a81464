#pragma once

#include "qsched/common.hpp"
#include "qsched/deepq/trainer.hpp"
#include "qsched/engine.hpp"
#include "qsched/nettopo.hpp"
#include "qsched/qlink/chain.hpp"
#include "qsched/traffic.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace qsched::config {

inline constexpr int kConfigVersion = 1;

// Slot interval presets. "high" is the congested regime where policies
// barely differ in delay.
Nanos load_preset_interval(std::string_view preset);

// Everything a run needs. Sub-seeds (topology, lookup table, arrivals,
// attempts, schedulers, training) are derived from `seed` by label.
struct RunConfig {
    std::uint64_t seed = 1;

    nettopo::WsParams topology;  // its seed field is ignored, see topology_seed()
    std::optional<std::filesystem::path> topology_path;

    engine::SlotConfig slots;
    int arrivals_low = 0;
    int arrivals_high = 5;

    qlink::NoiseParams noise;
    qlink::TimingParams timing;

    std::filesystem::path lut_path = "lut.json";
    int lut_max_hops = 0;  // 0: the topology diameter
    int lut_samples_per_hop = 10'000;
    int workers = 1;

    std::string scheduler = "fifo";
    // models[scheduler name][k] = model file
    std::map<std::string, std::map<int, std::filesystem::path>> models;

    deepq::TrainConfig train;  // its k, seed and coefficients are set per run
    std::filesystem::path output_dir = "out";

    void validate() const;

    std::uint64_t topology_seed() const;
    std::uint64_t lut_seed() const;
    std::uint64_t arrivals_seed(std::uint64_t replicate) const;
    std::uint64_t attempts_seed(std::uint64_t replicate) const;
    std::uint64_t scheduler_seed(std::uint64_t replicate) const;
    std::uint64_t train_seed(int k) const;

    traffic::ArrivalModel arrival_model(std::uint64_t replicate) const;
};

nlohmann::json to_json(const RunConfig& cfg);
// Missing keys keep their defaults. "slots.load" may name a preset instead
// of giving "slots.interval_ns".
RunConfig run_config_from_json(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& cfg, const std::filesystem::path& path);

// The configured topology: loaded from topology_path if set, else generated.
nettopo::Topology make_topology(const RunConfig& cfg);
nettopo::WsParams effective_ws_params(const RunConfig& cfg);

// Loads the table and checks it matches the configured physics and covers
// the topology.
qlink::LookupTable load_checked_lut(const RunConfig& cfg, const nettopo::Topology& topology);

}  // namespace qsched::config
