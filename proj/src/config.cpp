#include "qsched/config.hpp"

#include "qsched/qlink/lookup_table.hpp"
#include "qsched/rng.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace qsched::config {

namespace fs = std::filesystem;

Nanos load_preset_interval(std::string_view preset) {
    if (preset == "medium") {
        return 200'000;
    }
    if (preset == "low") {
        return 500'000;
    }
    if (preset == "high") {
        return 100'000;
    }
    throw std::invalid_argument("unknown load preset '" + std::string(preset) + "'");
}

void RunConfig::validate() const {
    if (!topology_path) {
        nettopo::WsParams p = topology;
        p.validate();
    }
    slots.validate();
    traffic::ArrivalModel{arrivals_low, arrivals_high, 0}.validate();
    noise.validate();
    timing.validate();
    if (lut_max_hops < 0) {
        throw std::invalid_argument("lut.max_hops must be non-negative");
    }
    if (lut_samples_per_hop < 1) {
        throw std::invalid_argument("lut.samples_per_hop must be positive");
    }
    if (workers < 1) {
        throw std::invalid_argument("workers must be positive");
    }
    for (const auto& [name, by_k] : models) {
        if (name != "dqn:delay" && name != "dqn:fair") {
            throw std::invalid_argument("models: unknown scheduler '" + name + "'");
        }
        for (const auto& [k, path] : by_k) {
            if (k < 1) {
                throw std::invalid_argument("models: k must be positive");
            }
        }
    }
}

std::uint64_t RunConfig::topology_seed() const { return derive_seed(seed, "topology"); }
std::uint64_t RunConfig::lut_seed() const { return derive_seed(seed, "lut"); }

std::uint64_t RunConfig::arrivals_seed(std::uint64_t replicate) const {
    return derive_seed(seed, "arrivals", replicate);
}

std::uint64_t RunConfig::attempts_seed(std::uint64_t replicate) const {
    return derive_seed(seed, "attempts", replicate);
}

std::uint64_t RunConfig::scheduler_seed(std::uint64_t replicate) const {
    return derive_seed(seed, "scheduler", replicate);
}

std::uint64_t RunConfig::train_seed(int k) const {
    return derive_seed(seed, "train", static_cast<std::uint64_t>(k));
}

traffic::ArrivalModel RunConfig::arrival_model(std::uint64_t replicate) const {
    return {arrivals_low, arrivals_high, arrivals_seed(replicate)};
}

nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json topo = {
        {"nodes", cfg.topology.node_count},
        {"ring_degree", cfg.topology.ring_degree},
        {"rewire_prob", cfg.topology.rewire_prob},
    };
    if (cfg.topology_path) {
        topo["path"] = cfg.topology_path->string();
    }
    nlohmann::json models = nlohmann::json::object();
    for (const auto& [name, by_k] : cfg.models) {
        for (const auto& [k, path] : by_k) {
            models[name][std::to_string(k)] = path.string();
        }
    }
    nlohmann::json train = deepq::to_json(cfg.train);
    train.erase("k");
    train.erase("seed");
    train.erase("c_d");
    train.erase("c_j");
    return {
        {"version", kConfigVersion},
        {"seed", cfg.seed},
        {"topology", topo},
        {"slots",
         {{"interval_ns", cfg.slots.slot_interval},
          {"max_exec_ns", cfg.slots.max_exec},
          {"count", cfg.slots.num_slots},
          {"fidelity_threshold", cfg.slots.fidelity_threshold}}},
        {"arrivals", {{"low", cfg.arrivals_low}, {"high", cfg.arrivals_high}}},
        {"noise",
         {{"source_fidelity", cfg.noise.source_fidelity},
          {"memory_depolar_rate_hz", cfg.noise.memory_depolar_rate},
          {"gate_dephase_rate_hz", cfg.noise.gate_dephase_rate}}},
        {"timing",
         {{"photon_hop_time_ns", cfg.timing.photon_hop_time},
          {"classical_hop_time_ns", cfg.timing.classical_hop_time},
          {"gate_time_ns", cfg.timing.gate_time}}},
        {"lut",
         {{"path", cfg.lut_path.string()},
          {"max_hops", cfg.lut_max_hops},
          {"samples_per_hop", cfg.lut_samples_per_hop}}},
        {"workers", cfg.workers},
        {"scheduler", cfg.scheduler},
        {"models", models},
        {"train", train},
        {"output_dir", cfg.output_dir.string()},
    };
}

RunConfig run_config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    if (doc.value("version", kConfigVersion) != kConfigVersion) {
        throw std::invalid_argument("unsupported config version");
    }
    static const nlohmann::json kEmpty = nlohmann::json::object();
    const auto section = [&](const char* key) -> const nlohmann::json& {
        return doc.contains(key) ? doc.at(key) : kEmpty;
    };

    RunConfig cfg;
    cfg.seed = doc.value("seed", cfg.seed);

    const auto& topo = section("topology");
    cfg.topology.node_count = topo.value("nodes", cfg.topology.node_count);
    cfg.topology.ring_degree = topo.value("ring_degree", cfg.topology.ring_degree);
    cfg.topology.rewire_prob = topo.value("rewire_prob", cfg.topology.rewire_prob);
    if (topo.contains("path") && !topo.at("path").is_null()) {
        cfg.topology_path = topo.at("path").get<std::string>();
    }

    const auto& slots = section("slots");
    if (slots.contains("load")) {
        cfg.slots.slot_interval = load_preset_interval(slots.at("load").get<std::string>());
    }
    cfg.slots.slot_interval = slots.value("interval_ns", cfg.slots.slot_interval);
    cfg.slots.max_exec = slots.value("max_exec_ns", cfg.slots.max_exec);
    cfg.slots.num_slots = slots.value("count", cfg.slots.num_slots);
    cfg.slots.fidelity_threshold = slots.value("fidelity_threshold", cfg.slots.fidelity_threshold);

    const auto& arrivals = section("arrivals");
    cfg.arrivals_low = arrivals.value("low", cfg.arrivals_low);
    cfg.arrivals_high = arrivals.value("high", cfg.arrivals_high);

    const auto& noise = section("noise");
    cfg.noise.source_fidelity = noise.value("source_fidelity", cfg.noise.source_fidelity);
    cfg.noise.memory_depolar_rate = noise.value("memory_depolar_rate_hz", cfg.noise.memory_depolar_rate);
    cfg.noise.gate_dephase_rate = noise.value("gate_dephase_rate_hz", cfg.noise.gate_dephase_rate);

    const auto& timing = section("timing");
    cfg.timing.photon_hop_time = timing.value("photon_hop_time_ns", cfg.timing.photon_hop_time);
    cfg.timing.classical_hop_time = timing.value("classical_hop_time_ns", cfg.timing.classical_hop_time);
    cfg.timing.gate_time = timing.value("gate_time_ns", cfg.timing.gate_time);

    const auto& lut = section("lut");
    cfg.lut_path = lut.value("path", cfg.lut_path.string());
    cfg.lut_max_hops = lut.value("max_hops", cfg.lut_max_hops);
    cfg.lut_samples_per_hop = lut.value("samples_per_hop", cfg.lut_samples_per_hop);

    cfg.workers = doc.value("workers", cfg.workers);
    cfg.scheduler = doc.value("scheduler", cfg.scheduler);

    for (const auto& [name, by_k] : section("models").items()) {
        for (const auto& [k, path] : by_k.items()) {
            cfg.models[name][std::stoi(k)] = path.get<std::string>();
        }
    }

    cfg.train = deepq::train_config_from_json(section("train"), cfg.train);
    cfg.output_dir = doc.value("output_dir", cfg.output_dir.string());
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config " + path.string());
    }
    return run_config_from_json(nlohmann::json::parse(in));
}

void save_run_config(const RunConfig& cfg, const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << to_json(cfg).dump(2) << '\n';
}

nettopo::WsParams effective_ws_params(const RunConfig& cfg) {
    if (cfg.topology_path) {
        std::ifstream in(*cfg.topology_path);
        if (!in) {
            throw std::runtime_error("cannot open topology " + cfg.topology_path->string());
        }
        const auto doc = nlohmann::json::parse(in);
        const auto& p = doc.at("params");
        return {p.at("node_count").get<int>(), p.at("ring_degree").get<int>(),
                p.at("rewire_prob").get<double>(), p.at("seed").get<std::uint64_t>()};
    }
    nettopo::WsParams p = cfg.topology;
    p.seed = cfg.topology_seed();
    return p;
}

nettopo::Topology make_topology(const RunConfig& cfg) {
    if (cfg.topology_path) {
        return nettopo::load_topology(*cfg.topology_path);
    }
    return nettopo::generate(effective_ws_params(cfg));
}

qlink::LookupTable load_checked_lut(const RunConfig& cfg, const nettopo::Topology& topology) {
    if (!fs::exists(cfg.lut_path)) {
        throw std::runtime_error("lookup table " + cfg.lut_path.string() +
                                 " not found (run build-lut first)");
    }
    qlink::LookupTable lut = qlink::load_lookup_table(cfg.lut_path);
    if (!(lut.noise == cfg.noise) || !(lut.timing == cfg.timing)) {
        throw std::runtime_error("lookup table " + cfg.lut_path.string() +
                                 " was built with different noise or timing parameters");
    }
    if (lut.max_hops < topology.diameter()) {
        throw std::runtime_error("lookup table covers " + std::to_string(lut.max_hops) +
                                 " hops but the topology diameter is " +
                                 std::to_string(topology.diameter()));
    }
    return lut;
}

}  // namespace qsched::config
