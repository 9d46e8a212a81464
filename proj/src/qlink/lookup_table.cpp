#include "qsched/qlink/lookup_table.hpp"

#include "qsched/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>

namespace qsched::qlink {

const std::vector<LinkSample>& LookupTable::at(int hops) const {
    if (hops < 1 || hops > max_hops) {
        throw std::out_of_range("hop count " + std::to_string(hops) + " outside lookup table range [1, " +
                                std::to_string(max_hops) + "]");
    }
    return samples[static_cast<std::size_t>(hops - 1)];
}

const LinkSample& LookupTable::draw(int hops, Rng& rng) const {
    const auto& bucket = at(hops);
    return bucket[rng.uniform_index(bucket.size())];
}

void LookupTable::validate() const {
    if (max_hops < 1) {
        throw std::invalid_argument("lookup table must cover at least one hop");
    }
    if (samples.size() != static_cast<std::size_t>(max_hops)) {
        throw std::invalid_argument("lookup table hop buckets do not match max_hops");
    }
    for (std::size_t h = 0; h < samples.size(); ++h) {
        if (samples[h].empty()) {
            throw std::invalid_argument("lookup table has no samples for hop count " + std::to_string(h + 1));
        }
        for (const LinkSample& s : samples[h]) {
            if (s.duration <= 0 || !(s.fidelity >= 0.0 && s.fidelity <= 1.0)) {
                throw std::invalid_argument("invalid lookup sample at hop count " + std::to_string(h + 1));
            }
        }
    }
}

std::vector<HopSummary> summarize(const LookupTable& lut, double fidelity_threshold) {
    std::vector<HopSummary> out;
    for (int h = 1; h <= lut.max_hops; ++h) {
        const auto& bucket = lut.at(h);
        HopSummary s;
        s.hops = h;
        std::size_t successes = 0;
        for (const LinkSample& x : bucket) {
            s.mean_fidelity += x.fidelity;
            s.mean_duration += static_cast<double>(x.duration);
            if (x.fidelity > fidelity_threshold) {
                ++successes;
            }
        }
        const auto n = static_cast<double>(bucket.size());
        s.mean_fidelity /= n;
        s.mean_duration /= n;
        s.success_fraction = static_cast<double>(successes) / n;
        out.push_back(s);
    }
    return out;
}

std::vector<double> mean_service_durations(const LookupTable& lut, double fidelity_threshold,
                                           Nanos max_exec) {
    std::vector<double> out;
    for (const HopSummary& s : summarize(lut, fidelity_threshold)) {
        const double cap = static_cast<double>(max_exec);
        out.push_back(s.success_fraction > 0.0 ? std::min(s.mean_duration / s.success_fraction, cap) : cap);
    }
    return out;
}

LookupTable build_lookup_table(int max_hops, int samples_per_hop, const NoiseParams& noise,
                               const TimingParams& timing, std::uint64_t seed, int workers) {
    if (max_hops < 1) {
        throw std::invalid_argument("max_hops must be at least 1");
    }
    if (samples_per_hop < 1) {
        throw std::invalid_argument("samples_per_hop must be at least 1");
    }
    noise.validate();
    timing.validate();

    LookupTable lut;
    lut.max_hops = max_hops;
    lut.noise = noise;
    lut.timing = timing;
    lut.samples_per_hop = samples_per_hop;
    lut.seed = seed;
    lut.samples.assign(static_cast<std::size_t>(max_hops),
                       std::vector<LinkSample>(static_cast<std::size_t>(samples_per_hop)));

    const int chunks_per_hop = (samples_per_hop + kLookupChunkSize - 1) / kLookupChunkSize;
    const int total_chunks = chunks_per_hop * max_hops;

    auto fill_chunk = [&](int task) {
        const int hop = task / chunks_per_hop + 1;
        const int chunk = task % chunks_per_hop;
        Rng rng(derive_seed(seed, "lut", static_cast<std::uint64_t>(hop), static_cast<std::uint64_t>(chunk)));
        auto& bucket = lut.samples[static_cast<std::size_t>(hop - 1)];
        const int begin = chunk * kLookupChunkSize;
        const int end = std::min(samples_per_hop, begin + kLookupChunkSize);
        for (int i = begin; i < end; ++i) {
            bucket[static_cast<std::size_t>(i)] = simulate_chain(hop, noise, timing, rng);
        }
    };

    const int threads = std::clamp(workers, 1, total_chunks);
    if (threads == 1) {
        for (int t = 0; t < total_chunks; ++t) {
            fill_chunk(t);
        }
        return lut;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int t = next++; t < total_chunks; t = next++) {
                fill_chunk(t);
            }
        });
    }
    pool.clear();
    return lut;
}

nlohmann::json to_json(const LookupTable& lut) {
    nlohmann::json samples = nlohmann::json::object();
    for (int h = 1; h <= lut.max_hops; ++h) {
        nlohmann::json bucket = nlohmann::json::array();
        for (const LinkSample& s : lut.at(h)) {
            bucket.push_back({s.fidelity, s.duration});
        }
        samples[std::to_string(h)] = std::move(bucket);
    }
    return {
        {"version", kLookupTableVersion},
        {"max_hops", lut.max_hops},
        {"samples_per_hop", lut.samples_per_hop},
        {"seed", lut.seed},
        {"noise",
         {{"source_fidelity", lut.noise.source_fidelity},
          {"memory_depolar_rate_hz", lut.noise.memory_depolar_rate},
          {"gate_dephase_rate_hz", lut.noise.gate_dephase_rate}}},
        {"timing",
         {{"photon_hop_time_ns", lut.timing.photon_hop_time},
          {"classical_hop_time_ns", lut.timing.classical_hop_time},
          {"gate_time_ns", lut.timing.gate_time}}},
        {"samples", std::move(samples)},
    };
}

LookupTable lookup_table_from_json(const nlohmann::json& doc) {
    if (doc.value("version", 0) != kLookupTableVersion) {
        throw std::runtime_error("unsupported lookup table version");
    }
    LookupTable lut;
    lut.max_hops = doc.at("max_hops").get<int>();
    lut.samples_per_hop = doc.at("samples_per_hop").get<int>();
    lut.seed = doc.at("seed").get<std::uint64_t>();
    const auto& noise = doc.at("noise");
    lut.noise.source_fidelity = noise.at("source_fidelity").get<double>();
    lut.noise.memory_depolar_rate = noise.at("memory_depolar_rate_hz").get<double>();
    lut.noise.gate_dephase_rate = noise.at("gate_dephase_rate_hz").get<double>();
    const auto& timing = doc.at("timing");
    lut.timing.photon_hop_time = timing.at("photon_hop_time_ns").get<Nanos>();
    lut.timing.classical_hop_time = timing.at("classical_hop_time_ns").get<Nanos>();
    lut.timing.gate_time = timing.at("gate_time_ns").get<Nanos>();
    const auto& samples = doc.at("samples");
    for (int h = 1; h <= lut.max_hops; ++h) {
        std::vector<LinkSample> bucket;
        for (const auto& pair : samples.at(std::to_string(h))) {
            bucket.push_back({pair.at(0).get<double>(), pair.at(1).get<Nanos>()});
        }
        lut.samples.push_back(std::move(bucket));
    }
    lut.validate();
    return lut;
}

void save(const LookupTable& lut, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << to_json(lut).dump() << '\n';
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

LookupTable load_lookup_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open lookup table " + path.string());
    }
    return lookup_table_from_json(nlohmann::json::parse(in));
}

}  // namespace qsched::qlink
