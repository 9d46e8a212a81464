#pragma once

#include "qsched/common.hpp"
#include "qsched/qlink/chain.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace qsched {
class Rng;
}

namespace qsched::qlink {

inline constexpr int kLookupTableVersion = 1;

// Empirical per-hop distribution of (fidelity, attempt duration) samples.
// Consumers draw uniformly with replacement.
struct LookupTable {
    int max_hops = 0;
    // samples[h - 1] holds the samples for hop count h.
    std::vector<std::vector<LinkSample>> samples;

    NoiseParams noise;
    TimingParams timing;
    int samples_per_hop = 0;
    std::uint64_t seed = 0;

    const std::vector<LinkSample>& at(int hops) const;
    const LinkSample& draw(int hops, Rng& rng) const;

    void validate() const;
    bool operator==(const LookupTable&) const = default;
};

struct HopSummary {
    int hops = 0;
    double mean_fidelity = 0.0;
    double mean_duration = 0.0;     // ns per attempt
    double success_fraction = 0.0;  // share of samples above the threshold
};

std::vector<HopSummary> summarize(const LookupTable& lut, double fidelity_threshold);

// Expected time to a successful attempt at each hop count, capped at
// max_exec (index h - 1). A hop count with no successful samples maps to
// max_exec.
std::vector<double> mean_service_durations(const LookupTable& lut, double fidelity_threshold,
                                           Nanos max_exec);

// Samples are produced in fixed-size chunks, each from its own stream
// derived from (seed, hop, chunk). Chunks can be filled by any number of
// workers in any order; the merged table is the same.
inline constexpr int kLookupChunkSize = 1024;

LookupTable build_lookup_table(int max_hops, int samples_per_hop, const NoiseParams& noise,
                               const TimingParams& timing, std::uint64_t seed, int workers = 1);

nlohmann::json to_json(const LookupTable& lut);
LookupTable lookup_table_from_json(const nlohmann::json& doc);

void save(const LookupTable& lut, const std::filesystem::path& path);
LookupTable load_lookup_table(const std::filesystem::path& path);

}  // namespace qsched::qlink
