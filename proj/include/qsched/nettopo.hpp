#pragma once

#include "qsched/common.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace qsched::nettopo {

inline constexpr int kTopologyVersion = 1;

// Watts-Strogatz parameters. Reference setting: V = 10, K = 3, p = 0.6.
struct WsParams {
    int node_count = 10;
    int ring_degree = 3;
    double rewire_prob = 0.6;
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const WsParams&) const = default;
};

using Edge = std::pair<NodeId, NodeId>;  // first < second

// Connected, simple, undirected graph with all-pairs hop distances.
class Topology {
public:
    // Throws if the edge list has self-loops, duplicates, out-of-range
    // endpoints, or leaves the graph disconnected.
    Topology(int node_count, std::vector<Edge> edges);

    int node_count() const { return node_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int hop_distance(NodeId a, NodeId b) const;
    int diameter() const;
    std::vector<int> degrees() const;

    bool operator==(const Topology& other) const {
        return node_count_ == other.node_count_ && edges_ == other.edges_;
    }

private:
    int node_count_;
    std::vector<Edge> edges_;
    std::vector<int> hops_;  // row-major node_count x node_count
};

// Ring lattice plus rewiring, regenerated from derived seeds until connected.
//
// Ring: node i links to i+1 .. i+floor(K/2). For odd K each node also gets
// one chord to the diametrically opposite node (i + V/2), which keeps the
// lattice K-regular with V*K/2 edges for even V. Rewiring visits the lattice
// edges in construction order and, with probability p, moves the far
// endpoint to a uniform node that is neither the near endpoint nor already
// adjacent to it.
Topology generate(const WsParams& params);

// Unconnected variant used by generate(); exposed for tests.
std::vector<Edge> watts_strogatz_edges(const WsParams& params, std::uint64_t attempt_seed);

// -1 marks unreachable pairs.
std::vector<int> all_pairs_bfs(int node_count, const std::vector<Edge>& edges);

nlohmann::json to_json(const Topology& topology, const WsParams& params);
Topology topology_from_json(const nlohmann::json& doc);

void save(const Topology& topology, const WsParams& params, const std::filesystem::path& path);
Topology load_topology(const std::filesystem::path& path);

}  // namespace qsched::nettopo
