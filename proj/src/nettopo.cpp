#include "qsched/nettopo.hpp"

#include "qsched/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

namespace qsched::nettopo {

namespace {

constexpr int kMaxRegenerations = 10'000;

Edge normalized(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace

void WsParams::validate() const {
    if (node_count < 3) {
        throw std::invalid_argument("node_count must be at least 3");
    }
    if (ring_degree < 1 || ring_degree >= node_count) {
        throw std::invalid_argument("ring_degree must satisfy 1 <= K < V");
    }
    if (!(rewire_prob >= 0.0 && rewire_prob <= 1.0)) {
        throw std::invalid_argument("rewire_prob must lie in [0, 1]");
    }
}

std::vector<int> all_pairs_bfs(int node_count, const std::vector<Edge>& edges) {
    const auto n = static_cast<std::size_t>(node_count);
    std::vector<std::vector<NodeId>> adj(n);
    for (const auto& [u, v] : edges) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    std::vector<int> dist(n * n, -1);
    for (std::size_t s = 0; s < n; ++s) {
        int* row = &dist[s * n];
        row[s] = 0;
        std::deque<NodeId> frontier{static_cast<NodeId>(s)};
        while (!frontier.empty()) {
            const NodeId u = frontier.front();
            frontier.pop_front();
            for (const NodeId v : adj[static_cast<std::size_t>(u)]) {
                if (row[v] < 0) {
                    row[v] = row[u] + 1;
                    frontier.push_back(v);
                }
            }
        }
    }
    return dist;
}

Topology::Topology(int node_count, std::vector<Edge> edges) : node_count_(node_count) {
    if (node_count < 1) {
        throw std::invalid_argument("topology needs at least one node");
    }
    std::set<Edge> seen;
    for (auto& e : edges) {
        if (e.first < 0 || e.second < 0 || e.first >= node_count || e.second >= node_count) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        if (e.first == e.second) {
            throw std::invalid_argument("self-loop at node " + std::to_string(e.first));
        }
        e = normalized(e.first, e.second);
        if (!seen.insert(e).second) {
            throw std::invalid_argument("duplicate edge (" + std::to_string(e.first) + ", " +
                                        std::to_string(e.second) + ")");
        }
    }
    edges_.assign(seen.begin(), seen.end());
    hops_ = all_pairs_bfs(node_count_, edges_);
    if (std::find(hops_.begin(), hops_.end(), -1) != hops_.end()) {
        throw std::invalid_argument("topology is not connected");
    }
}

int Topology::hop_distance(NodeId a, NodeId b) const {
    if (a < 0 || b < 0 || a >= node_count_ || b >= node_count_) {
        throw std::out_of_range("node index out of range");
    }
    return hops_[static_cast<std::size_t>(a) * static_cast<std::size_t>(node_count_) +
                 static_cast<std::size_t>(b)];
}

int Topology::diameter() const { return *std::max_element(hops_.begin(), hops_.end()); }

std::vector<int> Topology::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(node_count_), 0);
    for (const auto& [u, v] : edges_) {
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
    }
    return deg;
}

std::vector<Edge> watts_strogatz_edges(const WsParams& params, std::uint64_t attempt_seed) {
    params.validate();
    const int n = params.node_count;
    const int half = params.ring_degree / 2;

    // Lattice edges as (near, far) in construction order.
    std::vector<Edge> lattice;
    for (int i = 0; i < n; ++i) {
        for (int j = 1; j <= half; ++j) {
            lattice.emplace_back(i, (i + j) % n);
        }
    }
    if (params.ring_degree % 2 == 1) {
        for (int i = 0; i < n / 2; ++i) {
            lattice.emplace_back(i, i + n / 2);
        }
    }

    std::set<Edge> present;
    for (const auto& [u, v] : lattice) {
        present.insert(normalized(u, v));
    }

    Rng rng(attempt_seed);
    std::vector<NodeId> candidates;
    for (const auto& [u, v] : lattice) {
        if (!rng.bernoulli(params.rewire_prob)) {
            continue;
        }
        candidates.clear();
        for (NodeId w = 0; w < n; ++w) {
            if (w != u && !present.contains(normalized(u, w))) {
                candidates.push_back(w);
            }
        }
        if (candidates.empty()) {
            continue;
        }
        const NodeId w = candidates[rng.uniform_index(candidates.size())];
        present.erase(normalized(u, v));
        present.insert(normalized(u, w));
    }
    return {present.begin(), present.end()};
}

Topology generate(const WsParams& params) {
    params.validate();
    for (int attempt = 0; attempt < kMaxRegenerations; ++attempt) {
        auto edges = watts_strogatz_edges(params, derive_seed(params.seed, "watts-strogatz",
                                                              static_cast<std::uint64_t>(attempt)));
        const auto dist = all_pairs_bfs(params.node_count, edges);
        if (std::find(dist.begin(), dist.end(), -1) == dist.end()) {
            return Topology(params.node_count, std::move(edges));
        }
    }
    throw std::runtime_error("could not generate a connected Watts-Strogatz graph");
}

nlohmann::json to_json(const Topology& topology, const WsParams& params) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [u, v] : topology.edges()) {
        edges.push_back({u, v});
    }
    return {
        {"version", kTopologyVersion},
        {"params",
         {{"node_count", params.node_count},
          {"ring_degree", params.ring_degree},
          {"rewire_prob", params.rewire_prob},
          {"seed", params.seed}}},
        {"edges", std::move(edges)},
    };
}

Topology topology_from_json(const nlohmann::json& doc) {
    if (doc.value("version", 0) != kTopologyVersion) {
        throw std::runtime_error("unsupported topology version");
    }
    const int n = doc.at("params").at("node_count").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
        edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    }
    return Topology(n, std::move(edges));
}

void save(const Topology& topology, const WsParams& params, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << to_json(topology, params).dump(2) << '\n';
}

Topology load_topology(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open topology " + path.string());
    }
    return topology_from_json(nlohmann::json::parse(in));
}

}  // namespace qsched::nettopo
