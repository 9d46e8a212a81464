#include "qsched/sched.hpp"

#include "qsched/deepq/mlp.hpp"
#include "qsched/deepq/state.hpp"
#include "qsched/deepq/trainer.hpp"
#include "qsched/nettopo.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qsched::sched {

int SchedulerContext::hops(const traffic::Request& r) const {
    if (topology == nullptr) {
        throw std::logic_error("scheduler context has no topology");
    }
    return topology->hop_distance(r.src, r.dst);
}

double SchedulerContext::mean_service(int h) const {
    if (h < 1 || h > static_cast<int>(mean_service_by_hop.size())) {
        throw std::out_of_range("no mean service time for " + std::to_string(h) + " hops");
    }
    return mean_service_by_hop[static_cast<std::size_t>(h - 1)];
}

void check_permutation(const Order& order, std::size_t n) {
    if (order.size() != n) {
        throw std::logic_error("scheduler returned an order of the wrong length");
    }
    std::vector<bool> seen(n, false);
    for (const std::size_t i : order) {
        if (i >= n || seen[i]) {
            throw std::logic_error("scheduler returned a non-permutation");
        }
        seen[i] = true;
    }
}

Order fifo_order(std::span<const traffic::Request> requests) {
    Order order(requests.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
}

Order greedy_order(std::span<const traffic::Request> requests, const SchedulerContext& ctx) {
    std::vector<int> hops(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        hops[i] = ctx.hops(requests[i]);
    }
    Order order = fifo_order(requests);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (hops[a] != hops[b]) {
            return hops[a] < hops[b];
        }
        if (requests[a].id != requests[b].id) {
            return requests[a].id < requests[b].id;
        }
        return a < b;
    });
    return order;
}

Order proportional_fair_order(std::span<const traffic::Request> requests,
                              const SchedulerContext& ctx, Rng& rng) {
    std::vector<std::size_t> remaining = fifo_order(requests);
    std::vector<double> weights(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        weights[i] = ctx.mean_service(ctx.hops(requests[i]));
        if (!(weights[i] > 0.0)) {
            throw std::invalid_argument("proportional fair weights must be positive");
        }
    }
    Order order;
    order.reserve(requests.size());
    while (remaining.size() > 1) {
        double total = 0.0;
        for (const std::size_t i : remaining) {
            total += weights[i];
        }
        const double u = rng.uniform() * total;
        std::size_t pick = remaining.size() - 1;
        double acc = 0.0;
        for (std::size_t j = 0; j < remaining.size(); ++j) {
            acc += weights[remaining[j]];
            if (u < acc) {
                pick = j;
                break;
            }
        }
        order.push_back(remaining[pick]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    if (!remaining.empty()) {
        order.push_back(remaining.front());
    }
    return order;
}

Order dqn_order(std::span<const traffic::Request> requests, const SchedulerContext& ctx,
                const ModelBank& bank, DqnBias bias, Rng& rng) {
    const auto k = static_cast<int>(requests.size());
    if (k < kDqnMinRequests) {
        return bias == DqnBias::DelayBiased ? greedy_order(requests, ctx)
                                            : proportional_fair_order(requests, ctx, rng);
    }
    const auto it = bank.find(k);
    if (it == bank.end() || !it->second) {
        throw std::invalid_argument("no trained model for k = " + std::to_string(k));
    }
    const deepq::QNetworkModel& model = *it->second;
    if (ctx.topology == nullptr) {
        throw std::logic_error("scheduler context has no topology");
    }
    const int node_count = ctx.topology->node_count();
    if (model.k != k || model.node_count != node_count) {
        throw std::invalid_argument("model shape does not match the request set");
    }
    std::vector<deepq::PendingEntry> pending;
    pending.reserve(requests.size());
    for (const traffic::Request& r : requests) {
        pending.push_back({r.src, r.dst, false});
    }
    deepq::StateMatrix state = deepq::encode_state(pending, node_count, k);
    Order order;
    order.reserve(requests.size());
    while (!state.all_resolved()) {
        const int a = deepq::masked_argmax(deepq::forward(model, state), state.legal_mask());
        order.push_back(static_cast<std::size_t>(a));
        state.resolve(a);
    }
    return order;
}

DqnScheduler::DqnScheduler(ModelBank bank, DqnBias bias, std::uint64_t seed)
    : bank_(std::move(bank)), bias_(bias), rng_(seed) {}

std::string DqnScheduler::name() const {
    return bias_ == DqnBias::DelayBiased ? "dqn:delay" : "dqn:fair";
}

bool is_dqn(std::string_view name) { return name == "dqn:delay" || name == "dqn:fair"; }

DqnBias dqn_bias(std::string_view name) {
    if (name == "dqn:delay") {
        return DqnBias::DelayBiased;
    }
    if (name == "dqn:fair") {
        return DqnBias::FairnessBiased;
    }
    throw std::invalid_argument("not a DQN scheduler: '" + std::string(name) + "'");
}

std::unique_ptr<Scheduler> make_scheduler(std::string_view name, std::uint64_t seed,
                                          const ModelBank& bank) {
    if (name == "fifo") {
        return std::make_unique<FifoScheduler>();
    }
    if (name == "greedy") {
        return std::make_unique<GreedyScheduler>();
    }
    if (name == "pfair") {
        return std::make_unique<ProportionalFairScheduler>(seed);
    }
    if (is_dqn(name)) {
        for (int k = kDqnMinRequests; k <= 5; ++k) {
            if (!bank.contains(k)) {
                throw std::invalid_argument("scheduler '" + std::string(name) +
                                            "' needs a model for k = " + std::to_string(k));
            }
        }
        return std::make_unique<DqnScheduler>(bank, dqn_bias(name), seed);
    }
    throw std::invalid_argument("unknown scheduler '" + std::string(name) + "'");
}

}  // namespace qsched::sched
