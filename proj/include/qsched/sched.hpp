#pragma once

#include "qsched/common.hpp"
#include "qsched/rng.hpp"
#include "qsched/traffic.hpp"

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qsched::nettopo {
class Topology;
}

namespace qsched::deepq {
struct QNetworkModel;
}

namespace qsched::sched {

// What a policy may look at when ordering a slot's arrivals.
struct SchedulerContext {
    const nettopo::Topology* topology = nullptr;
    // Expected service time per hop count, index h - 1.
    std::vector<double> mean_service_by_hop;
    Nanos clock = 0;

    int hops(const traffic::Request& r) const;
    double mean_service(int hops) const;
};

// A service order is a permutation of indices into the input list.
using Order = std::vector<std::size_t>;

// Throws std::logic_error unless `order` is a permutation of [0, n).
void check_permutation(const Order& order, std::size_t n);

Order fifo_order(std::span<const traffic::Request> requests);

// Ascending hop distance, ties by ascending request id.
Order greedy_order(std::span<const traffic::Request> requests, const SchedulerContext& ctx);

// Weighted sampling without replacement; weight = expected service time at
// the request's hop distance, so longer requests tend to go first.
Order proportional_fair_order(std::span<const traffic::Request> requests,
                              const SchedulerContext& ctx, Rng& rng);

enum class DqnBias { DelayBiased, FairnessBiased };

// Trained policy networks keyed by the number of requests they order.
using ModelBank = std::map<int, std::shared_ptr<const deepq::QNetworkModel>>;

// Below three requests the policy falls back to greedy (delay bias) or
// proportional fair (fairness bias). Otherwise the k-request network picks
// the highest-valued unresolved request, that row is zeroed, and so on.
Order dqn_order(std::span<const traffic::Request> requests, const SchedulerContext& ctx,
                const ModelBank& bank, DqnBias bias, Rng& rng);

inline constexpr int kDqnMinRequests = 3;

class Scheduler {
public:
    virtual ~Scheduler() = default;
    virtual std::string name() const = 0;
    virtual Order order(std::span<const traffic::Request> requests, const SchedulerContext& ctx) = 0;
};

class FifoScheduler final : public Scheduler {
public:
    std::string name() const override { return "fifo"; }
    Order order(std::span<const traffic::Request> requests, const SchedulerContext&) override {
        return fifo_order(requests);
    }
};

class GreedyScheduler final : public Scheduler {
public:
    std::string name() const override { return "greedy"; }
    Order order(std::span<const traffic::Request> requests, const SchedulerContext& ctx) override {
        return greedy_order(requests, ctx);
    }
};

class ProportionalFairScheduler final : public Scheduler {
public:
    explicit ProportionalFairScheduler(std::uint64_t seed) : rng_(seed) {}
    std::string name() const override { return "pfair"; }
    Order order(std::span<const traffic::Request> requests, const SchedulerContext& ctx) override {
        return proportional_fair_order(requests, ctx, rng_);
    }

private:
    Rng rng_;
};

class DqnScheduler final : public Scheduler {
public:
    DqnScheduler(ModelBank bank, DqnBias bias, std::uint64_t seed);
    std::string name() const override;
    Order order(std::span<const traffic::Request> requests, const SchedulerContext& ctx) override {
        return dqn_order(requests, ctx, bank_, bias_, rng_);
    }

private:
    ModelBank bank_;
    DqnBias bias_;
    Rng rng_;
};

// Names: "fifo" | "greedy" | "pfair" | "dqn:delay" | "dqn:fair".
bool is_dqn(std::string_view name);
DqnBias dqn_bias(std::string_view name);
std::unique_ptr<Scheduler> make_scheduler(std::string_view name, std::uint64_t seed,
                                          const ModelBank& bank = {});

}  // namespace qsched::sched
