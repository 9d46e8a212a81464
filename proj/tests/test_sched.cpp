#include "qsched/deepq/mlp.hpp"
#include "qsched/deepq/reward.hpp"
#include "qsched/nettopo.hpp"
#include "qsched/rng.hpp"
#include "qsched/sched.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

using namespace qsched;
using namespace qsched::sched;
using traffic::Request;

namespace {

// Path graph 0 - 1 - 2 - 3 - 4 - 5.
const nettopo::Topology& line6() {
    static const nettopo::Topology t(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    return t;
}

SchedulerContext context(std::vector<double> mean_service = {1, 2, 3, 4, 5}) {
    SchedulerContext ctx;
    ctx.topology = &line6();
    ctx.mean_service_by_hop = std::move(mean_service);
    return ctx;
}

// Request with id `id` spanning `hops` hops on the path graph.
Request spanning(RequestId id, int hops, NodeId from = 0) {
    Request r;
    r.id = id;
    r.src = from;
    r.dst = from + hops;
    return r;
}

bool is_permutation_of(const Order& o, std::size_t n) {
    Order sorted = o;
    std::sort(sorted.begin(), sorted.end());
    Order iota(n);
    std::iota(iota.begin(), iota.end(), 0);
    return sorted == iota;
}

}  // namespace

TEST(CheckPermutation, AcceptsAndRejects) {
    EXPECT_NO_THROW(check_permutation({2, 0, 1}, 3));
    EXPECT_NO_THROW(check_permutation({}, 0));
    EXPECT_THROW(check_permutation({0, 0, 1}, 3), std::logic_error);
    EXPECT_THROW(check_permutation({0, 1}, 3), std::logic_error);
    EXPECT_THROW(check_permutation({0, 1, 3}, 3), std::logic_error);
}

TEST(Context, HopsAndServiceLookups) {
    const auto ctx = context();
    EXPECT_EQ(ctx.hops(spanning(0, 4, 1)), 4);
    EXPECT_DOUBLE_EQ(ctx.mean_service(2), 2.0);
    EXPECT_THROW(ctx.mean_service(0), std::out_of_range);
    EXPECT_THROW(ctx.mean_service(6), std::out_of_range);
}

TEST(Fifo, IsIdentity) {
    const std::vector<Request> r{spanning(4, 3), spanning(5, 1), spanning(6, 2)};
    EXPECT_EQ(fifo_order(r), (Order{0, 1, 2}));
    EXPECT_TRUE(fifo_order(std::vector<Request>{}).empty());
}

TEST(Greedy, ShortestFirst) {
    const std::vector<Request> r{spanning(0, 3), spanning(1, 1), spanning(2, 2)};
    EXPECT_EQ(greedy_order(r, context()), (Order{1, 2, 0}));
}

TEST(Greedy, TiesByRequestId) {
    const std::vector<Request> r{spanning(9, 2), spanning(3, 2, 2), spanning(5, 1)};
    EXPECT_EQ(greedy_order(r, context()), (Order{2, 1, 0}));
}

TEST(Greedy, OrderIsIndependentOfInputPermutation) {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Request> r;
        for (RequestId id = 0; id < 5; ++id) {
            r.push_back(spanning(id, 1 + static_cast<int>(rng.uniform_index(5))));
        }
        auto ids_in_order = [&](const std::vector<Request>& reqs) {
            std::vector<RequestId> ids;
            for (const std::size_t i : greedy_order(reqs, context())) ids.push_back(reqs[i].id);
            return ids;
        };
        const auto base = ids_in_order(r);
        std::vector<Request> shuffled = r;
        std::reverse(shuffled.begin(), shuffled.end());
        EXPECT_EQ(ids_in_order(shuffled), base);
    }
}

TEST(Greedy, MinimizesTotalDelayForKnownDurations) {
    // Service time proportional to hops: shortest-first is optimal, so it
    // matches the brute-force minimum and never loses to FIFO.
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Request> r;
        std::vector<double> durations;
        for (RequestId id = 0; id < 4; ++id) {
            const int h = 1 + static_cast<int>(rng.uniform_index(5));
            r.push_back(spanning(id, h));
            durations.push_back(1000.0 * h);
        }
        const Order g = greedy_order(r, context());
        const Order f = fifo_order(r);
        const double greedy_total = deepq::total_delay(durations, g);
        EXPECT_LE(greedy_total, deepq::total_delay(durations, f));
        Order perm{0, 1, 2, 3};
        double best = greedy_total;
        do {
            best = std::min(best, deepq::total_delay(durations, perm));
        } while (std::next_permutation(perm.begin(), perm.end()));
        EXPECT_DOUBLE_EQ(greedy_total, best);
    }
}

TEST(ProportionalFair, FirstPickProbabilityMatchesWeights) {
    // Weights 10 and 30: the 3-hop request goes first with probability 0.75.
    const auto ctx = context({10, 20, 30, 40, 50});
    const std::vector<Request> r{spanning(0, 1), spanning(1, 3)};
    Rng rng(99);
    constexpr int n = 100'000;
    int long_first = 0;
    for (int i = 0; i < n; ++i) {
        const Order o = proportional_fair_order(r, ctx, rng);
        ASSERT_TRUE(is_permutation_of(o, 2));
        long_first += o[0] == 1 ? 1 : 0;
    }
    EXPECT_NEAR(static_cast<double>(long_first) / n, 0.75, 3 * std::sqrt(0.75 * 0.25 / n));
}

TEST(ProportionalFair, EqualWeightsGiveUniformPermutations) {
    const std::vector<Request> r{spanning(0, 2), spanning(1, 2, 1), spanning(2, 2, 3)};
    Rng rng(123);
    constexpr int n = 60'000;
    std::map<Order, int> counts;
    for (int i = 0; i < n; ++i) {
        ++counts[proportional_fair_order(r, context(), rng)];
    }
    ASSERT_EQ(counts.size(), 6u);
    const double expected = n / 6.0;
    double chi2 = 0.0;
    for (const auto& [o, c] : counts) {
        chi2 += (c - expected) * (c - expected) / expected;
    }
    // 5 degrees of freedom; 0.999 quantile is about 20.5.
    EXPECT_LT(chi2, 20.5);
}

TEST(ProportionalFair, ThreeWayOrderProbabilities) {
    // Weights 1, 2, 3 (hops 1, 2, 3). P(order 2,1,0) = 3/6 * 2/3 = 1/3.
    const std::vector<Request> r{spanning(0, 1), spanning(1, 2), spanning(2, 3)};
    Rng rng(8);
    constexpr int n = 60'000;
    std::map<Order, int> counts;
    for (int i = 0; i < n; ++i) {
        ++counts[proportional_fair_order(r, context(), rng)];
    }
    const std::map<Order, double> p{
        {{2, 1, 0}, 3.0 / 6 * 2.0 / 3}, {{2, 0, 1}, 3.0 / 6 * 1.0 / 3},
        {{1, 2, 0}, 2.0 / 6 * 3.0 / 4}, {{1, 0, 2}, 2.0 / 6 * 1.0 / 4},
        {{0, 2, 1}, 1.0 / 6 * 3.0 / 5}, {{0, 1, 2}, 1.0 / 6 * 2.0 / 5},
    };
    for (const auto& [o, prob] : p) {
        EXPECT_NEAR(counts[o], n * prob, 3.5 * std::sqrt(n * prob * (1 - prob)));
    }
}

TEST(ProportionalFair, DeterministicPerSeed) {
    const std::vector<Request> r{spanning(0, 1), spanning(1, 3), spanning(2, 2), spanning(3, 5)};
    ProportionalFairScheduler a(4), b(4);
    for (int i = 0; i < 50; ++i) {
        EXPECT_EQ(a.order(r, context()), b.order(r, context()));
    }
}

TEST(AllPolicies, ReturnPermutations) {
    Rng rng(2);
    ProportionalFairScheduler pf(1);
    GreedyScheduler greedy;
    FifoScheduler fifo;
    for (std::size_t k = 0; k <= 8; ++k) {
        std::vector<Request> r;
        for (RequestId id = 0; id < k; ++id) {
            r.push_back(spanning(id, 1 + static_cast<int>(rng.uniform_index(5))));
        }
        for (Scheduler* s : std::initializer_list<Scheduler*>{&pf, &greedy, &fifo}) {
            const Order o = s->order(r, context());
            EXPECT_TRUE(is_permutation_of(o, k)) << s->name() << " k=" << k;
        }
    }
}

namespace {

// A network whose output ignores the input: the bias of the output layer.
std::shared_ptr<const deepq::QNetworkModel> constant_network(int k, int v,
                                                            std::vector<double> values) {
    Rng rng(1);
    auto m = deepq::zero_like(deepq::make_q_network(k, v, {4}, rng));
    for (int i = 0; i < k; ++i) {
        m.layers.back().bias(i) = values[static_cast<std::size_t>(i)];
    }
    return std::make_shared<const deepq::QNetworkModel>(std::move(m));
}

}  // namespace

TEST(Dqn, MaskedArgmaxFollowsNetwork) {
    ModelBank bank;
    bank[3] = constant_network(3, 6, {0.2, -0.1, 0.9});
    const std::vector<Request> r{spanning(0, 1), spanning(1, 2), spanning(2, 3)};
    Rng rng(1);
    EXPECT_EQ(dqn_order(r, context(), bank, DqnBias::DelayBiased, rng), (Order{2, 0, 1}));
}

TEST(Dqn, ResolvedRowsAreZeroedBetweenPicks) {
    // Q = (2, 1.5, 3 - relu(row sum of request 0)). Request 0 goes first;
    // zeroing its row then lifts Q(2) from 1 to 3, ahead of request 1.
    Rng init(3);
    auto m = deepq::zero_like(deepq::make_q_network(3, 6, {1}, init));
    for (int c = 0; c < 12; ++c) {
        m.layers[0].weights(0, c) = 1.0;
    }
    m.layers[1].weights(2, 0) = -1.0;
    m.layers[1].bias << 2.0, 1.5, 3.0;
    ModelBank bank;
    bank[3] = std::make_shared<const deepq::QNetworkModel>(m);
    const std::vector<Request> r{spanning(0, 5), spanning(1, 1), spanning(2, 2)};
    Rng rng(1);
    EXPECT_EQ(dqn_order(r, context(), bank, DqnBias::DelayBiased, rng), (Order{0, 2, 1}));
}

TEST(Dqn, SmallSetsFallBack) {
    const ModelBank bank;
    const std::vector<Request> r{spanning(0, 4), spanning(1, 1)};
    Rng rng(1);
    EXPECT_EQ(dqn_order(r, context(), bank, DqnBias::DelayBiased, rng), (Order{1, 0}));
    // Fairness bias falls back to proportional fair: same draws, same order.
    Rng a(9), b(9);
    for (int i = 0; i < 20; ++i) {
        EXPECT_EQ(dqn_order(r, context(), bank, DqnBias::FairnessBiased, a),
                  proportional_fair_order(r, context(), b));
    }
    EXPECT_TRUE(dqn_order(std::vector<Request>{}, context(), bank, DqnBias::DelayBiased, rng).empty());
}

TEST(Dqn, MissingOrMismatchedModelThrows) {
    const std::vector<Request> r{spanning(0, 1), spanning(1, 2), spanning(2, 3)};
    Rng rng(1);
    EXPECT_THROW(dqn_order(r, context(), ModelBank{}, DqnBias::DelayBiased, rng),
                 std::invalid_argument);
    ModelBank wrong_v;
    wrong_v[3] = constant_network(3, 10, {0, 0, 0});
    EXPECT_THROW(dqn_order(r, context(), wrong_v, DqnBias::DelayBiased, rng), std::invalid_argument);
}

TEST(Factory, NamesAndErrors) {
    EXPECT_EQ(make_scheduler("fifo", 1)->name(), "fifo");
    EXPECT_EQ(make_scheduler("greedy", 1)->name(), "greedy");
    EXPECT_EQ(make_scheduler("pfair", 1)->name(), "pfair");
    EXPECT_THROW(make_scheduler("lifo", 1), std::invalid_argument);
    EXPECT_THROW(make_scheduler("dqn:delay", 1), std::invalid_argument);
    ModelBank bank;
    for (int k = 3; k <= 5; ++k) {
        bank[k] = constant_network(k, 6, std::vector<double>(static_cast<std::size_t>(k), 0.0));
    }
    EXPECT_EQ(make_scheduler("dqn:delay", 1, bank)->name(), "dqn:delay");
    EXPECT_EQ(make_scheduler("dqn:fair", 1, bank)->name(), "dqn:fair");
    EXPECT_THROW(dqn_bias("pfair"), std::invalid_argument);
    EXPECT_TRUE(is_dqn("dqn:fair"));
    EXPECT_FALSE(is_dqn("greedy"));
}
