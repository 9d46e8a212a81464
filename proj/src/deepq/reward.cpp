#include "qsched/deepq/reward.hpp"

#include "qsched/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qsched::deepq {

namespace {

void check_order(std::span<const std::size_t> order, std::size_t n) {
    if (order.size() != n) {
        throw std::invalid_argument("service order length does not match request count");
    }
    std::vector<bool> seen(n, false);
    for (const std::size_t i : order) {
        if (i >= n || seen[i]) {
            throw std::invalid_argument("service order is not a permutation");
        }
        seen[i] = true;
    }
}

void check_durations(std::span<const double> durations) {
    if (durations.empty()) {
        throw std::invalid_argument("no service durations");
    }
    for (const double d : durations) {
        if (!(d > 0.0)) {
            throw std::invalid_argument("service durations must be positive");
        }
    }
}

}  // namespace

std::vector<double> sequential_delays(std::span<const double> durations,
                                      std::span<const std::size_t> order) {
    check_order(order, durations.size());
    std::vector<double> delays(durations.size());
    double clock = 0.0;
    for (const std::size_t i : order) {
        clock += durations[i];
        delays[i] = clock;
    }
    return delays;
}

double total_delay(std::span<const double> durations, std::span<const std::size_t> order) {
    const auto delays = sequential_delays(durations, order);
    return std::accumulate(delays.begin(), delays.end(), 0.0);
}

DelayBounds enumerate_delay_bounds(std::span<const double> durations) {
    check_durations(durations);
    if (durations.size() > 8) {
        throw std::invalid_argument("enumeration limited to 8 requests");
    }
    std::vector<std::size_t> perm(durations.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    DelayBounds b{total_delay(durations, perm), total_delay(durations, perm)};
    while (std::next_permutation(perm.begin(), perm.end())) {
        const double t = total_delay(durations, perm);
        b.min_total = std::min(b.min_total, t);
        b.max_total = std::max(b.max_total, t);
    }
    return b;
}

EpisodeReward episode_reward(std::span<const double> durations,
                             std::span<const std::size_t> realized_order, double c_d, double c_j) {
    check_durations(durations);
    const auto delays = sequential_delays(durations, realized_order);
    EpisodeReward r;
    r.cur_total = std::accumulate(delays.begin(), delays.end(), 0.0);
    r.bounds = enumerate_delay_bounds(durations);
    r.jain = metrics::jain_index(delays);
    r.delay_term = (r.bounds.min_total - r.cur_total) / r.bounds.max_total;
    r.fairness_term = r.jain - 1.0;
    r.reward = c_d * r.delay_term + c_j * r.fairness_term;
    return r;
}

}  // namespace qsched::deepq
