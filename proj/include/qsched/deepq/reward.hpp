#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qsched::deepq {

// Per-request delays under sequential service: the i-th served request
// waits for everything before it plus its own duration. Indexed like
// `durations`, not by service position.
std::vector<double> sequential_delays(std::span<const double> durations,
                                      std::span<const std::size_t> order);

double total_delay(std::span<const double> durations, std::span<const std::size_t> order);

struct DelayBounds {
    double min_total = 0.0;
    double max_total = 0.0;
};

// Minimum and maximum total delay over all k! service orders, by
// enumeration. Limited to k <= 8.
DelayBounds enumerate_delay_bounds(std::span<const double> durations);

struct EpisodeReward {
    double cur_total = 0.0;
    DelayBounds bounds;
    double jain = 0.0;
    double delay_term = 0.0;     // (min - cur) / max, in [(min - max)/max, 0]
    double fairness_term = 0.0;  // J - 1, in (-1, 0]
    double reward = 0.0;         // c_d * delay_term + c_j * fairness_term
};

EpisodeReward episode_reward(std::span<const double> durations,
                             std::span<const std::size_t> realized_order, double c_d, double c_j);

}  // namespace qsched::deepq
