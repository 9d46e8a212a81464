#pragma once

#include "qsched/common.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace qsched::engine {
struct SimulationResult;
}

namespace qsched::metrics {

// (sum d)^2 / (n * sum d^2). Requires a non-empty list of positive values.
double jain_index(std::span<const double> delays);

struct CdfPoint {
    double delay = 0.0;
    double fraction = 0.0;  // share of samples <= delay

    bool operator==(const CdfPoint&) const = default;
};

// Empirical CDF with one point per distinct value, ascending.
std::vector<CdfPoint> delay_cdf(std::span<const double> delays);

// Smallest delay whose cumulative fraction reaches q.
double cdf_quantile(const std::vector<CdfPoint>& cdf, double q);

// (j_a - j_b) / (max(j_all) - min(j_all)).
double normalized_gain(double j_a, double j_b, std::span<const double> j_all);

// Completed requests only; dropped and unresolved are counted separately.
struct RunMetrics {
    std::vector<double> delays;  // ns
    double jain = 0.0;
    double mean_delay = 0.0;
    std::size_t completed_count = 0;
    std::size_t drop_count = 0;
    std::size_t unresolved_count = 0;
    std::size_t arrivals = 0;
    std::vector<CdfPoint> cdf;

    double drop_rate() const;
};

RunMetrics compute_run_metrics(const engine::SimulationResult& result);

nlohmann::json summary_json(const RunMetrics& m);
void write_delays_csv(const RunMetrics& m, std::ostream& out);
void write_cdf_csv(const std::vector<CdfPoint>& cdf, std::ostream& out);

}  // namespace qsched::metrics
