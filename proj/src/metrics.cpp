#include "qsched/metrics.hpp"

#include "qsched/engine.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace qsched::metrics {

double jain_index(std::span<const double> delays) {
    if (delays.empty()) {
        throw std::invalid_argument("jain_index: empty input");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const double d : delays) {
        if (!(d > 0.0)) {
            throw std::invalid_argument("jain_index: values must be positive");
        }
        sum += d;
        sum_sq += d * d;
    }
    return (sum * sum) / (static_cast<double>(delays.size()) * sum_sq);
}

std::vector<CdfPoint> delay_cdf(std::span<const double> delays) {
    if (delays.empty()) {
        throw std::invalid_argument("delay_cdf: empty input");
    }
    std::vector<double> sorted(delays.begin(), delays.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    std::vector<CdfPoint> cdf;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) {
            continue;
        }
        cdf.push_back({sorted[i], static_cast<double>(i + 1) / n});
    }
    cdf.back().fraction = 1.0;
    return cdf;
}

double cdf_quantile(const std::vector<CdfPoint>& cdf, double q) {
    if (cdf.empty()) {
        throw std::invalid_argument("cdf_quantile: empty cdf");
    }
    for (const CdfPoint& p : cdf) {
        if (p.fraction >= q) {
            return p.delay;
        }
    }
    return cdf.back().delay;
}

double normalized_gain(double j_a, double j_b, std::span<const double> j_all) {
    if (j_all.empty()) {
        throw std::invalid_argument("normalized_gain: empty comparison set");
    }
    const auto [lo, hi] = std::minmax_element(j_all.begin(), j_all.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) {
        throw std::invalid_argument("normalized_gain: comparison set has no spread");
    }
    return (j_a - j_b) / range;
}

double RunMetrics::drop_rate() const {
    const std::size_t resolved = completed_count + drop_count;
    return resolved == 0 ? 0.0 : static_cast<double>(drop_count) / static_cast<double>(resolved);
}

RunMetrics compute_run_metrics(const engine::SimulationResult& result) {
    RunMetrics m;
    m.delays.reserve(result.completed.size());
    for (const auto& r : result.completed) {
        m.delays.push_back(static_cast<double>(r.delay()));
    }
    m.completed_count = result.completed.size();
    m.drop_count = result.dropped.size();
    m.unresolved_count = result.unresolved.size();
    m.arrivals = result.arrivals;
    if (!m.delays.empty()) {
        m.jain = jain_index(m.delays);
        double sum = 0.0;
        for (const double d : m.delays) {
            sum += d;
        }
        m.mean_delay = sum / static_cast<double>(m.delays.size());
        m.cdf = delay_cdf(m.delays);
    }
    return m;
}

nlohmann::json summary_json(const RunMetrics& m) {
    nlohmann::json j = {
        {"arrivals", m.arrivals},
        {"completed", m.completed_count},
        {"dropped", m.drop_count},
        {"unresolved", m.unresolved_count},
        {"drop_rate", m.drop_rate()},
        {"mean_delay_ns", m.mean_delay},
        {"jain", m.jain},
    };
    if (!m.cdf.empty()) {
        j["median_delay_ns"] = cdf_quantile(m.cdf, 0.5);
        j["p90_delay_ns"] = cdf_quantile(m.cdf, 0.9);
        j["max_delay_ns"] = m.cdf.back().delay;
    }
    return j;
}

void write_delays_csv(const RunMetrics& m, std::ostream& out) {
    out << "delay_ns\n";
    for (const double d : m.delays) {
        out << static_cast<long long>(std::llround(d)) << '\n';
    }
}

void write_cdf_csv(const std::vector<CdfPoint>& cdf, std::ostream& out) {
    out << "delay_ns,fraction\n";
    out << std::setprecision(12);
    for (const CdfPoint& p : cdf) {
        out << static_cast<long long>(std::llround(p.delay)) << ',' << p.fraction << '\n';
    }
}

}  // namespace qsched::metrics
