#include "qsched/cli.hpp"

#include "qsched/engine.hpp"
#include "qsched/nettopo.hpp"
#include "qsched/rng.hpp"
#include "qsched/traffic.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qsched::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << std::setprecision(17);
    return out;
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

int lut_hops(const config::RunConfig& cfg, const nettopo::Topology& topology) {
    return cfg.lut_max_hops > 0 ? cfg.lut_max_hops : topology.diameter();
}

RunSummary summarize_run(const std::string& name, std::uint64_t trace_hash,
                         const metrics::RunMetrics& m) {
    return {name,        trace_hash, m.arrivals, m.completed_count, m.drop_count,
            m.unresolved_count, m.mean_delay, m.jain, m.drop_rate()};
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    return cells;
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (!line.empty()) {
            rows.push_back(split_csv_line(line));
        }
    }
    return rows;
}

}  // namespace

std::string file_safe(const std::string& scheduler) {
    std::string s = scheduler;
    std::replace(s.begin(), s.end(), ':', '_');
    return s;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

qlink::LookupTable build_lut(const config::RunConfig& cfg, const fs::path& out, std::ostream& log) {
    const nettopo::Topology topology = config::make_topology(cfg);
    const int hops = lut_hops(cfg, topology);
    if (hops < topology.diameter()) {
        throw std::invalid_argument("lut.max_hops is below the topology diameter");
    }
    const qlink::LookupTable lut = qlink::build_lookup_table(
        hops, cfg.lut_samples_per_hop, cfg.noise, cfg.timing, cfg.lut_seed(), cfg.workers);
    if (out.has_parent_path()) {
        fs::create_directories(out.parent_path());
    }
    qlink::save(lut, out);
    log << "hops,mean_fidelity,mean_duration_ns,success_fraction\n" << std::setprecision(6);
    for (const auto& s : qlink::summarize(lut, cfg.slots.fidelity_threshold)) {
        log << s.hops << ',' << s.mean_fidelity << ',' << s.mean_duration << ','
            << s.success_fraction << '\n';
    }
    return lut;
}

fs::path curve_path_for(const fs::path& model_out) {
    fs::path p = model_out;
    p.replace_filename(model_out.stem().string() + ".curve.csv");
    return p;
}

deepq::TrainResult train_model(const config::RunConfig& cfg, int k, double c_d, double c_j,
                               const fs::path& model_out, std::ostream& log) {
    if (k < 3 || k > 5) {
        throw std::invalid_argument("train: k must be 3, 4 or 5");
    }
    const nettopo::Topology topology = config::make_topology(cfg);
    const qlink::LookupTable lut = config::load_checked_lut(cfg, topology);

    deepq::TrainConfig tc = cfg.train;
    tc.k = k;
    tc.c_d = c_d;
    tc.c_j = c_j;
    tc.seed = cfg.train_seed(k);
    tc.validate();

    const auto sampler = deepq::make_lut_episode_sampler(topology, lut, cfg.slots, k);
    deepq::TrainResult result = deepq::train(sampler, topology.node_count(), tc);

    if (model_out.has_parent_path()) {
        fs::create_directories(model_out.parent_path());
    }
    deepq::save_model(result, model_out);
    auto curve = open_out(curve_path_for(model_out));
    deepq::write_curve_csv(result.curve, curve);
    if (!result.curve.empty()) {
        const auto& last = result.curve.back();
        log << "trained k=" << k << " epochs=" << result.curve.size()
            << " final_loss=" << last.mean_loss << " final_reward=" << last.mean_reward << '\n';
    }
    return result;
}

sched::ModelBank load_model_bank(const config::RunConfig& cfg, const std::string& scheduler) {
    sched::ModelBank bank;
    if (!sched::is_dqn(scheduler)) {
        return bank;
    }
    const auto it = cfg.models.find(scheduler);
    if (it == cfg.models.end()) {
        throw std::runtime_error("no models configured for scheduler '" + scheduler + "'");
    }
    for (const auto& [k, path] : it->second) {
        if (!fs::exists(path)) {
            throw std::runtime_error("model file " + path.string() + " not found");
        }
        auto model = std::make_shared<deepq::QNetworkModel>(deepq::load_model(path));
        if (model->k != k) {
            throw std::runtime_error("model " + path.string() + " was trained for k = " +
                                     std::to_string(model->k));
        }
        bank[k] = std::move(model);
    }
    return bank;
}

metrics::RunMetrics simulate(const config::RunConfig& cfg, const fs::path& out_dir,
                             std::ostream& log) {
    const nettopo::Topology topology = config::make_topology(cfg);
    const qlink::LookupTable lut = config::load_checked_lut(cfg, topology);
    const sched::ModelBank bank = load_model_bank(cfg, cfg.scheduler);
    auto scheduler = sched::make_scheduler(cfg.scheduler, cfg.scheduler_seed(0), bank);
    for (const auto& [k, model] : bank) {
        if (model->node_count != topology.node_count()) {
            throw std::runtime_error("model for k = " + std::to_string(k) +
                                     " does not match the topology size");
        }
    }

    const traffic::Trace trace = traffic::generate_trace(
        cfg.arrival_model(0), topology.node_count(), cfg.slots.num_slots, cfg.slots.slot_interval);
    const engine::SimulationResult result =
        engine::run_simulation(cfg.slots, topology, lut, trace, *scheduler, cfg.attempts_seed(0));
    const metrics::RunMetrics m = metrics::compute_run_metrics(result);

    fs::create_directories(out_dir);
    config::save_run_config(cfg, out_dir / "config.json");
    nettopo::save(topology, config::effective_ws_params(cfg), out_dir / "topology.json");
    {
        auto out = open_out(out_dir / "requests.jsonl");
        engine::write_requests_jsonl(result, out);
    }
    write_json(out_dir / "metrics.json", {{"version", kOutputVersion},
                                          {"scheduler", cfg.scheduler},
                                          {"seed", cfg.seed},
                                          {"seeds",
                                           {{"topology", cfg.topology_seed()},
                                            {"lut", cfg.lut_seed()},
                                            {"arrivals", cfg.arrivals_seed(0)},
                                            {"attempts", cfg.attempts_seed(0)},
                                            {"scheduler", cfg.scheduler_seed(0)}}},
                                          {"trace_hash", hex64(trace.hash())},
                                          {"metrics", metrics::summary_json(m)}});
    {
        auto out = open_out(out_dir / "delays.csv");
        metrics::write_delays_csv(m, out);
    }
    {
        auto out = open_out(out_dir / "cdf.csv");
        metrics::write_cdf_csv(m.cdf, out);
    }
    log << cfg.scheduler << ": completed=" << m.completed_count << " dropped=" << m.drop_count
        << " unresolved=" << m.unresolved_count << " mean_delay_ns=" << m.mean_delay
        << " jain=" << m.jain << '\n';
    return m;
}

Comparison compare(const config::RunConfig& cfg, const std::vector<std::string>& schedulers,
                   int replicates, const fs::path& out_dir, std::ostream& log) {
    if (replicates < 1) {
        throw std::invalid_argument("compare: replicates must be at least 1");
    }
    if (schedulers.empty()) {
        throw std::invalid_argument("compare: no schedulers given");
    }
    for (std::size_t i = 0; i < schedulers.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (schedulers[i] == schedulers[j]) {
                throw std::invalid_argument("compare: scheduler '" + schedulers[i] + "' listed twice");
            }
        }
    }

    const nettopo::Topology topology = config::make_topology(cfg);
    const qlink::LookupTable lut = config::load_checked_lut(cfg, topology);
    std::map<std::string, sched::ModelBank> banks;
    for (const auto& name : schedulers) {
        banks[name] = load_model_bank(cfg, name);
        // Fail on bad names before any work starts.
        sched::make_scheduler(name, 0, banks[name]);
    }

    const auto n_rep = static_cast<std::size_t>(replicates);
    const std::size_t n_sched = schedulers.size();
    Comparison cmp;
    cmp.schedulers = schedulers;
    cmp.trace_hashes.resize(n_rep);
    cmp.runs.assign(n_rep, std::vector<RunSummary>(n_sched));
    std::vector<std::vector<std::vector<double>>> delays(n_rep, std::vector<std::vector<double>>(n_sched));

    const auto run_replicate = [&](std::size_t r) {
        const traffic::Trace trace =
            traffic::generate_trace(cfg.arrival_model(r), topology.node_count(),
                                    cfg.slots.num_slots, cfg.slots.slot_interval);
        cmp.trace_hashes[r] = trace.hash();
        for (std::size_t s = 0; s < n_sched; ++s) {
            auto scheduler = sched::make_scheduler(schedulers[s], cfg.scheduler_seed(r),
                                                   banks.at(schedulers[s]));
            const auto result = engine::run_simulation(cfg.slots, topology, lut, trace, *scheduler,
                                                       cfg.attempts_seed(r));
            metrics::RunMetrics m = metrics::compute_run_metrics(result);
            cmp.runs[r][s] = summarize_run(schedulers[s], trace.hash(), m);
            delays[r][s] = std::move(m.delays);
        }
    };

    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), n_rep);
    if (workers <= 1) {
        for (std::size_t r = 0; r < n_rep; ++r) {
            run_replicate(r);
        }
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t r = w; r < n_rep; r += workers) {
                            run_replicate(r);
                        }
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    // Merge, single threaded and in replicate order.
    cmp.mean.resize(n_sched);
    cmp.pooled_delays.resize(n_sched);
    for (std::size_t s = 0; s < n_sched; ++s) {
        RunSummary& avg = cmp.mean[s];
        avg.scheduler = schedulers[s];
        for (std::size_t r = 0; r < n_rep; ++r) {
            const RunSummary& run = cmp.runs[r][s];
            avg.arrivals += run.arrivals;
            avg.completed += run.completed;
            avg.dropped += run.dropped;
            avg.unresolved += run.unresolved;
            avg.mean_delay += run.mean_delay / static_cast<double>(n_rep);
            avg.jain += run.jain / static_cast<double>(n_rep);
            avg.drop_rate += run.drop_rate / static_cast<double>(n_rep);
            auto& pooled = cmp.pooled_delays[s];
            pooled.insert(pooled.end(), delays[r][s].begin(), delays[r][s].end());
        }
    }
    if (n_sched > 1) {
        for (std::size_t a = 0; a < n_sched; ++a) {
            for (std::size_t b = 0; b < n_sched; ++b) {
                if (a == b) {
                    continue;
                }
                GainSummary g{schedulers[a], schedulers[b], 0.0, 0};
                for (std::size_t r = 0; r < n_rep; ++r) {
                    std::vector<double> js;
                    for (const RunSummary& run : cmp.runs[r]) {
                        js.push_back(run.jain);
                    }
                    const auto [lo, hi] = std::minmax_element(js.begin(), js.end());
                    const double ja = cmp.runs[r][a].jain;
                    const double jb = cmp.runs[r][b].jain;
                    // No spread means every policy scored the same.
                    const double gain = *hi > *lo ? metrics::normalized_gain(ja, jb, js) : 0.0;
                    g.mean_gain += gain / static_cast<double>(n_rep);
                    g.positive += ja > jb ? 1 : 0;
                }
                cmp.gains.push_back(g);
            }
        }
    }

    fs::create_directories(out_dir);
    config::save_run_config(cfg, out_dir / "config.json");
    nlohmann::json reps = nlohmann::json::array();
    for (std::size_t r = 0; r < n_rep; ++r) {
        nlohmann::json per_sched = nlohmann::json::object();
        for (const RunSummary& run : cmp.runs[r]) {
            per_sched[run.scheduler] = hex64(run.trace_hash);
        }
        reps.push_back({{"replicate", r},
                        {"trace_hash", hex64(cmp.trace_hashes[r])},
                        {"scheduler_trace_hashes", per_sched}});
    }
    write_json(out_dir / "metadata.json", {{"version", kOutputVersion},
                                           {"schedulers", schedulers},
                                           {"replicates", replicates},
                                           {"seed", cfg.seed},
                                           {"per_replicate", reps}});
    {
        auto out = open_out(out_dir / "comparison.csv");
        out << "scheduler,replicates,mean_delay_ns,jain,drop_rate,completed,dropped,unresolved\n";
        for (const RunSummary& s : cmp.mean) {
            out << s.scheduler << ',' << replicates << ',' << s.mean_delay << ',' << s.jain << ','
                << s.drop_rate << ',' << s.completed << ',' << s.dropped << ',' << s.unresolved
                << '\n';
        }
    }
    {
        auto out = open_out(out_dir / "replicates.csv");
        out << "replicate,scheduler,trace_hash,arrivals,completed,dropped,unresolved,"
               "mean_delay_ns,jain,drop_rate\n";
        for (std::size_t r = 0; r < n_rep; ++r) {
            for (const RunSummary& s : cmp.runs[r]) {
                out << r << ',' << s.scheduler << ',' << hex64(s.trace_hash) << ',' << s.arrivals
                    << ',' << s.completed << ',' << s.dropped << ',' << s.unresolved << ','
                    << s.mean_delay << ',' << s.jain << ',' << s.drop_rate << '\n';
            }
        }
    }
    {
        auto out = open_out(out_dir / "gains.csv");
        out << "scheduler,baseline,mean_normalized_gain,replicates_ahead\n";
        for (const GainSummary& g : cmp.gains) {
            out << g.a << ',' << g.b << ',' << g.mean_gain << ',' << g.positive << '\n';
        }
    }
    for (std::size_t s = 0; s < n_sched; ++s) {
        auto out = open_out(out_dir / ("cdf_" + file_safe(schedulers[s]) + ".csv"));
        const auto& pooled = cmp.pooled_delays[s];
        metrics::write_cdf_csv(pooled.empty() ? std::vector<metrics::CdfPoint>{}
                                              : metrics::delay_cdf(pooled),
                               out);
    }
    for (const RunSummary& s : cmp.mean) {
        log << s.scheduler << ": mean_delay_ns=" << s.mean_delay << " jain=" << s.jain
            << " drop_rate=" << s.drop_rate << '\n';
    }
    return cmp;
}

void report(const fs::path& dir, std::ostream& out) {
    std::ifstream meta_in(dir / "metadata.json");
    if (!meta_in) {
        throw std::runtime_error(dir.string() + " is not a compare output directory");
    }
    const auto meta = nlohmann::json::parse(meta_in);
    const auto rows = read_csv_rows(dir / "comparison.csv");
    const auto gains = read_csv_rows(dir / "gains.csv");

    bool paired = true;
    for (const auto& rep : meta.at("per_replicate")) {
        for (const auto& [name, hash] : rep.at("scheduler_trace_hashes").items()) {
            paired = paired && hash == rep.at("trace_hash");
        }
    }

    out << "# Scheduler comparison\n\n";
    out << "Replicates: " << meta.at("replicates").get<int>()
        << ", seed: " << meta.at("seed").get<std::uint64_t>()
        << ", paired traces: " << (paired ? "yes" : "NO") << "\n\n";
    out << "| scheduler | mean delay (ns) | Jain | drop rate | p50 (ns) | p90 (ns) |\n";
    out << "|---|---|---|---|---|---|\n";
    out << std::fixed;
    for (const auto& row : rows) {
        const auto& name = row.at(0);
        std::vector<metrics::CdfPoint> cdf;
        for (const auto& c : read_csv_rows(dir / ("cdf_" + file_safe(name) + ".csv"))) {
            cdf.push_back({std::stod(c.at(0)), std::stod(c.at(1))});
        }
        out << "| " << name << " | " << std::setprecision(1) << std::stod(row.at(2)) << " | "
            << std::setprecision(4) << std::stod(row.at(3)) << " | " << std::stod(row.at(4))
            << " | ";
        if (cdf.empty()) {
            out << "- | - |\n";
        } else {
            out << std::setprecision(1) << metrics::cdf_quantile(cdf, 0.5) << " | "
                << metrics::cdf_quantile(cdf, 0.9) << " |\n";
        }
    }
    if (!gains.empty()) {
        out << "\n| scheduler | baseline | normalized Jain gain | replicates ahead |\n";
        out << "|---|---|---|---|\n";
        for (const auto& g : gains) {
            out << "| " << g.at(0) << " | " << g.at(1) << " | " << std::setprecision(4)
                << std::stod(g.at(2)) << " | " << g.at(3) << " |\n";
        }
    }
}

}  // namespace qsched::cli
