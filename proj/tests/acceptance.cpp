// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Criteria 7-10 run the full reference setting (10,000
// slots, 10 seeds, six DQN trainings) and take tens of minutes.
//
// Usage: acceptance [work_dir] [--only N[,N...]]

#include "qsched/cli.hpp"
#include "qsched/config.hpp"
#include "qsched/deepq/mlp.hpp"
#include "qsched/deepq/reward.hpp"
#include "qsched/deepq/trainer.hpp"
#include "qsched/engine.hpp"
#include "qsched/metrics.hpp"
#include "qsched/nettopo.hpp"
#include "qsched/qlink/chain.hpp"
#include "qsched/qlink/density_matrix.hpp"
#include "qsched/qlink/lookup_table.hpp"
#include "qsched/rng.hpp"
#include "qsched/sched.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace qsched;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream ss;
    ss << std::setprecision(precision) << v;
    return ss.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- 1: quantum oracles -------------------------------------------------

Verdict quantum_oracles() {
    using namespace qlink;
    constexpr double tol = 1e-10;
    const auto t0 = Clock::now();
    double worst = 0.0;
    auto check = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };

    const PureState phi = PureState::phi_plus();
    const DensityMatrix bell = DensityMatrix::from_pure(phi);
    check(fidelity(bell, phi), 1.0);
    check(fidelity(DensityMatrix::maximally_mixed(2), phi), 0.25);
    for (const double p : {0.0, 0.1, 0.4, 0.75, 1.0}) {
        check(fidelity(depolarize(bell, 0, p), phi), 1.0 - 0.75 * p);
        check(fidelity(depolarize(bell, 1, p), phi), 1.0 - 0.75 * p);
    }
    const DensityMatrix chain = tensor(bell, bell);
    for (int i = 0; i < 4; ++i) {
        check(fidelity(swap_and_correct(chain, BsmOutcome::from_index(i)).state, phi), 1.0);
    }
    const double elapsed = seconds_since(t0);
    return {worst < tol && elapsed < 1.0,
            "max error " + fmt(worst, 3) + " (tol 1e-10), " + fmt(elapsed, 3) + " s (limit 1 s)"};
}

// ---- 2: Monte-Carlo source ----------------------------------------------

Verdict monte_carlo_source() {
    const auto t0 = Clock::now();
    constexpr int n = 100'000;
    Rng rng(derive_seed(2024, "acceptance-source"));
    const qlink::PureState phi = qlink::PureState::phi_plus();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += qlink::fidelity(qlink::bell_pair(0.9, rng), phi);
    }
    const double mean = sum / n;
    const double sigma = std::sqrt(0.9 * 0.1 / n);
    const double elapsed = seconds_since(t0);
    return {std::abs(mean - 0.9) <= 3 * sigma && elapsed < 10.0,
            "mean fidelity " + fmt(mean, 6) + " vs 0.9 +- " + fmt(3 * sigma, 3) + ", " +
                fmt(elapsed, 3) + " s (limit 10 s)"};
}

// ---- 3: Jain index --------------------------------------------------------

Verdict jain_exactness() {
    Rng rng(derive_seed(2024, "acceptance-jain"));
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> d(1 + rng.uniform_index(50));
        for (double& x : d) x = 1.0 + 1e6 * rng.uniform();
        // Pairwise form: J = sum_i sum_j d_i d_j / (n sum_i d_i^2).
        long double cross = 0.0L, squares = 0.0L;
        for (const double a : d) {
            squares += static_cast<long double>(a) * a;
            for (const double b : d) cross += static_cast<long double>(a) * b;
        }
        const double oracle = static_cast<double>(cross / (static_cast<long double>(d.size()) * squares));
        worst = std::max(worst, std::abs(metrics::jain_index(d) - oracle));
    }
    const double j_equal = metrics::jain_index(std::vector<double>(9, 42.0));
    const double j_13 = metrics::jain_index(std::vector<double>{1.0, 3.0});
    const bool ok = worst <= 1e-12 && std::abs(j_equal - 1.0) <= 1e-12 && std::abs(j_13 - 0.8) <= 1e-12;
    return {ok, "max error " + fmt(worst, 3) + " over 1000 vectors, J(equal)=" + fmt(j_equal, 15) +
                    ", J(1,3)=" + fmt(j_13, 15)};
}

// ---- 4: reward oracle -----------------------------------------------------

Verdict reward_oracle() {
    Rng rng(derive_seed(2024, "acceptance-reward"));
    int violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 3 + rng.uniform_index(3);
        std::vector<double> d(k);
        for (double& x : d) x = 1000.0 + 99'000.0 * rng.uniform();
        std::vector<std::size_t> realized(k);
        std::iota(realized.begin(), realized.end(), std::size_t{0});
        for (std::size_t i = k; i > 1; --i) std::swap(realized[i - 1], realized[rng.uniform_index(i)]);

        auto total = [&](const std::vector<std::size_t>& order) {
            double clock = 0.0, sum = 0.0;
            for (const std::size_t i : order) {
                clock += d[i];
                sum += clock;
            }
            return sum;
        };
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        double lo = total(perm), hi = lo;
        while (std::next_permutation(perm.begin(), perm.end())) {
            lo = std::min(lo, total(perm));
            hi = std::max(hi, total(perm));
        }
        std::vector<std::size_t> spt(k);
        std::iota(spt.begin(), spt.end(), std::size_t{0});
        std::sort(spt.begin(), spt.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

        const auto r = deepq::episode_reward(d, realized, 0.9, 0.1);
        const double eps = 1e-9 * hi;
        const bool ok = r.bounds.min_total <= r.cur_total + eps && r.cur_total <= r.bounds.max_total + eps &&
                        std::abs(r.bounds.min_total - lo) <= eps && std::abs(r.bounds.max_total - hi) <= eps &&
                        std::abs(r.bounds.min_total - total(spt)) <= eps &&
                        std::abs(r.cur_total - total(realized)) <= eps;
        violations += ok ? 0 : 1;
    }
    const std::vector<double> ex{10, 20, 30};
    const std::vector<std::size_t> fifo{0, 1, 2};
    const auto r = deepq::episode_reward(ex, fifo, 0.9, 0.1);
    const double expected = 0.1 * (10'000.0 / 13'800.0 - 1.0);  // -0.027536...
    const bool example_ok = std::abs(r.delay_term) <= 1e-9 && std::abs(r.reward - expected) <= 1e-9 &&
                            std::abs(r.reward - (-0.027536)) <= 1e-6;
    return {violations == 0 && example_ok,
            std::to_string(violations) + "/500 instance violations, worked example r1=" +
                fmt(r.delay_term, 3) + " reward=" + fmt(r.reward, 9)};
}

// ---- 5: gradient check ----------------------------------------------------

Verdict gradient_check() {
    const auto t0 = Clock::now();
    Rng rng(derive_seed(2024, "acceptance-gradient"));
    double worst = 0.0;
    for (int net = 0; net < 20; ++net) {
        const int k = 3 + static_cast<int>(rng.uniform_index(3));
        const int v = 10;
        auto model = deepq::make_q_network(k, v, {16, 16}, rng);
        std::vector<deepq::Transition> batch;
        for (int b = 0; b < 8; ++b) {
            deepq::StateMatrix s(k, v);
            for (int i = 0; i < k; ++i) {
                const auto src = static_cast<NodeId>(rng.uniform_index(v));
                auto dst = static_cast<NodeId>(rng.uniform_index(v - 1));
                if (dst >= src) ++dst;
                s.set_request(i, src, dst);
            }
            const int a = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k)));
            deepq::StateMatrix next = s;
            next.resolve(a);
            batch.push_back({s, a, rng.uniform() - 0.5, next, false, s.legal_mask()});
        }
        std::vector<const deepq::Transition*> ptrs;
        for (const auto& t : batch) ptrs.push_back(&t);
        std::vector<double> y(batch.size());
        for (double& t : y) t = 2.0 * rng.uniform() - 1.0;

        auto grads = deepq::td_gradient(model, ptrs, y).grads;
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
            auto probe = [&](double& param, double analytic) {
                constexpr double h = 1e-6;
                const double keep = param;
                param = keep + h;
                const double up = deepq::td_loss(model, ptrs, y);
                param = keep - h;
                const double down = deepq::td_loss(model, ptrs, y);
                param = keep;
                const double numeric = (up - down) / (2 * h);
                const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
                worst = std::max(worst, std::abs(analytic - numeric) / scale);
            };
            auto& layer = model.layers[l];
            for (Eigen::Index i = 0; i < layer.weights.size(); ++i) {
                probe(layer.weights.data()[i], grads.layers[l].weights.data()[i]);
            }
            for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
                probe(layer.bias.data()[i], grads.layers[l].bias.data()[i]);
            }
        }
    }
    const double elapsed = seconds_since(t0);
    return {worst < 1e-4 && elapsed < 30.0, "max relative error " + fmt(worst, 3) + " (limit 1e-4), " +
                                                fmt(elapsed, 3) + " s (limit 30 s)"};
}

// ---- shared reference setup for 6-10 --------------------------------------

struct Reference {
    config::RunConfig cfg;
    nettopo::Topology topology;
    qlink::LookupTable lut;
};

Reference make_reference(const fs::path& work) {
    config::RunConfig cfg;  // reference setting, medium load
    cfg.lut_path = work / "lut.json";
    cfg.output_dir = work / "out";
    nettopo::Topology topo = config::make_topology(cfg);
    std::ostringstream log;
    const auto t0 = Clock::now();
    qlink::LookupTable lut = cli::build_lut(cfg, cfg.lut_path, log);
    std::cout << "  lookup table: " << lut.max_hops << " hops x " << lut.samples_per_hop
              << " samples in " << fmt(seconds_since(t0), 3) << " s\n"
              << log.str() << std::flush;
    return {cfg, std::move(topo), std::move(lut)};
}

// ---- 6: conservation -------------------------------------------------------

Verdict engine_conservation(const Reference& ref) {
    const auto t0 = Clock::now();
    sched::FifoScheduler fifo;
    const auto result = engine::run_simulation(ref.cfg.slots, ref.topology, ref.lut,
                                               ref.cfg.arrival_model(0), fifo, ref.cfg.attempts_seed(0));
    std::size_t arrivals = 0, completed = 0, dropped = 0;
    int bad_slots = 0;
    for (const auto& s : result.slots) {
        arrivals += s.arrivals;
        completed += s.completed;
        dropped += s.dropped;
        bad_slots += arrivals == completed + dropped + s.queue_length ? 0 : 1;
    }
    const bool final_ok = result.arrivals == arrivals && completed == result.completed.size() &&
                          dropped == result.dropped.size() &&
                          arrivals == completed + dropped + result.unresolved.size();
    const double elapsed = seconds_since(t0);
    return {bad_slots == 0 && final_ok && result.slots.size() == 10'000 && elapsed < 60.0,
            std::to_string(bad_slots) + " violating slots of " + std::to_string(result.slots.size()) +
                "; arrivals=" + std::to_string(arrivals) + " completed=" + std::to_string(completed) +
                " dropped=" + std::to_string(dropped) +
                " unresolved=" + std::to_string(result.unresolved.size()) + ", " + fmt(elapsed, 3) +
                " s (limit 60 s)"};
}

// ---- 7: baseline ordering --------------------------------------------------

std::size_t index_of(const cli::Comparison& cmp, const std::string& name) {
    return static_cast<std::size_t>(
        std::find(cmp.schedulers.begin(), cmp.schedulers.end(), name) - cmp.schedulers.begin());
}

Verdict baseline_ordering(const Reference& ref, const fs::path& work) {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (const char* load : {"medium", "low"}) {
        config::RunConfig cfg = ref.cfg;
        cfg.slots.slot_interval = config::load_preset_interval(load);
        std::ostringstream log;
        const auto cmp = cli::compare(cfg, {"fifo", "greedy", "pfair"}, 10, work / ("baseline_" + std::string(load)), log);
        const auto f = index_of(cmp, "fifo"), g = index_of(cmp, "greedy"), p = index_of(cmp, "pfair");
        int jain_order = 0, delay_order = 0;
        for (const auto& run : cmp.runs) {
            jain_order += run[p].jain > run[f].jain && run[f].jain > run[g].jain ? 1 : 0;
            delay_order += run[g].mean_delay <= run[f].mean_delay ? 1 : 0;
        }
        ok = ok && jain_order >= 8 && delay_order >= 8;
        detail += std::string(load) + ": Jain order " + std::to_string(jain_order) + "/10, delay order " +
                  std::to_string(delay_order) + "/10 (J fifo/greedy/pfair " + fmt(cmp.mean[f].jain) + "/" +
                  fmt(cmp.mean[g].jain) + "/" + fmt(cmp.mean[p].jain) + "); ";
        std::cout << "  " << load << " load\n" << log.str() << std::flush;
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 15 * 60.0;
    return {ok, detail + fmt(elapsed, 3) + " s (limit 900 s)"};
}

// ---- 8-10: DQN --------------------------------------------------------------

struct Bank {
    std::map<int, double> train_seconds;
    std::vector<deepq::EpochStats> k5_curve;
};

Bank train_bank(config::RunConfig& cfg, const std::string& name, double c_d, double c_j,
                const fs::path& work) {
    Bank bank;
    for (int k = 3; k <= 5; ++k) {
        const fs::path path = work / (cli::file_safe(name) + "_k" + std::to_string(k) + ".json");
        const auto t0 = Clock::now();
        std::ostringstream log;
        const auto result = cli::train_model(cfg, k, c_d, c_j, path, log);
        bank.train_seconds[k] = seconds_since(t0);
        std::cout << "  " << name << " " << log.str() << std::flush;
        cfg.models[name][k] = path;
        if (k == 5) {
            bank.k5_curve = result.curve;
        }
    }
    return bank;
}

std::string training_times(const Bank& bank, bool& within_budget) {
    std::string s = "training s per k:";
    for (const auto& [k, t] : bank.train_seconds) {
        s += " " + std::to_string(k) + "=" + fmt(t, 4);
        within_budget = within_budget && t < 30 * 60.0;
    }
    return s;
}

Verdict delay_biased(config::RunConfig cfg, const Bank& bank, const fs::path& work) {
    std::ostringstream log;
    const auto cmp = cli::compare(cfg, {"fifo", "greedy", "pfair", "dqn:delay"}, 10, work / "dqn_delay", log);
    std::cout << log.str() << std::flush;
    const auto g = index_of(cmp, "greedy"), q = index_of(cmp, "dqn:delay");
    int gain_ok = 0;
    std::string gains;
    for (const auto& run : cmp.runs) {
        std::vector<double> js;
        for (const auto& s : run) js.push_back(s.jain);
        const double gain = metrics::normalized_gain(run[q].jain, run[g].jain, js);
        gain_ok += gain >= 0.05 ? 1 : 0;
        gains += " " + fmt(gain, 3);
    }
    const double rel_delay = (cmp.mean[q].mean_delay - cmp.mean[g].mean_delay) / cmp.mean[g].mean_delay;
    bool budget = true;
    const std::string times = training_times(bank, budget);
    return {std::abs(rel_delay) <= 0.10 && gain_ok >= 7 && budget,
            "delay vs greedy " + fmt(100 * rel_delay, 3) + "% (limit 10%), gain >= 0.05 in " +
                std::to_string(gain_ok) + "/10 (gains" + gains + "); " + times};
}

Verdict fairness_biased(config::RunConfig cfg, const Bank& bank, const fs::path& work) {
    std::ostringstream log;
    const auto cmp = cli::compare(cfg, {"fifo", "greedy", "pfair", "dqn:fair"}, 10, work / "dqn_fair", log);
    std::cout << log.str() << std::flush;
    const auto p = index_of(cmp, "pfair"), q = index_of(cmp, "dqn:fair");
    int fairer = 0;
    for (const auto& run : cmp.runs) {
        fairer += run[q].jain >= run[p].jain ? 1 : 0;
    }
    const double rel_delay = (cmp.mean[q].mean_delay - cmp.mean[p].mean_delay) / cmp.mean[p].mean_delay;
    bool budget = true;
    const std::string times = training_times(bank, budget);
    return {fairer >= 7 && std::abs(rel_delay) <= 0.15 && budget,
            "J_dqn >= J_pfair in " + std::to_string(fairer) + "/10 (mean J " + fmt(cmp.mean[q].jain) +
                " vs " + fmt(cmp.mean[p].jain) + "), delay vs pfair " + fmt(100 * rel_delay, 3) +
                "% (limit 15%); " + times};
}

Verdict training_curve(const std::vector<deepq::EpochStats>& curve) {
    const std::size_t n = curve.size();
    const std::size_t q = n / 4;
    if (q == 0) {
        return {false, "curve too short"};
    }
    auto mean_of = [&](std::size_t from, std::size_t to, auto field) {
        double s = 0.0;
        for (std::size_t i = from; i < to; ++i) s += field(curve[i]);
        return s / static_cast<double>(to - from);
    };
    const auto reward = [](const deepq::EpochStats& e) { return e.mean_reward; };
    const auto loss = [](const deepq::EpochStats& e) { return e.mean_loss; };
    const double r_first = mean_of(0, q, reward), r_last = mean_of(n - q, n, reward);
    const double l_first = mean_of(0, q, loss), l_last = mean_of(n - q, n, loss);
    return {r_last > r_first && l_last < l_first,
            "reward first/last quartile " + fmt(r_first) + " -> " + fmt(r_last) + ", loss " + fmt(l_first) +
                " -> " + fmt(l_last)};
}

// ---- 11: determinism ------------------------------------------------------

Verdict determinism(const fs::path& work) {
    const fs::path root = work / "determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    config::RunConfig cfg;
    cfg.seed = 11;
    cfg.slots.num_slots = 500;
    cfg.lut_samples_per_hop = 1000;
    cfg.train.epochs = 3;
    cfg.train.episodes_per_epoch = 30;
    cfg.lut_path = root / "lut.json";
    config::save_run_config(cfg, root / "config.json");

    const std::string exe = QSCHED_CLI_PATH;
    const std::string c = " -c " + (root / "config.json").string();
    std::vector<std::string> failures;
    auto run = [&](const std::string& args, const fs::path& log) {
        const std::string cmd = exe + " " + args + " > " + log.string() + " 2>&1";
        if (std::system(cmd.c_str()) != 0) failures.push_back("'" + args + "' exited non-zero");
    };
    auto same = [&](const fs::path& a, const fs::path& b) {
        if (!fs::exists(a) || slurp(a) != slurp(b)) failures.push_back(a.filename().string() + " differs");
    };
    auto same_dir = [&](const fs::path& a, const fs::path& b) {
        if (!fs::is_directory(a)) {
            failures.push_back(a.string() + " missing");
            return;
        }
        for (const auto& e : fs::directory_iterator(a)) same(e.path(), b / e.path().filename());
    };

    for (const char* rep : {"1", "2"}) {
        const fs::path d = root / rep;
        fs::create_directories(d);
        run("build-lut" + c + " -o " + (d / "lut.json").string(), d / "lut.log");
        // Later steps read the shared table.
        if (std::string(rep) == "1") fs::copy_file(d / "lut.json", cfg.lut_path);
        for (int k = 3; k <= 5; ++k) {
            run("train" + c + " -k " + std::to_string(k) + " -o " + (d / ("m" + std::to_string(k) + ".json")).string(),
                d / "train.log");
        }
        std::string models;
        for (int k = 3; k <= 5; ++k) {
            models += " --model dqn:delay:" + std::to_string(k) + "=" + (root / "1" / ("m" + std::to_string(k) + ".json")).string();
        }
        run("simulate" + c + " --scheduler pfair -o " + (d / "sim").string(), d / "sim.log");
        run("compare" + c + models + " -s fifo,greedy,pfair,dqn:delay -r 3 -o " + (d / "cmp").string(),
            d / "cmp.log");
        run("report " + (d / "cmp").string(), d / "report.md");
    }
    const fs::path a = root / "1", b = root / "2";
    for (const char* f : {"lut.json", "m3.json", "m4.json", "m5.json", "m3.curve.csv", "m4.curve.csv",
                          "m5.curve.csv", "report.md"}) {
        same(a / f, b / f);
    }
    same_dir(a / "sim", b / "sim");
    same_dir(a / "cmp", b / "cmp");
    std::string detail = failures.empty() ? "build-lut, train, simulate, compare, report outputs byte-identical"
                                          : failures.front();
    if (failures.size() > 1) detail += " (+" + std::to_string(failures.size() - 1) + " more)";
    return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
    fs::path work = fs::current_path() / "acceptance_work";
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            for (std::string n; std::getline(ss, n, ',');) only.insert(std::stoi(n));
        } else {
            work = arg;
        }
    }
    fs::create_directories(work);
    auto wanted = [&](int n) { return only.empty() || only.contains(n); };

    std::vector<std::pair<int, Verdict>> verdicts;
    auto record = [&](int n, const std::function<Verdict()>& f) {
        if (!wanted(n)) return;
        std::cout << "running criterion " << n << "\n" << std::flush;
        Verdict v;
        try {
            v = f();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << n << ": " << (v.pass ? "PASS" : "FAIL") << " | " << v.detail << "\n"
                  << std::flush;
        verdicts.emplace_back(n, v);
    };

    record(1, quantum_oracles);
    record(2, monte_carlo_source);
    record(3, jain_exactness);
    record(4, reward_oracle);
    record(5, gradient_check);

    if (wanted(6) || wanted(7) || wanted(8) || wanted(9) || wanted(10)) {
        const Reference ref = make_reference(work);
        record(6, [&] { return engine_conservation(ref); });
        record(7, [&] { return baseline_ordering(ref, work); });
        if (wanted(8) || wanted(9) || wanted(10)) {
            config::RunConfig delay_cfg = ref.cfg;
            Bank delay_bank;
            try {
                delay_bank = train_bank(delay_cfg, "dqn:delay", 0.9, 0.1, work);
            } catch (const std::exception& e) {
                std::cout << "delay-biased training failed: " << e.what() << "\n";
            }
            record(8, [&] { return delay_biased(delay_cfg, delay_bank, work); });
            record(10, [&] { return training_curve(delay_bank.k5_curve); });
            if (wanted(9)) {
                config::RunConfig fair_cfg = ref.cfg;
                Bank fair_bank;
                try {
                    fair_bank = train_bank(fair_cfg, "dqn:fair", 0.15, 0.85, work);
                } catch (const std::exception& e) {
                    std::cout << "fairness-biased training failed: " << e.what() << "\n";
                }
                record(9, [&] { return fairness_biased(fair_cfg, fair_bank, work); });
            }
        }
    }
    record(11, [&] { return determinism(work); });

    std::sort(verdicts.begin(), verdicts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::cout << "\nsummary\n";
    int failed = 0;
    for (const auto& [n, v] : verdicts) {
        std::cout << "criterion " << n << ": " << (v.pass ? "PASS" : "FAIL") << "\n";
        failed += v.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
