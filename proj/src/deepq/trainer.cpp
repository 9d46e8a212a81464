#include "qsched/deepq/trainer.hpp"

#include "qsched/deepq/reward.hpp"
#include "qsched/engine.hpp"
#include "qsched/nettopo.hpp"
#include "qsched/qlink/lookup_table.hpp"
#include "qsched/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qsched::deepq {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw std::invalid_argument("replay capacity must be positive");
    }
}

void ReplayBuffer::push(Transition t) {
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
    } else {
        items_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
    if (items_.empty()) {
        throw std::logic_error("sampling from an empty replay buffer");
    }
    std::vector<const Transition*> out(batch);
    for (auto& p : out) {
        p = &items_[rng.uniform_index(items_.size())];
    }
    return out;
}

void TrainConfig::validate() const {
    if (k < 1) {
        throw std::invalid_argument("k must be positive");
    }
    if (c_d < 0.0 || c_j < 0.0) {
        throw std::invalid_argument("reward coefficients must be non-negative");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("gamma must lie in [0, 1]");
    }
    if (!(eps_start >= 0.0 && eps_start <= 1.0) || !(eps_end >= 0.0 && eps_end <= 1.0)) {
        throw std::invalid_argument("epsilon bounds must lie in [0, 1]");
    }
    if (!(lr > 0.0) || batch < 1 || replay_capacity < 1 || target_sync_period < 1 ||
        episodes_per_epoch < 1 || epochs < 0 || eps_decay_steps < 0) {
        throw std::invalid_argument("invalid training schedule");
    }
}

double TrainConfig::epsilon_at(long env_step) const {
    if (eps_decay_steps <= 0 || env_step >= eps_decay_steps) {
        return eps_end;
    }
    const double frac = static_cast<double>(env_step) / static_cast<double>(eps_decay_steps);
    return eps_start + (eps_end - eps_start) * frac;
}

nlohmann::json to_json(const TrainConfig& cfg) {
    return {
        {"k", cfg.k},
        {"c_d", cfg.c_d},
        {"c_j", cfg.c_j},
        {"gamma", cfg.gamma},
        {"lr", cfg.lr},
        {"batch", cfg.batch},
        {"replay_capacity", cfg.replay_capacity},
        {"eps_start", cfg.eps_start},
        {"eps_end", cfg.eps_end},
        {"eps_decay_steps", cfg.eps_decay_steps},
        {"target_sync_period", cfg.target_sync_period},
        {"episodes_per_epoch", cfg.episodes_per_epoch},
        {"epochs", cfg.epochs},
        {"hidden", cfg.hidden},
        {"optimizer", cfg.optimizer == OptimizerKind::Adam ? "adam" : "sgd"},
        {"seed", cfg.seed},
    };
}

TrainConfig train_config_from_json(const nlohmann::json& doc, TrainConfig cfg) {
    cfg.k = doc.value("k", cfg.k);
    cfg.c_d = doc.value("c_d", cfg.c_d);
    cfg.c_j = doc.value("c_j", cfg.c_j);
    cfg.gamma = doc.value("gamma", cfg.gamma);
    cfg.lr = doc.value("lr", cfg.lr);
    cfg.batch = doc.value("batch", cfg.batch);
    cfg.replay_capacity = doc.value("replay_capacity", cfg.replay_capacity);
    cfg.eps_start = doc.value("eps_start", cfg.eps_start);
    cfg.eps_end = doc.value("eps_end", cfg.eps_end);
    cfg.eps_decay_steps = doc.value("eps_decay_steps", cfg.eps_decay_steps);
    cfg.target_sync_period = doc.value("target_sync_period", cfg.target_sync_period);
    cfg.episodes_per_epoch = doc.value("episodes_per_epoch", cfg.episodes_per_epoch);
    cfg.epochs = doc.value("epochs", cfg.epochs);
    cfg.hidden = doc.value("hidden", cfg.hidden);
    cfg.seed = doc.value("seed", cfg.seed);
    if (doc.contains("optimizer")) {
        const auto name = doc.at("optimizer").get<std::string>();
        if (name == "adam") {
            cfg.optimizer = OptimizerKind::Adam;
        } else if (name == "sgd") {
            cfg.optimizer = OptimizerKind::Sgd;
        } else {
            throw std::invalid_argument("unknown optimizer '" + name + "'");
        }
    }
    cfg.validate();
    return cfg;
}

int masked_argmax(const Eigen::VectorXd& q, const std::vector<bool>& legal) {
    if (static_cast<Eigen::Index>(legal.size()) != q.size()) {
        throw std::invalid_argument("legal mask length does not match Q-values");
    }
    int best = -1;
    for (int i = 0; i < static_cast<int>(legal.size()); ++i) {
        if (legal[static_cast<std::size_t>(i)] && (best < 0 || q(i) > q(best))) {
            best = i;
        }
    }
    if (best < 0) {
        throw std::invalid_argument("no legal action");
    }
    return best;
}

int select_action(const QNetworkModel& model, const StateMatrix& state,
                  const std::vector<bool>& legal, double epsilon, Rng& rng) {
    const auto n_legal = static_cast<std::size_t>(std::count(legal.begin(), legal.end(), true));
    if (n_legal == 0) {
        throw std::invalid_argument("no legal action");
    }
    if (rng.uniform() < epsilon) {
        std::size_t pick = rng.uniform_index(n_legal);
        for (int i = 0; i < static_cast<int>(legal.size()); ++i) {
            if (legal[static_cast<std::size_t>(i)] && pick-- == 0) {
                return i;
            }
        }
    }
    return masked_argmax(forward(model, state), legal);
}

namespace {

Eigen::MatrixXd stack_inputs(std::span<const Transition* const> batch, bool next) {
    const StateMatrix& first = next ? batch.front()->next_state : batch.front()->state;
    Eigen::MatrixXd x(2 * first.k() * first.node_count(), static_cast<Eigen::Index>(batch.size()));
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const StateMatrix& s = next ? batch[b]->next_state : batch[b]->state;
        s.write_input(x.col(static_cast<Eigen::Index>(b)));
    }
    return x;
}

void check_batch(std::span<const Transition* const> batch) {
    if (batch.empty()) {
        throw std::invalid_argument("empty training batch");
    }
}

}  // namespace

std::vector<double> double_dqn_targets(const QNetworkModel& policy, const QNetworkModel& target,
                                       std::span<const Transition* const> batch, double gamma) {
    check_batch(batch);
    std::vector<double> y(batch.size());
    bool any_live = false;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        y[b] = batch[b]->reward;
        any_live = any_live || !batch[b]->done;
    }
    if (!any_live || gamma == 0.0) {
        return y;
    }
    const Eigen::MatrixXd next = stack_inputs(batch, true);
    const Eigen::MatrixXd q_policy = forward_batch(policy, next);
    const Eigen::MatrixXd q_target = forward_batch(target, next);
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const Transition& t = *batch[b];
        if (t.done) {
            continue;
        }
        const auto col = static_cast<Eigen::Index>(b);
        const int a = masked_argmax(q_policy.col(col), t.next_state.legal_mask());
        y[b] += gamma * q_target(a, col);
    }
    return y;
}

double td_loss(const QNetworkModel& policy, std::span<const Transition* const> batch,
               std::span<const double> targets) {
    check_batch(batch);
    const Eigen::MatrixXd q = forward_batch(policy, stack_inputs(batch, false));
    double loss = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const double err = q(batch[b]->action, static_cast<Eigen::Index>(b)) - targets[b];
        loss += err * err;
    }
    return loss / static_cast<double>(batch.size());
}

LossGradient td_gradient(const QNetworkModel& policy, std::span<const Transition* const> batch,
                         std::span<const double> targets) {
    check_batch(batch);
    ForwardCache cache;
    const Eigen::MatrixXd q = forward_batch(policy, stack_inputs(batch, false), &cache);
    Eigen::MatrixXd out_grad = Eigen::MatrixXd::Zero(q.rows(), q.cols());
    const auto n = static_cast<double>(batch.size());
    double loss = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const auto col = static_cast<Eigen::Index>(b);
        const double err = q(batch[b]->action, col) - targets[b];
        loss += err * err;
        out_grad(batch[b]->action, col) = 2.0 * err / n;
    }
    return {loss / n, backward(policy, cache, out_grad)};
}

void Optimizer::update(QNetworkModel& model, const QNetworkModel& grads, double lr) {
    if (kind_ == OptimizerKind::Adam) {
        adam_.update(model, grads, lr);
    } else {
        sgd_update(model, grads, lr);
    }
}

double train_step(QNetworkModel& policy, const QNetworkModel& target,
                  std::span<const Transition* const> batch, const TrainConfig& cfg,
                  Optimizer& optimizer) {
    const auto y = double_dqn_targets(policy, target, batch, cfg.gamma);
    LossGradient lg = td_gradient(policy, batch, y);
    optimizer.update(policy, lg.grads, cfg.lr);
    return lg.loss;
}

void sync_target(const QNetworkModel& policy, QNetworkModel& target) { target = policy; }

EpisodeSampler make_lut_episode_sampler(const nettopo::Topology& topology,
                                        const qlink::LookupTable& lut,
                                        const engine::SlotConfig& slot_cfg, int k) {
    if (topology.diameter() > lut.max_hops) {
        throw std::invalid_argument("lookup table does not cover the topology diameter");
    }
    return [&topology, &lut, slot_cfg, k](Rng& rng) {
        const int n = topology.node_count();
        Episode e;
        for (int i = 0; i < k; ++i) {
            const auto src = static_cast<NodeId>(rng.uniform_index(static_cast<std::size_t>(n)));
            auto dst = static_cast<NodeId>(rng.uniform_index(static_cast<std::size_t>(n - 1)));
            if (dst >= src) {
                ++dst;
            }
            traffic::Request r;
            r.src = src;
            r.dst = dst;
            const auto outcome =
                engine::attempt_entanglement(r, lut, topology.hop_distance(src, dst), slot_cfg, rng);
            e.requests.push_back({src, dst, false});
            e.durations.push_back(static_cast<double>(outcome.total));
        }
        return e;
    };
}

TrainResult train(const EpisodeSampler& sampler, int node_count, const TrainConfig& cfg) {
    cfg.validate();
    Rng init_rng(derive_seed(cfg.seed, "dqn-init"));
    Rng env_rng(derive_seed(cfg.seed, "dqn-episodes"));
    Rng act_rng(derive_seed(cfg.seed, "dqn-actions"));
    Rng replay_rng(derive_seed(cfg.seed, "dqn-replay"));

    TrainResult result;
    result.config = cfg;
    result.policy = make_q_network(cfg.k, node_count, cfg.hidden, init_rng);
    QNetworkModel target = result.policy;
    Optimizer optimizer(cfg.optimizer, result.policy);
    ReplayBuffer replay(cfg.replay_capacity);

    std::vector<Transition> pending;
    std::vector<std::size_t> order;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss_sum = 0.0;
        long loss_count = 0;
        double reward_sum = 0.0;
        for (int ep = 0; ep < cfg.episodes_per_epoch; ++ep) {
            const Episode episode = sampler(env_rng);
            if (static_cast<int>(episode.requests.size()) != cfg.k) {
                throw std::logic_error("episode sampler returned the wrong request count");
            }
            StateMatrix state = encode_state(episode.requests, node_count, cfg.k);
            pending.clear();
            order.clear();
            for (int t = 0; t < cfg.k; ++t) {
                std::vector<bool> legal = state.legal_mask();
                const int a = select_action(result.policy, state, legal,
                                            cfg.epsilon_at(result.env_steps), act_rng);
                StateMatrix next = state;
                next.resolve(a);
                pending.push_back({state, a, 0.0, next, t == cfg.k - 1, std::move(legal)});
                order.push_back(static_cast<std::size_t>(a));
                state = std::move(next);
                ++result.env_steps;
            }
            const double reward = episode_reward(episode.durations, order, cfg.c_d, cfg.c_j).reward;
            reward_sum += reward;
            for (Transition& t : pending) {
                t.reward = reward;
                replay.push(std::move(t));
            }
            for (int t = 0; t < cfg.k; ++t) {
                if (replay.size() < static_cast<std::size_t>(cfg.batch)) {
                    break;
                }
                const auto batch = replay.sample(static_cast<std::size_t>(cfg.batch), replay_rng);
                loss_sum += train_step(result.policy, target, batch, cfg, optimizer);
                ++loss_count;
                ++result.train_steps;
                if (result.train_steps % cfg.target_sync_period == 0) {
                    sync_target(result.policy, target);
                }
            }
        }
        result.curve.push_back({epoch, loss_count > 0 ? loss_sum / static_cast<double>(loss_count) : 0.0,
                                reward_sum / cfg.episodes_per_epoch});
    }
    return result;
}

void write_curve_csv(const std::vector<EpochStats>& curve, std::ostream& out) {
    out << "epoch,mean_loss,mean_reward\n";
    out << std::setprecision(17);
    for (const EpochStats& e : curve) {
        out << e.epoch << ',' << e.mean_loss << ',' << e.mean_reward << '\n';
    }
}

nlohmann::json model_to_json(const TrainResult& result) {
    nlohmann::json doc = network_to_json(result.policy);
    doc["version"] = kModelVersion;
    doc["training_config"] = to_json(result.config);
    if (!result.curve.empty()) {
        const EpochStats& last = result.curve.back();
        doc["final_epoch_stats"] = {
            {"epoch", last.epoch}, {"mean_loss", last.mean_loss}, {"mean_reward", last.mean_reward}};
    } else {
        doc["final_epoch_stats"] = nullptr;
    }
    doc["env_steps"] = result.env_steps;
    doc["train_steps"] = result.train_steps;
    return doc;
}

void save_model(const TrainResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << model_to_json(result).dump() << '\n';
}

QNetworkModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open model " + path.string());
    }
    const auto doc = nlohmann::json::parse(in);
    if (doc.value("version", 0) != kModelVersion) {
        throw std::runtime_error("unsupported model version in " + path.string());
    }
    return network_from_json(doc);
}

}  // namespace qsched::deepq
