#pragma once

#include "qsched/deepq/mlp.hpp"
#include "qsched/deepq/state.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qsched {
class Rng;
}
namespace qsched::nettopo {
class Topology;
}
namespace qsched::qlink {
struct LookupTable;
}
namespace qsched::engine {
struct SlotConfig;
}

namespace qsched::deepq {

inline constexpr int kModelVersion = 1;

struct Transition {
    StateMatrix state;
    int action = 0;
    double reward = 0.0;
    StateMatrix next_state;
    bool done = false;
    std::vector<bool> legal_mask;  // legal actions in `state`
};

class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    // Uniform with replacement.
    std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> items_;
};

enum class OptimizerKind { Sgd, Adam };

// Defaults: 128-128 hidden, lr 1e-3, batch 64, replay 1e5, epsilon 1.0 to
// 0.05 over 20,000 steps, target sync every 500 updates, gamma 0.9, 150
// episodes per epoch.
struct TrainConfig {
    int k = 5;
    double c_d = 0.9;
    double c_j = 0.1;
    double gamma = 0.9;
    double lr = 1e-3;
    int batch = 64;
    std::size_t replay_capacity = 100'000;
    double eps_start = 1.0;
    double eps_end = 0.05;
    long eps_decay_steps = 20'000;
    long target_sync_period = 500;
    int episodes_per_epoch = 150;
    int epochs = 100;
    std::vector<int> hidden{128, 128};
    OptimizerKind optimizer = OptimizerKind::Adam;
    std::uint64_t seed = 0;

    void validate() const;
    double epsilon_at(long env_step) const;
};

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& doc, TrainConfig defaults = {});

// Lowest-index maximum of q over legal actions. Throws on an empty mask.
int masked_argmax(const Eigen::VectorXd& q, const std::vector<bool>& legal);

// Epsilon-greedy over legal actions.
int select_action(const QNetworkModel& model, const StateMatrix& state,
                  const std::vector<bool>& legal, double epsilon, Rng& rng);

// y = r for terminal transitions, else
// y = r + gamma * Q_target(s', argmax_{legal a'} Q_policy(s', a')).
std::vector<double> double_dqn_targets(const QNetworkModel& policy, const QNetworkModel& target,
                                       std::span<const Transition* const> batch, double gamma);

// Mean squared error between Q_policy(s, a) and fixed targets.
double td_loss(const QNetworkModel& policy, std::span<const Transition* const> batch,
               std::span<const double> targets);

struct LossGradient {
    double loss = 0.0;
    QNetworkModel grads;
};

LossGradient td_gradient(const QNetworkModel& policy, std::span<const Transition* const> batch,
                         std::span<const double> targets);

class Optimizer {
public:
    Optimizer(OptimizerKind kind, const QNetworkModel& shape) : kind_(kind), adam_(shape) {}
    void update(QNetworkModel& model, const QNetworkModel& grads, double lr);

private:
    OptimizerKind kind_;
    AdamOptimizer adam_;
};

// One gradient update of `policy`; `target` is read only. Returns the
// loss before the update.
double train_step(QNetworkModel& policy, const QNetworkModel& target,
                  std::span<const Transition* const> batch, const TrainConfig& cfg,
                  Optimizer& optimizer);

void sync_target(const QNetworkModel& policy, QNetworkModel& target);

// A standalone k-request instance with its realized service durations.
struct Episode {
    std::vector<PendingEntry> requests;
    std::vector<double> durations;  // ns, indexed like requests
};

using EpisodeSampler = std::function<Episode(Rng&)>;

// Uniform distinct endpoint pairs; each duration is the time the engine's
// retry logic spends on the request (completion, or the budget if dropped).
EpisodeSampler make_lut_episode_sampler(const nettopo::Topology& topology,
                                        const qlink::LookupTable& lut,
                                        const engine::SlotConfig& slot_cfg, int k);

struct EpochStats {
    int epoch = 0;
    double mean_loss = 0.0;
    double mean_reward = 0.0;

    bool operator==(const EpochStats&) const = default;
};

struct TrainResult {
    QNetworkModel policy;
    std::vector<EpochStats> curve;
    TrainConfig config;
    long env_steps = 0;
    long train_steps = 0;
};

// Episodes roll out masked epsilon-greedy selection until every request is
// ordered; the episode reward is attached to each of its transitions (the
// last one terminal). After each episode one minibatch update runs per step
// taken, and the target network is copied every target_sync_period updates.
TrainResult train(const EpisodeSampler& sampler, int node_count, const TrainConfig& cfg);

void write_curve_csv(const std::vector<EpochStats>& curve, std::ostream& out);

// {version, k, V, layer_dims, weights, training_config, final_epoch_stats}.
nlohmann::json model_to_json(const TrainResult& result);
void save_model(const TrainResult& result, const std::filesystem::path& path);
QNetworkModel load_model(const std::filesystem::path& path);

}  // namespace qsched::deepq
