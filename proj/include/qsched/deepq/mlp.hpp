#pragma once

#include <Eigen/Dense>

#include <nlohmann/json_fwd.hpp>

#include <vector>

namespace qsched {
class Rng;
}

namespace qsched::deepq {

class StateMatrix;

struct DenseLayer {
    Eigen::MatrixXd weights;  // out x in
    Eigen::VectorXd bias;     // out

    bool operator==(const DenseLayer& o) const {
        return weights.rows() == o.weights.rows() && weights.cols() == o.weights.cols() &&
               bias.size() == o.bias.size() && weights == o.weights && bias == o.bias;
    }
};

// Q-network: rectifier on every hidden layer, linear output of length k.
struct QNetworkModel {
    int k = 0;
    int node_count = 0;
    std::vector<DenseLayer> layers;

    int input_dim() const { return static_cast<int>(layers.front().weights.cols()); }
    int output_dim() const { return static_cast<int>(layers.back().weights.rows()); }
    std::vector<int> layer_dims() const;
    std::size_t parameter_count() const;
    bool all_finite() const;

    bool operator==(const QNetworkModel&) const = default;
};

// Input 2kV, the given hidden widths, output k. Weights and biases are
// uniform in +-1/sqrt(fan_in).
QNetworkModel make_q_network(int k, int node_count, const std::vector<int>& hidden, Rng& rng);

// Same shape with every parameter zero.
QNetworkModel zero_like(const QNetworkModel& model);

// Activations of a batched forward pass, inputs as columns.
struct ForwardCache {
    std::vector<Eigen::MatrixXd> pre;   // per layer, before activation
    std::vector<Eigen::MatrixXd> post;  // post[0] = input, post[i + 1] = layer i output
};

Eigen::MatrixXd forward_batch(const QNetworkModel& model, const Eigen::MatrixXd& inputs,
                              ForwardCache* cache = nullptr);

Eigen::VectorXd forward(const QNetworkModel& model, const StateMatrix& state);

// Backpropagates d(loss)/d(output) (k x batch) through a cached pass. The
// result has the model's shape and holds d(loss)/d(parameter).
QNetworkModel backward(const QNetworkModel& model, const ForwardCache& cache,
                       const Eigen::MatrixXd& output_grad);

void sgd_update(QNetworkModel& model, const QNetworkModel& grads, double lr);

class AdamOptimizer {
public:
    explicit AdamOptimizer(const QNetworkModel& shape, double beta1 = 0.9, double beta2 = 0.999,
                           double epsilon = 1e-8);
    void update(QNetworkModel& model, const QNetworkModel& grads, double lr);

private:
    QNetworkModel m_;
    QNetworkModel v_;
    double beta1_;
    double beta2_;
    double epsilon_;
    long step_ = 0;
};

// {k, V, layer_dims, weights: [{w: row-major, b}, ...]}.
nlohmann::json network_to_json(const QNetworkModel& model);
QNetworkModel network_from_json(const nlohmann::json& doc);

}  // namespace qsched::deepq
