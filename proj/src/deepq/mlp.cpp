#include "qsched/deepq/mlp.hpp"

#include "qsched/deepq/state.hpp"
#include "qsched/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsched::deepq {

std::vector<int> QNetworkModel::layer_dims() const {
    std::vector<int> dims;
    if (layers.empty()) {
        return dims;
    }
    dims.push_back(input_dim());
    for (const DenseLayer& l : layers) {
        dims.push_back(static_cast<int>(l.weights.rows()));
    }
    return dims;
}

std::size_t QNetworkModel::parameter_count() const {
    std::size_t n = 0;
    for (const DenseLayer& l : layers) {
        n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
    }
    return n;
}

bool QNetworkModel::all_finite() const {
    for (const DenseLayer& l : layers) {
        if (!l.weights.allFinite() || !l.bias.allFinite()) {
            return false;
        }
    }
    return true;
}

QNetworkModel make_q_network(int k, int node_count, const std::vector<int>& hidden, Rng& rng) {
    if (k < 1 || node_count < 2) {
        throw std::invalid_argument("q-network needs k >= 1 and at least two nodes");
    }
    QNetworkModel model;
    model.k = k;
    model.node_count = node_count;
    std::vector<int> dims{2 * k * node_count};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(k);
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        const int fan_in = dims[i];
        const int fan_out = dims[i + 1];
        if (fan_out < 1) {
            throw std::invalid_argument("layer width must be positive");
        }
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        DenseLayer layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd(fan_out)};
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
                layer.weights(r, c) = (2.0 * rng.uniform() - 1.0) * bound;
            }
        }
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
            layer.bias(r) = (2.0 * rng.uniform() - 1.0) * bound;
        }
        model.layers.push_back(std::move(layer));
    }
    return model;
}

QNetworkModel zero_like(const QNetworkModel& model) {
    QNetworkModel z = model;
    for (DenseLayer& l : z.layers) {
        l.weights.setZero();
        l.bias.setZero();
    }
    return z;
}

Eigen::MatrixXd forward_batch(const QNetworkModel& model, const Eigen::MatrixXd& inputs,
                              ForwardCache* cache) {
    if (model.layers.empty()) {
        throw std::invalid_argument("forward: empty network");
    }
    if (inputs.rows() != model.input_dim()) {
        throw std::invalid_argument("forward: input has " + std::to_string(inputs.rows()) +
                                    " rows, network expects " + std::to_string(model.input_dim()));
    }
    if (cache != nullptr) {
        cache->pre.clear();
        cache->post.clear();
        cache->post.push_back(inputs);
    }
    Eigen::MatrixXd x = inputs;
    const std::size_t last = model.layers.size() - 1;
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        const DenseLayer& l = model.layers[i];
        Eigen::MatrixXd z = l.weights * x;
        z.colwise() += l.bias;
        if (cache != nullptr) {
            cache->pre.push_back(z);
        }
        if (i < last) {
            x = z.cwiseMax(0.0);
        } else {
            x = std::move(z);
        }
        if (cache != nullptr) {
            cache->post.push_back(x);
        }
    }
    return x;
}

Eigen::VectorXd forward(const QNetworkModel& model, const StateMatrix& state) {
    if (state.k() != model.k || state.node_count() != model.node_count) {
        throw std::invalid_argument("forward: state shape (k=" + std::to_string(state.k()) +
                                    ", V=" + std::to_string(state.node_count()) +
                                    ") does not match network (k=" + std::to_string(model.k) +
                                    ", V=" + std::to_string(model.node_count) + ")");
    }
    return forward_batch(model, state.as_input()).col(0);
}

QNetworkModel backward(const QNetworkModel& model, const ForwardCache& cache,
                       const Eigen::MatrixXd& output_grad) {
    QNetworkModel grads = zero_like(model);
    Eigen::MatrixXd delta = output_grad;
    for (std::size_t i = model.layers.size(); i-- > 0;) {
        if (i + 1 < model.layers.size()) {
            // Rectifier derivative (0 at the kink).
            delta = delta.cwiseProduct((cache.pre[i].array() > 0.0).cast<double>().matrix());
        }
        grads.layers[i].weights = delta * cache.post[i].transpose();
        grads.layers[i].bias = delta.rowwise().sum();
        if (i > 0) {
            delta = model.layers[i].weights.transpose() * delta;
        }
    }
    return grads;
}

void sgd_update(QNetworkModel& model, const QNetworkModel& grads, double lr) {
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        model.layers[i].weights -= lr * grads.layers[i].weights;
        model.layers[i].bias -= lr * grads.layers[i].bias;
    }
}

AdamOptimizer::AdamOptimizer(const QNetworkModel& shape, double beta1, double beta2, double epsilon)
    : m_(zero_like(shape)), v_(zero_like(shape)), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

void AdamOptimizer::update(QNetworkModel& model, const QNetworkModel& grads, double lr) {
    ++step_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
    auto apply = [&](auto& param, auto& m, auto& v, const auto& g) {
        m = beta1_ * m + (1.0 - beta1_) * g;
        v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
        param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + epsilon_);
    };
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        apply(model.layers[i].weights, m_.layers[i].weights, v_.layers[i].weights, grads.layers[i].weights);
        apply(model.layers[i].bias, m_.layers[i].bias, v_.layers[i].bias, grads.layers[i].bias);
    }
}

nlohmann::json network_to_json(const QNetworkModel& model) {
    nlohmann::json layers = nlohmann::json::array();
    for (const DenseLayer& l : model.layers) {
        std::vector<double> w;
        w.reserve(static_cast<std::size_t>(l.weights.size()));
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c) {
                w.push_back(l.weights(r, c));
            }
        }
        std::vector<double> b(l.bias.data(), l.bias.data() + l.bias.size());
        layers.push_back({{"w", std::move(w)}, {"b", std::move(b)}});
    }
    return {
        {"k", model.k},
        {"V", model.node_count},
        {"layer_dims", model.layer_dims()},
        {"weights", std::move(layers)},
    };
}

QNetworkModel network_from_json(const nlohmann::json& doc) {
    QNetworkModel model;
    model.k = doc.at("k").get<int>();
    model.node_count = doc.at("V").get<int>();
    const auto dims = doc.at("layer_dims").get<std::vector<int>>();
    const auto& layers = doc.at("weights");
    if (dims.size() < 2 || layers.size() != dims.size() - 1) {
        throw std::runtime_error("model layer_dims do not match weights");
    }
    if (dims.front() != 2 * model.k * model.node_count || dims.back() != model.k) {
        throw std::runtime_error("model input/output size inconsistent with k and V");
    }
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        const auto w = layers[i].at("w").get<std::vector<double>>();
        const auto b = layers[i].at("b").get<std::vector<double>>();
        const auto rows = static_cast<std::size_t>(dims[i + 1]);
        const auto cols = static_cast<std::size_t>(dims[i]);
        if (w.size() != rows * cols || b.size() != rows) {
            throw std::runtime_error("model layer " + std::to_string(i) + " has the wrong size");
        }
        DenseLayer l{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                l.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = w[r * cols + c];
            }
            l.bias(static_cast<Eigen::Index>(r)) = b[r];
        }
        model.layers.push_back(std::move(l));
    }
    if (!model.all_finite()) {
        throw std::runtime_error("model contains non-finite weights");
    }
    return model;
}

}  // namespace qsched::deepq
