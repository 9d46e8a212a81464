#include "qsched/deepq/state.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qsched::deepq {

StateMatrix::StateMatrix(int k, int node_count) : k_(k), node_count_(node_count) {
    if (k < 1 || node_count < 2) {
        throw std::invalid_argument("state matrix needs k >= 1 and at least two nodes");
    }
    bits_.assign(static_cast<std::size_t>(k * 2 * node_count), 0);
}

bool StateMatrix::row_resolved(int row) const { return row_sum(row) == 0; }

int StateMatrix::row_sum(int row) const {
    int s = 0;
    for (int c = 0; c < cols(); ++c) {
        s += at(row, c);
    }
    return s;
}

void StateMatrix::set_request(int row, NodeId src, NodeId dst) {
    if (row < 0 || row >= k_) {
        throw std::out_of_range("state row out of range");
    }
    if (src < 0 || dst < 0 || src >= node_count_ || dst >= node_count_) {
        throw std::out_of_range("request endpoint " + std::to_string(src) + "->" + std::to_string(dst) +
                                " out of range for " + std::to_string(node_count_) + " nodes");
    }
    auto first = bits_.begin() + row * cols();
    std::fill(first, first + cols(), std::uint8_t{0});
    first[src] = 1;
    first[node_count_ + dst] = 1;
}

void StateMatrix::resolve(int row) {
    if (row < 0 || row >= k_) {
        throw std::out_of_range("state row out of range");
    }
    auto first = bits_.begin() + row * cols();
    std::fill(first, first + cols(), std::uint8_t{0});
}

std::vector<bool> StateMatrix::legal_mask() const {
    std::vector<bool> mask(static_cast<std::size_t>(k_));
    for (int i = 0; i < k_; ++i) {
        mask[static_cast<std::size_t>(i)] = !row_resolved(i);
    }
    return mask;
}

bool StateMatrix::all_resolved() const {
    return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b == 0; });
}

Eigen::VectorXd StateMatrix::as_input() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(bits_.size()));
    write_input(v);
    return v;
}

void StateMatrix::write_input(Eigen::Ref<Eigen::VectorXd> out) const {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = bits_[i];
    }
}

StateMatrix encode_state(std::span<const PendingEntry> pending, int node_count, int k) {
    if (static_cast<int>(pending.size()) != k) {
        throw std::invalid_argument("encode_state: expected " + std::to_string(k) + " requests, got " +
                                    std::to_string(pending.size()));
    }
    StateMatrix s(k, node_count);
    for (int i = 0; i < k; ++i) {
        const PendingEntry& e = pending[static_cast<std::size_t>(i)];
        if (e.src < 0 || e.dst < 0 || e.src >= node_count || e.dst >= node_count) {
            throw std::out_of_range("encode_state: endpoint out of range");
        }
        if (!e.resolved) {
            s.set_request(i, e.src, e.dst);
        }
    }
    return s;
}

}  // namespace qsched::deepq
