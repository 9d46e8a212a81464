#pragma once

#include "qsched/common.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace qsched::deepq {

struct PendingEntry {
    NodeId src = 0;
    NodeId dst = 0;
    bool resolved = false;
};

// k x 2V binary matrix. Row i is one-hot(src_i) followed by one-hot(dst_i);
// a resolved request's row is all zeros.
class StateMatrix {
public:
    StateMatrix(int k, int node_count);

    int k() const { return k_; }
    int node_count() const { return node_count_; }
    int cols() const { return 2 * node_count_; }

    std::uint8_t at(int row, int col) const {
        return bits_[static_cast<std::size_t>(row * cols() + col)];
    }
    bool row_resolved(int row) const;
    int row_sum(int row) const;

    void set_request(int row, NodeId src, NodeId dst);
    void resolve(int row);

    // Legal actions are the unresolved rows.
    std::vector<bool> legal_mask() const;
    bool all_resolved() const;

    // Row-major flattening, length 2kV.
    Eigen::VectorXd as_input() const;
    void write_input(Eigen::Ref<Eigen::VectorXd> out) const;

    bool operator==(const StateMatrix&) const = default;

private:
    int k_;
    int node_count_;
    std::vector<std::uint8_t> bits_;
};

StateMatrix encode_state(std::span<const PendingEntry> pending, int node_count, int k);

}  // namespace qsched::deepq
