#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <span>

namespace qsched {
class Rng;
}

namespace qsched::qlink {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

// Register convention: qubit 0 is the most significant bit of the basis
// index, so |q0 q1 ... q(n-1)>.
class PureState {
public:
    explicit PureState(CVector amplitudes);

    static PureState phi_plus();   // (|00> + |11>)/sqrt2
    static PureState phi_minus();  // (|00> - |11>)/sqrt2
    static PureState psi_plus();   // (|01> + |10>)/sqrt2
    static PureState psi_minus();  // (|01> - |10>)/sqrt2
    static PureState plus();       // (|0> + |1>)/sqrt2

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const CVector& amplitudes() const { return amplitudes_; }

private:
    CVector amplitudes_;
};

class DensityMatrix {
public:
    // Accepts any square matrix with power-of-two dimension; physical
    // invariants are checked by validate(), not here, so intermediate
    // (unnormalized) operators can be represented during channel algebra.
    explicit DensityMatrix(CMatrix entries);

    static DensityMatrix from_pure(const PureState& state);
    static DensityMatrix maximally_mixed(int num_qubits);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    int num_qubits() const { return num_qubits_; }
    const CMatrix& entries() const { return entries_; }

    Complex trace() const { return entries_.trace(); }
    bool is_hermitian(double tol = kHermitianTolerance) const;
    double min_eigenvalue() const;

    // Throws std::domain_error naming the violated invariant.
    void validate() const;

private:
    CMatrix entries_;
    int num_qubits_ = 0;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// alpha * a + (1 - alpha) * b.
DensityMatrix mix(double alpha, const DensityMatrix& a, const DensityMatrix& b);

// Embeds a 2^m x 2^m operator acting on `qubits` (in that order) into the
// full register and returns op * rho * op^dagger.
DensityMatrix apply_operator(const DensityMatrix& state, const CMatrix& op,
                             std::span<const int> qubits);
DensityMatrix apply_single_qubit(const DensityMatrix& state, const CMatrix& op, int qubit);

// Reduced state on `keep` (kept in the given order).
DensityMatrix partial_trace(const DensityMatrix& state, std::span<const int> keep);

// <psi|rho|psi>, clamped to [0, 1].
double fidelity(const DensityMatrix& state, const PureState& target);

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
}  // namespace pauli

// rho -> (1-p) rho + p (I/2 (x) tr_q rho) on the addressed qubit.
DensityMatrix depolarize(const DensityMatrix& state, int qubit, double probability);
// rho -> (1-p) rho + p Z rho Z on the addressed qubit.
DensityMatrix dephase(const DensityMatrix& state, int qubit, double probability);

// Probability conversions from physical rates.
double depolarizing_probability(double rate_hz, double elapsed_ns);
double dephasing_probability(double rate_hz, double elapsed_ns);

DensityMatrix apply_depolarizing(const DensityMatrix& state, int qubit, double rate_hz,
                                 double elapsed_ns);
DensityMatrix apply_dephasing(const DensityMatrix& state, int qubit, double rate_hz,
                              double elapsed_ns);

// Bell-measurement outcome as two classical bits. x marks the Psi family,
// z marks the minus sign:
//   (0,0) Phi+   (1,0) Psi+   (0,1) Phi-   (1,1) Psi-
struct BsmOutcome {
    bool x = false;
    bool z = false;

    int index() const { return (x ? 1 : 0) | (z ? 2 : 0); }
    static BsmOutcome from_index(int i) { return {(i & 1) != 0, (i & 2) != 0}; }
    bool operator==(const BsmOutcome&) const = default;
};

PureState bell_state(BsmOutcome outcome);

struct SwapResult {
    DensityMatrix state;  // reduced (A, B) pair, corrections applied
    BsmOutcome outcome;
};

// Register layout: qubits (A, M1, M2, B); the pairs are (A, M1) and (M2, B).
// Bell measurement on (M1, M2), then X^x Z^z correction on B.
SwapResult swap_and_correct(const DensityMatrix& chain_state, Rng& rng);

// Same with the measurement outcome fixed (post-selected). Throws if the
// outcome has zero probability.
SwapResult swap_and_correct(const DensityMatrix& chain_state, BsmOutcome forced);

// Born probabilities of the four outcomes, indexed by BsmOutcome::index().
std::array<double, 4> bsm_probabilities(const DensityMatrix& chain_state);

}  // namespace qsched::qlink
