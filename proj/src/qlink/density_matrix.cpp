#include "qsched/qlink/density_matrix.hpp"

#include "qsched/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsched::qlink {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

int qubits_for_dim(Eigen::Index dim) {
    if (dim <= 0 || !std::has_single_bit(static_cast<unsigned long>(dim))) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    return std::countr_zero(static_cast<unsigned long>(dim));
}

// Bit of basis index `index` belonging to `qubit` in an n-qubit register.
inline int bit_of(std::size_t index, int qubit, int n) {
    return static_cast<int>((index >> (n - 1 - qubit)) & 1U);
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

PureState::PureState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    qubits_for_dim(amplitudes_.size());
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > 1e-12) {
        throw std::invalid_argument("pure state is not normalized (norm " + std::to_string(norm) + ")");
    }
}

PureState PureState::phi_plus() {
    CVector v = CVector::Zero(4);
    v(0) = kInvSqrt2;
    v(3) = kInvSqrt2;
    return PureState(v);
}

PureState PureState::phi_minus() {
    CVector v = CVector::Zero(4);
    v(0) = kInvSqrt2;
    v(3) = -kInvSqrt2;
    return PureState(v);
}

PureState PureState::psi_plus() {
    CVector v = CVector::Zero(4);
    v(1) = kInvSqrt2;
    v(2) = kInvSqrt2;
    return PureState(v);
}

PureState PureState::psi_minus() {
    CVector v = CVector::Zero(4);
    v(1) = kInvSqrt2;
    v(2) = -kInvSqrt2;
    return PureState(v);
}

PureState PureState::plus() {
    CVector v(2);
    v << kInvSqrt2, kInvSqrt2;
    return PureState(v);
}

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    num_qubits_ = qubits_for_dim(entries_.rows());
}

DensityMatrix DensityMatrix::from_pure(const PureState& state) {
    const CVector& v = state.amplitudes();
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
    const Eigen::Index d = Eigen::Index{1} << num_qubits;
    return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
}

bool DensityMatrix::is_hermitian(double tol) const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(entries_), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
    if (!is_hermitian()) {
        throw std::domain_error("density matrix is not Hermitian");
    }
    if (std::abs(trace() - Complex(1.0, 0.0)) > kTraceTolerance) {
        throw std::domain_error("density matrix trace is not 1");
    }
    if (min_eigenvalue() < -kPsdTolerance) {
        throw std::domain_error("density matrix is not positive semidefinite");
    }
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    const CMatrix& x = a.entries();
    const CMatrix& y = b.entries();
    CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return DensityMatrix(std::move(out));
}

DensityMatrix mix(double alpha, const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("mix: dimension mismatch");
    }
    return DensityMatrix(alpha * a.entries() + (1.0 - alpha) * b.entries());
}

namespace {

// Full-register matrix of `op` acting on `qubits`, identity elsewhere.
CMatrix embed(const CMatrix& op, std::span<const int> qubits, int n) {
    const std::size_t m = qubits.size();
    if (op.rows() != (Eigen::Index{1} << m) || op.cols() != op.rows()) {
        throw std::invalid_argument("operator size does not match addressed qubits");
    }
    std::uint64_t mask = 0;
    for (const int q : qubits) {
        if (q < 0 || q >= n) {
            throw std::out_of_range("qubit index " + std::to_string(q) + " out of range for " +
                                    std::to_string(n) + "-qubit register");
        }
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
        if (mask & bit) {
            throw std::invalid_argument("repeated qubit index");
        }
        mask |= bit;
    }
    const std::size_t dim = std::size_t{1} << n;
    auto sub_index = [&](std::size_t full) {
        std::size_t s = 0;
        for (const int q : qubits) {
            s = (s << 1) | static_cast<std::size_t>(bit_of(full, q, n));
        }
        return s;
    };
    CMatrix full = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if ((i & ~mask) != (j & ~mask)) {
                continue;
            }
            full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                op(static_cast<Eigen::Index>(sub_index(i)), static_cast<Eigen::Index>(sub_index(j)));
        }
    }
    return full;
}

}  // namespace

DensityMatrix apply_operator(const DensityMatrix& state, const CMatrix& op,
                             std::span<const int> qubits) {
    const CMatrix full = embed(op, qubits, state.num_qubits());
    return DensityMatrix(full * state.entries() * full.adjoint());
}

DensityMatrix apply_single_qubit(const DensityMatrix& state, const CMatrix& op, int qubit) {
    const int q[] = {qubit};
    return apply_operator(state, op, q);
}

DensityMatrix partial_trace(const DensityMatrix& state, std::span<const int> keep) {
    const int n = state.num_qubits();
    std::uint64_t keep_mask = 0;
    for (const int q : keep) {
        if (q < 0 || q >= n) {
            throw std::out_of_range("partial_trace: qubit index out of range");
        }
        keep_mask |= std::uint64_t{1} << (n - 1 - q);
    }
    const std::size_t dim = state.dim();
    const std::size_t out_dim = std::size_t{1} << keep.size();
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(out_dim));
    auto sub_index = [&](std::size_t full) {
        std::size_t s = 0;
        for (const int q : keep) {
            s = (s << 1) | static_cast<std::size_t>(bit_of(full, q, n));
        }
        return s;
    };
    const CMatrix& rho = state.entries();
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if ((i & ~keep_mask) != (j & ~keep_mask)) {
                continue;
            }
            out(static_cast<Eigen::Index>(sub_index(i)), static_cast<Eigen::Index>(sub_index(j))) +=
                rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return DensityMatrix(std::move(out));
}

double fidelity(const DensityMatrix& state, const PureState& target) {
    if (state.dim() != target.dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch (" + std::to_string(state.dim()) +
                                    " vs " + std::to_string(target.dim()) + ")");
    }
    const CVector& psi = target.amplitudes();
    const double f = (psi.adjoint() * state.entries() * psi)(0, 0).real();
    return std::clamp(f, 0.0, 1.0);
}

namespace pauli {

CMatrix identity() { return CMatrix::Identity(2, 2); }

CMatrix x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix y() {
    CMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

CMatrix z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace pauli

namespace {

void check_qubit(const DensityMatrix& state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits()) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for " +
                                std::to_string(state.num_qubits()) + "-qubit register");
    }
}

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("channel probability must lie in [0, 1]");
    }
}

}  // namespace

DensityMatrix depolarize(const DensityMatrix& state, int qubit, double probability) {
    check_qubit(state, qubit);
    check_probability(probability);
    if (probability == 0.0) {
        return state;
    }
    // (1/4) sum_P P rho P = I/2 (x) tr_q(rho) on the addressed qubit.
    CMatrix twirl = state.entries();
    for (const CMatrix& p : {pauli::x(), pauli::y(), pauli::z()}) {
        twirl += apply_single_qubit(state, p, qubit).entries();
    }
    twirl *= 0.25;
    return DensityMatrix(hermitize((1.0 - probability) * state.entries() + probability * twirl));
}

DensityMatrix dephase(const DensityMatrix& state, int qubit, double probability) {
    check_qubit(state, qubit);
    check_probability(probability);
    if (probability == 0.0) {
        return state;
    }
    const CMatrix flipped = apply_single_qubit(state, pauli::z(), qubit).entries();
    return DensityMatrix(hermitize((1.0 - probability) * state.entries() + probability * flipped));
}

double depolarizing_probability(double rate_hz, double elapsed_ns) {
    if (rate_hz < 0.0 || elapsed_ns < 0.0) {
        throw std::invalid_argument("rate and elapsed time must be non-negative");
    }
    return -std::expm1(-rate_hz * elapsed_ns * 1e-9);
}

double dephasing_probability(double rate_hz, double elapsed_ns) {
    return 0.5 * depolarizing_probability(rate_hz, elapsed_ns);
}

DensityMatrix apply_depolarizing(const DensityMatrix& state, int qubit, double rate_hz,
                                 double elapsed_ns) {
    check_qubit(state, qubit);
    return depolarize(state, qubit, depolarizing_probability(rate_hz, elapsed_ns));
}

DensityMatrix apply_dephasing(const DensityMatrix& state, int qubit, double rate_hz,
                              double elapsed_ns) {
    check_qubit(state, qubit);
    return dephase(state, qubit, dephasing_probability(rate_hz, elapsed_ns));
}

PureState bell_state(BsmOutcome outcome) {
    if (outcome.x) {
        return outcome.z ? PureState::psi_minus() : PureState::psi_plus();
    }
    return outcome.z ? PureState::phi_minus() : PureState::phi_plus();
}

namespace {

constexpr int kMeasured[] = {1, 2};
constexpr int kKept[] = {0, 3};

void check_chain(const DensityMatrix& chain_state) {
    if (chain_state.num_qubits() != 4) {
        throw std::invalid_argument("swap_and_correct expects a 4-qubit register, got " +
                                    std::to_string(chain_state.num_qubits()));
    }
}

CMatrix bell_projector(BsmOutcome outcome) {
    const PureState bell = bell_state(outcome);
    const CVector& v = bell.amplitudes();
    return v * v.adjoint();
}

SwapResult collapse(const DensityMatrix& chain_state, BsmOutcome outcome, double probability) {
    DensityMatrix projected = apply_operator(chain_state, bell_projector(outcome), kMeasured);
    DensityMatrix reduced = partial_trace(projected, kKept);
    DensityMatrix normalized(hermitize(reduced.entries() / probability));
    // B is qubit 1 of the reduced pair.
    if (outcome.x) {
        normalized = apply_single_qubit(normalized, pauli::x(), 1);
    }
    if (outcome.z) {
        normalized = apply_single_qubit(normalized, pauli::z(), 1);
    }
    return {std::move(normalized), outcome};
}

}  // namespace

std::array<double, 4> bsm_probabilities(const DensityMatrix& chain_state) {
    check_chain(chain_state);
    std::array<double, 4> probs{};
    // tr(P rho P) = tr(P rho) for a projector.
    for (int i = 0; i < 4; ++i) {
        const CMatrix p = embed(bell_projector(BsmOutcome::from_index(i)), kMeasured, 4);
        const CMatrix& rho = chain_state.entries();
        double prob = 0.0;
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
            for (Eigen::Index j = 0; j < p.cols(); ++j) {
                prob += (p(i, j) * rho(j, i)).real();
            }
        }
        probs[static_cast<std::size_t>(i)] = std::max(0.0, prob);
    }
    return probs;
}

SwapResult swap_and_correct(const DensityMatrix& chain_state, Rng& rng) {
    const auto probs = bsm_probabilities(chain_state);
    double total = 0.0;
    for (const double p : probs) {
        total += p;
    }
    const double u = rng.uniform() * total;
    double acc = 0.0;
    int chosen = 3;
    for (int i = 0; i < 4; ++i) {
        acc += probs[static_cast<std::size_t>(i)];
        if (u < acc) {
            chosen = i;
            break;
        }
    }
    // Guard against landing on a zero-probability tail through rounding.
    while (probs[static_cast<std::size_t>(chosen)] <= 0.0 && chosen > 0) {
        --chosen;
    }
    return collapse(chain_state, BsmOutcome::from_index(chosen), probs[static_cast<std::size_t>(chosen)]);
}

SwapResult swap_and_correct(const DensityMatrix& chain_state, BsmOutcome forced) {
    const auto probs = bsm_probabilities(chain_state);
    const double p = probs[static_cast<std::size_t>(forced.index())];
    if (p <= 1e-15) {
        throw std::domain_error("forced Bell outcome has zero probability");
    }
    return collapse(chain_state, forced, p);
}

}  // namespace qsched::qlink
