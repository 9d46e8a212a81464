#pragma once

#include "qsched/common.hpp"
#include "qsched/qlink/density_matrix.hpp"

namespace qsched {
class Rng;
}

namespace qsched::qlink {

// Per-node noise model. Defaults are the reference deployment: source
// fidelity 0.9, memory depolarizing 6000 Hz, gate dephasing 5000 Hz.
struct NoiseParams {
    double source_fidelity = 0.9;
    double memory_depolar_rate = 6000.0;  // Hz
    double gate_dephase_rate = 5000.0;    // Hz

    void validate() const;
    bool operator==(const NoiseParams&) const = default;
};

// Latencies of one entanglement attempt along a homogeneous chain.
struct TimingParams {
    Nanos photon_hop_time = 5'000;
    Nanos classical_hop_time = 5'000;
    Nanos gate_time = 1'000;

    void validate() const;
    bool operator==(const TimingParams&) const = default;
};

struct LinkSample {
    double fidelity = 0.0;
    Nanos duration = 0;

    bool operator==(const LinkSample&) const = default;
};

// Imperfect source: |Phi+> with probability source_fidelity, otherwise the
// orthogonal |Psi+>.
DensityMatrix bell_pair(double source_fidelity, Rng& rng);

// Duration of one attempt over `hops` links:
//   photon + (hops - 1) * (gate + classical) + gate
Nanos attempt_duration(int hops, const TimingParams& timing);

// One end-to-end attempt over a chain of `hops` links. Link pairs are
// generated simultaneously, then folded left to right by entanglement
// swapping so at most four qubits are held at once.
LinkSample simulate_chain(int hops, const NoiseParams& noise, const TimingParams& timing, Rng& rng);

}  // namespace qsched::qlink
