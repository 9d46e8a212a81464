#include "qsched/qlink/chain.hpp"

#include "qsched/rng.hpp"

#include <stdexcept>
#include <string>

namespace qsched::qlink {

void NoiseParams::validate() const {
    if (!(source_fidelity > 0.0 && source_fidelity <= 1.0)) {
        throw std::invalid_argument("source_fidelity must lie in (0, 1]");
    }
    if (!(memory_depolar_rate >= 0.0) || !(gate_dephase_rate >= 0.0)) {
        throw std::invalid_argument("noise rates must be non-negative");
    }
}

void TimingParams::validate() const {
    if (photon_hop_time <= 0 || classical_hop_time <= 0 || gate_time <= 0) {
        throw std::invalid_argument("timing parameters must be strictly positive");
    }
}

DensityMatrix bell_pair(double source_fidelity, Rng& rng) {
    if (!(source_fidelity > 0.0 && source_fidelity <= 1.0)) {
        throw std::invalid_argument("source_fidelity must lie in (0, 1]");
    }
    // Always consume one draw so the stream layout does not depend on the value.
    const bool correct = rng.uniform() < source_fidelity;
    return DensityMatrix::from_pure(correct ? PureState::phi_plus() : PureState::psi_plus());
}

Nanos attempt_duration(int hops, const TimingParams& timing) {
    if (hops < 1) {
        throw std::invalid_argument("hop count must be at least 1, got " + std::to_string(hops));
    }
    return timing.photon_hop_time +
           static_cast<Nanos>(hops - 1) * (timing.gate_time + timing.classical_hop_time) +
           timing.gate_time;
}

namespace {

DensityMatrix age_memories(DensityMatrix state, std::initializer_list<int> qubits, double rate,
                           Nanos elapsed) {
    if (elapsed <= 0 || rate == 0.0) {
        return state;
    }
    for (const int q : qubits) {
        state = apply_depolarizing(state, q, rate, static_cast<double>(elapsed));
    }
    return state;
}

DensityMatrix gate_noise(DensityMatrix state, std::initializer_list<int> qubits, double rate,
                         Nanos gate_time) {
    if (rate == 0.0) {
        return state;
    }
    for (const int q : qubits) {
        state = apply_dephasing(state, q, rate, static_cast<double>(gate_time));
    }
    return state;
}

}  // namespace

LinkSample simulate_chain(int hops, const NoiseParams& noise, const TimingParams& timing, Rng& rng) {
    if (hops < 1) {
        throw std::invalid_argument("hop count must be at least 1, got " + std::to_string(hops));
    }
    noise.validate();
    timing.validate();

    const double depol = noise.memory_depolar_rate;
    const double dephase_rate = noise.gate_dephase_rate;
    const Nanos photon = timing.photon_hop_time;

    auto fresh_pair = [&] {
        return age_memories(bell_pair(noise.source_fidelity, rng), {0, 1}, depol, photon);
    };

    DensityMatrix left = fresh_pair();
    Nanos now = photon;
    Nanos left_time = photon;

    for (int step = 1; step < hops; ++step) {
        // The right pair was created with all the others and has idled since.
        DensityMatrix right = age_memories(fresh_pair(), {0, 1}, depol, now - photon);
        left = age_memories(std::move(left), {0, 1}, depol, now - left_time);

        // (A, M1) (M2, B): Bell measurement at the repeater, end memories idle.
        DensityMatrix reg = tensor(left, right);
        reg = gate_noise(std::move(reg), {1, 2}, dephase_rate, timing.gate_time);
        reg = age_memories(std::move(reg), {0, 3}, depol, timing.gate_time);
        SwapResult swapped = swap_and_correct(reg, rng);

        // Outcome travels to B; both channels are Pauli-covariant, so
        // aging after the correction is equivalent to aging before it.
        DensityMatrix pair =
            age_memories(std::move(swapped.state), {0, 1}, depol, timing.classical_hop_time);
        pair = gate_noise(std::move(pair), {1}, dephase_rate, timing.gate_time);

        now += timing.gate_time + timing.classical_hop_time;
        left = std::move(pair);
        left_time = now;
    }

    return {fidelity(left, PureState::phi_plus()), attempt_duration(hops, timing)};
}

}  // namespace qsched::qlink
