#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace qsched {

// Seeded random stream with platform-independent sampling helpers.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The std:: distributions are not, so every draw used by the
// simulator goes through the helpers below.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform();

    // Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Labeled sub-seed derivation. Components that share a master seed stay
// independently reproducible as long as their labels differ.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index,
                          std::uint64_t sub_index);

}  // namespace qsched
