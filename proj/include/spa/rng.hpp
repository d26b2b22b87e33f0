#pragma once

#include <cstdint>
#include <random>

#include "spa/netlist.hpp"

namespace spa {

// splitmix64 mixing, used to derive independent per-trajectory seeds.
std::uint64_t mix_seed(std::uint64_t seed);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Deterministic Gaussian source: mt19937_64 + explicit Box-Muller so that
// identical seeds give bit-identical streams on every platform (the standard
// library's normal_distribution is implementation-defined).
class gaussian_rng {
public:
    explicit gaussian_rng(std::uint64_t seed) : eng_(seed) {}

    double uniform();          // (0, 1]
    double normal();           // standard normal
    complex complex_normal(double variance);  // E|w|^2 = variance

private:
    std::mt19937_64 eng_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace spa
