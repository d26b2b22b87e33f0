#include "spa/rng.hpp"

#include <cmath>
#include <numbers>

namespace spa {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return mix_seed(mix_seed(seed ^ (stream * 0xd1342543de82ef95ULL)) ^ index);
}

double gaussian_rng::uniform() {
    // 53-bit mantissa in (0, 1]; never 0 so log() below is safe.
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
}

double gaussian_rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

complex gaussian_rng::complex_normal(double variance) {
    double s = std::sqrt(0.5 * variance);
    double re = normal();
    double im = normal();
    return {s * re, s * im};
}

}  // namespace spa
