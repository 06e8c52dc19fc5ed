#pragma once

#include <cmath>
#include <random>

#include "rsgraph/common.hpp"

namespace rsg {

// mt19937_64 raw output is pinned by the standard, so streams are reproducible
// across toolchains. Distributions are hand-rolled for the same reason:
// std::uniform_* and std::normal_distribution are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform on [0,1), 53-bit resolution
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on {0, ..., 2^20 - 1}: one dyadic shift coordinate numerator
    std::int64_t next_grid20() { return static_cast<std::int64_t>(next_u64() >> 44); }

    // Box-Muller, cosine branch only
    double next_gaussian() {
        const double u1 = 1.0 - next_unit();  // (0,1]
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace rsg
