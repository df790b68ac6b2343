#pragma once

#include <cstdint>

namespace mpnum {

// Portable seeded generator: xorshift64* stream seeded through splitmix64,
// with Box-Muller normals. Identical seed gives an identical stream on
// every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_bits();

    // Uniform on [0, 1).
    double uniform();

    // Standard normal via Box-Muller (pairs cached).
    double normal();

    // 0/1 draw with success probability p.
    int bernoulli(double p);

private:
    std::uint64_t state_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace mpnum
