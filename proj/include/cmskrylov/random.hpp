#pragma once

#include <cstdint>
#include <limits>

#include "cmskrylov/common.hpp"

namespace cmskrylov {

class InnerProduct;

// xoshiro256** seeded through splitmix64. Satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;
    explicit Rng(std::uint64_t seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    double uniform();   // [0, 1)
    double normal();    // standard normal (Box-Muller, deterministic across platforms)

private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Entries (g₁ + i g₂)/√2 with independent standard normals.
Vec random_complex_normal(Rng& rng, int n);

// Complex normal vector normalized to ‖u‖_M = 1.
Vec random_unit_vector(std::uint64_t seed, const InnerProduct& ip);

}  // namespace cmskrylov
