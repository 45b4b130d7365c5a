#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace semaug {

/// FNV-1a, used to derive per-image seeds from opaque identifiers.
/// Pinned here so seeds are stable across platforms and std library versions.
std::uint64_t fnv1a64(std::string_view bytes);

/// Seeded random source with fully specified output. mt19937_64 is defined
/// bit-for-bit by the standard and uniform() avoids std distributions, whose
/// algorithms are implementation-defined.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Index i with probability weights[i] / sum(weights).
    /// Weights must be non-negative with a positive sum.
    std::size_t pick_weighted(const std::vector<double>& weights);

private:
    std::mt19937_64 engine_;
};

}  // namespace semaug
