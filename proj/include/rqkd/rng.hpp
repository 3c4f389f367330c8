#pragma once

#include <cstdint>
#include <string_view>

namespace rqkd {

/// Counter-based SplitMix64 generator. Output n is mix(key + (n + 1) * golden),
/// so a generator is fully described by (key, counter) and child streams can be
/// derived from a single master seed without sharing state.
///
/// All derived quantities (integers, reals, normals) are computed here rather
/// than through <random> distributions so that sequences are identical on every
/// platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(seed) {}

    std::uint64_t seed() const { return key_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64();

    // Uniform in [0, n). n must be positive.
    std::uint64_t uniform_int(std::uint64_t n);

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01();

    // Standard normal via Box-Muller; consumes two outputs per call.
    double normal();

    // Independent child generator; does not advance this generator.
    Rng child(std::uint64_t stream) const;
    Rng child(std::string_view name) const;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace rqkd
