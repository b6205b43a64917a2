#pragma once

#include <cstdint>

namespace spincant {

// Counter-based generator: every draw is the pure function
// value_at(seed, stream, counter), so a single draw can be reproduced in
// isolation and independent streams (e.g. ensemble members) never overlap.
// Mixing is the standard 64-bit finalizer of the splitmix family.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    static std::uint64_t value_at(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
        const std::uint64_t origin = mix(seed ^ (kGamma * (stream + 1)));
        return mix(origin + kGamma * counter);
    }

    // 53-bit uniform in [0, 1)
    static double uniform_at(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
        return static_cast<double>(value_at(seed, stream, counter) >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_u64() { return value_at(seed_, stream_, counter_++); }
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t counter() const { return counter_; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace spincant
