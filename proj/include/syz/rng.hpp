#pragma once

#include <cstdint>

namespace syz {

// Deterministic splitmix64 generator. All randomness in a run flows from one
// master seed; independent sub-streams are derived with child() so that
// reports are reproducible across platforms (no std::uniform_int_distribution,
// whose output is implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased draw in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0)
            return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    // Derived stream; does not advance this generator.
    Rng child(std::uint64_t tag) const {
        std::uint64_t z = state_ ^ (0xD1B54A32D192ED03ULL * (tag + 0x9E3779B97F4A7C15ULL));
        z = (z ^ (z >> 32)) * 0xD6E8FEB86659FD93ULL;
        z = (z ^ (z >> 32)) * 0xD6E8FEB86659FD93ULL;
        return Rng(z ^ (z >> 32));
    }

  private:
    std::uint64_t state_;
};

} // namespace syz
