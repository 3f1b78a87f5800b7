#pragma once

#include <cmath>
#include <cstdint>

namespace wpccrn {

// Counter-based generator: every draw is a pure hash of (key, counter), so a
// stream can be reproduced from (seed, stream id) alone no matter how many
// worker threads consume other streams. Stream-splitting convention used by
// the simulator:
//   stream = realization index * 8 + {0: placement, 1: fading,
//   2: random single-SU selection, 3: random multi-SU selection,
//   4..7: reserved}.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^ mix(stream))) {}

    std::uint64_t next_u64() { return mix(key_ ^ mix(counter_++)); }

    /// Uniform draw on (0, 1].
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Unit-mean exponential draw.
    double exponential() { return -std::log(uniform()); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace wpccrn
