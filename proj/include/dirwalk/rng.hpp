#ifndef DIRWALK_RNG_HPP
#define DIRWALK_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace dirwalk {

// Counter-based generator: every draw is a pure function of
// (seed, purpose tag, index), so results do not depend on evaluation order
// or thread scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view purpose)
      : key_(mix(seed ^ fnv1a(purpose))) {}

  std::uint64_t bits(std::uint64_t index) const {
    return mix(key_ + 0x9e3779b97f4a7c15ull * (index + 1));
  }

  // uniform in [0, 1)
  double uniform(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

  // uniform integer in [lo, hi] (inclusive), hi - lo < 2^63
  std::uint64_t uniform_int(std::uint64_t index, std::uint64_t lo,
                            std::uint64_t hi) const {
    const std::uint64_t span = hi - lo + 1;
    // fixed-point multiply; bias is < 2^-64 per draw, irrelevant at our spans
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(bits(index)) * span;
    return lo + static_cast<std::uint64_t>(wide >> 64);
  }

  // standard normal via Box-Muller; one value per index
  double normal(std::uint64_t index) const {
    const double u1 = (static_cast<double>(bits(2 * index) >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = uniform(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    return h;
  }

  // SplitMix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

}  // namespace dirwalk

#endif
