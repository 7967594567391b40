#pragma once

#include <cassert>
#include <cstdint>
#include <limits>

namespace wsim {

// SplitMix64 generator (Steele, Lea and Flood's splittable PRNG). One
// instance per simulation, so a whole run is a pure function of the seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, n) via rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    assert(n >= 1);
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t overhang = (max % n + 1) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next();
      if (overhang == 0 || r <= max - overhang) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace wsim
