// Seeded xorshift64* generator. Chosen over std::mt19937 so multistart
// searches reproduce bit-for-bit across platforms and languages; test
// vectors are pinned in the README and in tests/test_optim.cpp.
#pragma once

#include <cstdint>

#include "monocalc/core.hpp"

namespace monocalc {

class Xorshift64Star {
 public:
  // A zero seed would lock the generator at zero; remap it.
  explicit Xorshift64Star(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1Dull;
  }

  // Uniform in [0, 1), 53-bit mantissa.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t state_;
};

}  // namespace monocalc
