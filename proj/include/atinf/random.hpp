#pragma once

#include <cstdint>
#include <random>

#include "atinf/poly.hpp"

namespace atinf {

/// Deterministic sampler. Values depend only on the seed and the call sequence,
/// independent of the standard library's distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull) {}

  /// Uniform integer in [lo, hi].
  long uniform(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(engine_() % span);
  }

  /// Nonzero rational p/q with |p| <= bound and 1 <= q <= bound.
  Rational small_rational(long bound = 1000) {
    long num = 0;
    while (num == 0) num = uniform(-bound, bound);
    const long den = uniform(1, bound);
    return make_rational(num, den);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace atinf
