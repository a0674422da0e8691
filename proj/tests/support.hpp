#pragma once

#include <cstdint>
#include <random>

#include "badapprox/rational.hpp"

namespace badapprox::testing {

/// Seeded generator for the property tests.
struct Gen {
  std::mt19937_64 rng;

  explicit Gen(std::uint64_t seed) : rng(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
  bool coin() { return rng() & 1; }

  /// p/q with 1 <= q <= max_den and p in [lo * q, hi * q].
  Rational rational(long max_den, long lo = 0, long hi = 1) {
    const long q = uniform(1, max_den);
    return Rational(Integer(uniform(lo * q, hi * q)), Integer(q));
  }

  /// m / 2^bits in [0, 1).
  Rational dyadic(unsigned bits) {
    const Integer den = ipow(Integer(2), bits);
    Integer num(static_cast<unsigned long>(rng() >> (64 - bits)));
    return Rational(num, den);
  }
};

using i128 = __int128;

inline i128 i128_abs(i128 x) { return x < 0 ? -x : x; }

}  // namespace badapprox::testing
