#pragma once

#include <vector>

#include "badapprox/rational.hpp"

namespace badapprox {

/// base^exponent with a nonnegative rational base and a rational exponent.
struct PowerTerm {
  Rational base;
  Rational exponent;
};

using PowerProduct = std::vector<PowerTerm>;

/// Sign of (prod lhs) - (prod rhs), exactly. Both sides are raised to the
/// least common denominator of all exponents before comparing.
int compare_power_products(const PowerProduct& lhs, const PowerProduct& rhs);

/// Exact value of a product whose exponents are all integers.
Rational integral_power_product(const PowerProduct& terms);

/// Bounds lo <= value <= hi with lo, hi of about `bits` significant bits.
/// When the value is rational both bounds equal it.
struct RationalBounds {
  Rational lower;
  Rational upper;
  bool exact = false;
};
RationalBounds bound_power_product(const PowerProduct& terms, unsigned long bits = 64);

}  // namespace badapprox
