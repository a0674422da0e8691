#include "badapprox/power_compare.hpp"

#include <cmath>
#include <stdexcept>

namespace badapprox {
namespace {

Integer lcm_of_denominators(const PowerProduct& a, const PowerProduct& b) {
  Integer l = 1;
  for (const auto* side : {&a, &b})
    for (const auto& t : *side) {
      Integer d = t.exponent.den();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
  return l;
}

// Product of base^(exponent * scale) where exponent * scale is integral.
// Returns false when the product is zero.
bool scaled_product(const PowerProduct& terms, const Integer& scale, Rational& out) {
  out = Rational(1);
  for (const auto& t : terms) {
    if (t.base.sign() < 0) throw std::invalid_argument("negative base in power product");
    Rational e = t.exponent * Rational(scale);
    if (!e.is_integer()) throw std::logic_error("non-integral scaled exponent");
    if (!e.num().fits_slong_p()) throw std::overflow_error("power product exponent too large");
    long ei = e.num().get_si();
    if (t.base.is_zero()) {
      if (ei < 0) throw std::domain_error("zero base with negative exponent");
      if (ei > 0) return false;
      continue;
    }
    out *= pow(t.base, ei);
  }
  return true;
}

}  // namespace

int compare_power_products(const PowerProduct& lhs, const PowerProduct& rhs) {
  Integer l = lcm_of_denominators(lhs, rhs);
  Rational a, b;
  bool a_pos = scaled_product(lhs, l, a);
  bool b_pos = scaled_product(rhs, l, b);
  if (!a_pos || !b_pos) return (a_pos ? 1 : 0) - (b_pos ? 1 : 0);
  int c = cmp(a.value(), b.value());
  return (c > 0) - (c < 0);
}

Rational integral_power_product(const PowerProduct& terms) {
  Rational out;
  if (!scaled_product(terms, Integer(1), out)) return Rational(0);
  return out;
}

RationalBounds bound_power_product(const PowerProduct& terms, unsigned long bits) {
  Integer l = lcm_of_denominators(terms, {});
  Rational w;
  if (!scaled_product(terms, l, w)) return {Rational(0), Rational(0), true};
  unsigned long n = l.get_ui();
  bool exact_num = false, exact_den = false;
  Integer rn = iroot(w.num(), n, &exact_num);
  Integer rd = iroot(w.den(), n, &exact_den);
  if (exact_num && exact_den) {
    Rational v(rn, rd);
    return {v, v, true};
  }
  // value = w^(1/n); pick a binary exponent so that value * 2^e has ~bits bits.
  double log2v = (std::log2(w.num().get_d()) - std::log2(w.den().get_d())) / static_cast<double>(n);
  if (!std::isfinite(log2v)) {
    long en = static_cast<long>(mpz_sizeinbase(w.num().get_mpz_t(), 2));
    long ed = static_cast<long>(mpz_sizeinbase(w.den().get_mpz_t(), 2));
    log2v = static_cast<double>(en - ed) / static_cast<double>(n);
  }
  long e = static_cast<long>(bits) - static_cast<long>(std::floor(log2v));
  Rational scaled = w * pow(Rational(2), e * static_cast<long>(n));
  Integer m = iroot(scaled.floor(), n);
  Rational unit = pow(Rational(2), -e);
  return {Rational(m) * unit, Rational(m + 1) * unit, false};
}

}  // namespace badapprox
