#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace badapprox {

using Integer = mpz_class;

Integer integer_from_i64(std::int64_t v);
Integer ipow(const Integer& base, unsigned long exp);
/// Floor of the n-th root of a nonnegative integer, and whether it is exact.
Integer iroot(const Integer& x, unsigned long n, bool* exact = nullptr);
Integer floor_div(const Integer& a, const Integer& b);
Integer ceil_div(const Integer& a, const Integer& b);

/**
 * Exact fraction in lowest terms with a positive denominator.
 */
class Rational {
 public:
  Rational() = default;
  template <std::integral T>
  Rational(T v) : v_(integer_from_i64(static_cast<std::int64_t>(v))) {}
  Rational(const Integer& n) : v_(n) {}
  Rational(const Integer& num, const Integer& den);

  static Rational from_mpq(const mpq_class& v);
  /// Accepts "a", "a/b", optionally signed. Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  const mpq_class& value() const { return v_; }
  Integer num() const { return v_.get_num(); }
  Integer den() const { return v_.get_den(); }
  std::string str() const { return v_.get_str(); }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  Rational abs() const;
  Integer floor() const;
  Integer ceil() const;
  double to_double() const { return v_.get_d(); }

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);
  Rational operator-() const;

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

/// Integer power; negative exponents invert (base must be nonzero then).
Rational pow(const Rational& base, long exp);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Largest m / 2^bits with m / 2^bits <= x^(1/n), x >= 0.
Rational root_floor_dyadic(const Rational& x, unsigned long n, unsigned long bits);

}  // namespace badapprox
