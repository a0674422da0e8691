#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "badapprox/rational.hpp"

namespace badapprox {

/// Raised when a truncated p-adic or Laurent comparison cannot be decided.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Continued fractions

/// [a0; a1, ..., an], canonical: an >= 2 whenever n >= 1.
struct ContinuedFraction {
  std::vector<Integer> quotients;

  Rational value() const;
  std::vector<Rational> convergents() const;
  std::string str() const;
};

ContinuedFraction cf_expand(const Rational& x);

/// True iff the first `depth` partial quotients a1..a_depth of x are <= M
/// (a rational with a shorter expansion is checked on the quotients it has).
bool is_in_F_M(const Rational& x, long M, long depth);

// ---------------------------------------------------------------------------
// Rational enumeration

using PQ = std::pair<Integer, Integer>;

/// All unreduced (p, q) with 0 <= p <= q, q_lo <= q < q_hi and lo <= p/q <= hi,
/// ordered by q then p.
std::vector<PQ> enumerate_rationals(const Rational& lo, const Rational& hi, const Integer& q_lo,
                                    const Integer& q_hi);

/// Reduced fractions a/b in [lo, hi] with 1 <= b <= max_den, ascending.
std::vector<Rational> farey_in_interval(const Rational& lo, const Rational& hi,
                                        const Integer& max_den);

// ---------------------------------------------------------------------------
// p-adic valuation

bool is_prime(const Integer& p);

/// v_p(n); std::nullopt stands for the infinite valuation of n = 0.
std::optional<unsigned long> padic_valuation(const Integer& n, unsigned long p);

/// |x|_p for a rational x (0 for x = 0).
Rational padic_abs(const Rational& x, unsigned long p);

// ---------------------------------------------------------------------------
// Gaussian numbers

struct GaussInt {
  Integer re;
  Integer im;

  Integer norm() const { return re * re + im * im; }
  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  friend GaussInt operator+(const GaussInt& a, const GaussInt& b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussInt operator-(const GaussInt& a, const GaussInt& b) { return {a.re - b.re, a.im - b.im}; }
  friend GaussInt operator*(const GaussInt& a, const GaussInt& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussInt& a, const GaussInt& b) { return a.re == b.re && a.im == b.im; }
};

class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit GaussianRational(Rational re) : re_(std::move(re)) {}
  /// p / q for Gaussian integers, q != 0.
  static GaussianRational ratio(const GaussInt& p, const GaussInt& q);

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  /// Squared modulus |z|^2.
  Rational norm() const { return re_ * re_ + im_ * im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  std::string str() const;

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b);
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  Rational re_;
  Rational im_;
};

// ---------------------------------------------------------------------------
// Truncated p-adic integers

/**
 * Element of Z_p known modulo p^(T+1) through its digits c_0..c_T. An exact
 * element is a nonnegative integer whose expansion terminates within T.
 */
class PAdicTrunc {
 public:
  PAdicTrunc() = default;
  PAdicTrunc(unsigned long p, unsigned long order, const Integer& value, bool exact = false);
  /// The integer n >= 0 as an exact element; order is grown to hold its digits.
  static PAdicTrunc exact_integer(unsigned long p, const Integer& n, unsigned long min_order = 0);
  /// A rational with denominator prime to p, truncated at the given order.
  static PAdicTrunc from_rational(unsigned long p, unsigned long order, const Rational& x);

  unsigned long prime() const { return p_; }
  unsigned long order() const { return order_; }
  bool exact() const { return exact_; }
  /// Residue in [0, p^(T+1)).
  const Integer& residue() const { return residue_; }
  Integer modulus() const;
  std::vector<unsigned long> digits() const;
  /// Valuation of the represented residue; std::nullopt when all digits vanish.
  std::optional<unsigned long> valuation() const;
  /// |x|_p of the represented element; 0 when all digits vanish.
  Rational abs() const;

  friend PAdicTrunc operator+(const PAdicTrunc& a, const PAdicTrunc& b);
  friend PAdicTrunc operator-(const PAdicTrunc& a, const PAdicTrunc& b);
  friend PAdicTrunc operator*(const PAdicTrunc& a, const PAdicTrunc& b);
  friend bool operator==(const PAdicTrunc& a, const PAdicTrunc& b) {
    return a.p_ == b.p_ && a.order_ == b.order_ && a.residue_ == b.residue_ && a.exact_ == b.exact_;
  }

 private:
  unsigned long p_ = 2;
  unsigned long order_ = 0;
  Integer residue_;
  bool exact_ = false;
};

/// |x - r|_p for a truncated x and an exact rational r; throws PrecisionError
/// when the distance is below the resolution of x. When `upper_only` is given,
/// it is set instead of throwing and the returned value is an upper bound.
Rational padic_distance(const PAdicTrunc& x, const Rational& r, bool* upper_only = nullptr);

// ---------------------------------------------------------------------------
// Polynomials over F_p and truncated Laurent series in X^{-1}

class PolyFp {
 public:
  PolyFp() = default;
  PolyFp(unsigned long p, std::vector<unsigned long> coeffs_low_to_high);
  /// Decodes the base-p digits of n (lowest digit = constant term).
  static PolyFp from_index(unsigned long p, const Integer& n);

  unsigned long prime() const { return p_; }
  const std::vector<unsigned long>& coeffs() const { return c_; }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  unsigned long coeff(long i) const;
  Integer index() const;
  std::string str() const;

  friend PolyFp operator+(const PolyFp& a, const PolyFp& b);
  friend PolyFp operator-(const PolyFp& a, const PolyFp& b);
  friend PolyFp operator*(const PolyFp& a, const PolyFp& b);
  friend bool operator==(const PolyFp& a, const PolyFp& b) { return a.p_ == b.p_ && a.c_ == b.c_; }

 private:
  void trim();
  unsigned long p_ = 2;
  std::vector<unsigned long> c_;
};

/**
 * Series sum a_e X^e over exponents bottom <= e <= top with coefficients in
 * F_h (h prime). Terms below `bottom` are unknown unless the element is exact.
 */
class LaurentTrunc {
 public:
  LaurentTrunc() = default;
  /// coeffs[i] is the coefficient of X^(top - i).
  LaurentTrunc(unsigned long h, long top, std::vector<unsigned long> coeffs, bool exact = false);
  static LaurentTrunc from_poly(const PolyFp& p);
  /// Expansion of p/q down to exponent `bottom` (exact iff the division terminates).
  static LaurentTrunc from_ratio(const PolyFp& p, const PolyFp& q, long bottom);

  unsigned long field_size() const { return h_; }
  long top() const { return top_; }
  long bottom() const { return top_ - static_cast<long>(c_.size()) + 1; }
  bool exact() const { return exact_; }
  const std::vector<unsigned long>& coeffs() const { return c_; }
  unsigned long coeff(long exponent) const;
  /// Leading exponent n of the represented terms, std::nullopt if all vanish.
  std::optional<long> leading_exponent() const;
  std::string str() const;

  friend LaurentTrunc operator+(const LaurentTrunc& a, const LaurentTrunc& b);
  friend LaurentTrunc operator-(const LaurentTrunc& a, const LaurentTrunc& b);
  friend LaurentTrunc operator*(const PolyFp& a, const LaurentTrunc& b);
  friend bool operator==(const LaurentTrunc& a, const LaurentTrunc& b);

 private:
  unsigned long h_ = 2;
  long top_ = 0;
  std::vector<unsigned long> c_;
  bool exact_ = false;
};

/// h^n for leading exponent n; 0 for the zero element.
Rational laurent_abs(const LaurentTrunc& x);

/// ||x - p/q|| for a truncated x; PrecisionError (or upper bound flag) as for
/// padic_distance.
Rational laurent_distance(const LaurentTrunc& x, const PolyFp& p, const PolyFp& q,
                          bool* upper_only = nullptr);

}  // namespace badapprox
