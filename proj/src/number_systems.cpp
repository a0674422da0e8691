#include "badapprox/number_systems.hpp"

#include <algorithm>
#include <sstream>

namespace badapprox {

// ---------------------------------------------------------------------------
// Continued fractions

Rational ContinuedFraction::value() const {
  if (quotients.empty()) throw std::invalid_argument("empty continued fraction");
  Rational v(quotients.back());
  for (auto it = quotients.rbegin() + 1; it != quotients.rend(); ++it) v = Rational(*it) + Rational(1) / v;
  return v;
}

std::vector<Rational> ContinuedFraction::convergents() const {
  std::vector<Rational> out;
  Integer p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  for (const auto& a : quotients) {
    Integer p = a * p_prev + p_prev2;
    Integer q = a * q_prev + q_prev2;
    out.emplace_back(p, q);
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
  }
  return out;
}

std::string ContinuedFraction::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < quotients.size(); ++i) {
    if (i == 1) os << "; ";
    else if (i > 1) os << ", ";
    os << quotients[i].get_str();
  }
  os << ']';
  return os.str();
}

ContinuedFraction cf_expand(const Rational& x) {
  ContinuedFraction cf;
  Integer a = x.num(), b = x.den();
  while (true) {
    Integer q = floor_div(a, b);
    Integer r = a - q * b;
    cf.quotients.push_back(q);
    if (sgn(r) == 0) break;
    a = b;
    b = r;
  }
  return cf;
}

bool is_in_F_M(const Rational& x, long M, long depth) {
  if (M < 2) throw std::invalid_argument("is_in_F_M requires M >= 2");
  if (depth < 1) throw std::invalid_argument("is_in_F_M requires depth >= 1");
  if (x.sign() < 0 || x > Rational(1)) throw std::invalid_argument("is_in_F_M: x outside [0,1]");
  ContinuedFraction cf = cf_expand(x);
  std::size_t last = std::min<std::size_t>(cf.quotients.size() - 1, static_cast<std::size_t>(depth));
  for (std::size_t i = 1; i <= last; ++i)
    if (cf.quotients[i] > M) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Rational enumeration

namespace {

struct Frac {
  Integer a;
  Integer b;
};

// Consecutive members left < x < right of the Farey sequence of order Q,
// for x whose denominator exceeds Q.
void farey_bracket(const Rational& x, const Integer& Q, Frac& left, Frac& right) {
  const Integer u = x.num(), v = x.den();
  Integer a = x.floor(), b = 1, c = a + 1, d = 1;
  while (b + d <= Q) {
    if (u * (b + d) < v * (a + c)) {
      Integer num = c * v - u * d, den = u * b - a * v;
      Integer t = std::min(Integer(ceil_div(num, den) - 1), Integer(floor_div(Q - d, b)));
      c += t * a;
      d += t * b;
    } else {
      Integer num = u * b - a * v, den = c * v - u * d;
      Integer t = std::min(Integer(ceil_div(num, den) - 1), Integer(floor_div(Q - b, d)));
      a += t * c;
      b += t * d;
    }
  }
  left = {a, b};
  right = {c, d};
}

// Successor of a/b (lowest terms, b <= Q) in the Farey sequence of order Q.
Frac farey_successor(const Integer& a, const Integer& b, const Integer& Q) {
  if (b == 1) return {a * Q + 1, Q};
  Integer am, inv;
  mpz_fdiv_r(am.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_invert(inv.get_mpz_t(), am.get_mpz_t(), b.get_mpz_t());
  Integer d0 = b - inv;
  Integer d = d0 + floor_div(Q - d0, b) * b;
  Integer c = (1 + a * d) / b;
  return {c, d};
}

}  // namespace

std::vector<Rational> farey_in_interval(const Rational& lo, const Rational& hi, const Integer& max_den) {
  std::vector<Rational> out;
  if (hi < lo || max_den < 1) return out;
  Frac prev, cur;
  if (lo.den() <= max_den) {
    prev = {lo.num(), lo.den()};
    out.push_back(lo);
    cur = farey_successor(prev.a, prev.b, max_den);
  } else {
    farey_bracket(lo, max_den, prev, cur);
  }
  while (true) {
    Rational r(cur.a, cur.b);
    if (r > hi) break;
    out.push_back(r);
    Integer t = floor_div(max_den + prev.b, cur.b);
    Frac next{t * cur.a - prev.a, t * cur.b - prev.b};
    prev = cur;
    cur = next;
  }
  return out;
}

std::vector<PQ> enumerate_rationals(const Rational& lo, const Rational& hi, const Integer& q_lo,
                                    const Integer& q_hi) {
  if (lo.sign() < 0 || hi > Rational(1) || hi < lo)
    throw std::invalid_argument("enumerate_rationals requires 0 <= lo <= hi <= 1");
  if (q_lo < 1 || q_hi <= q_lo) throw std::invalid_argument("enumerate_rationals requires 1 <= q_lo < q_hi");
  std::vector<PQ> out;
  double width = (hi - lo).to_double();
  if (width * q_hi.get_d() < 2.0) {
    for (const Rational& r : farey_in_interval(lo, hi, q_hi - 1)) {
      Integer a = r.num(), b = r.den();
      for (Integer m = ceil_div(q_lo, b); m * b < q_hi; ++m) out.emplace_back(m * a, m * b);
    }
    std::sort(out.begin(), out.end(), [](const PQ& x, const PQ& y) {
      return x.second != y.second ? x.second < y.second : x.first < y.first;
    });
  } else {
    for (Integer q = q_lo; q < q_hi; ++q) {
      Integer p_lo = ceil_div(lo.num() * q, lo.den());
      Integer p_hi = floor_div(hi.num() * q, hi.den());
      for (Integer p = p_lo; p <= p_hi; ++p) out.emplace_back(p, q);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// p-adic valuation

bool is_prime(const Integer& p) { return p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 30) > 0; }

std::optional<unsigned long> padic_valuation(const Integer& n, unsigned long p) {
  if (!is_prime(Integer(p))) throw std::invalid_argument("padic_valuation requires a prime");
  if (sgn(n) == 0) return std::nullopt;
  Integer rest;
  Integer pp(p);
  return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
}

Rational padic_abs(const Rational& x, unsigned long p) {
  if (x.is_zero()) return Rational(0);
  long v = static_cast<long>(*padic_valuation(x.num(), p)) - static_cast<long>(*padic_valuation(x.den(), p));
  return pow(Rational(static_cast<long>(p)), -v);
}

// ---------------------------------------------------------------------------
// Gaussian numbers

GaussianRational GaussianRational::ratio(const GaussInt& p, const GaussInt& q) {
  if (q.is_zero()) throw std::domain_error("Gaussian ratio with zero denominator");
  Integer n = q.norm();
  GaussInt num = p * GaussInt{q.re, -q.im};
  return {Rational(num.re, n), Rational(num.im, n)};
}

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  Rational n = b.norm();
  if (n.is_zero()) throw std::domain_error("division by zero");
  GaussianRational c = a * GaussianRational(b.re_, -b.im_);
  return {c.re_ / n, c.im_ / n};
}

std::string GaussianRational::str() const {
  std::string s = re_.str();
  if (im_.sign() >= 0) s += "+";
  return s + im_.str() + "i";
}

// ---------------------------------------------------------------------------
// Truncated p-adic integers

PAdicTrunc::PAdicTrunc(unsigned long p, unsigned long order, const Integer& value, bool exact)
    : p_(p), order_(order), exact_(exact) {
  if (!is_prime(Integer(p))) throw std::invalid_argument("PAdicTrunc requires a prime");
  Integer m = modulus();
  if (exact && (sgn(value) < 0 || value >= m))
    throw std::invalid_argument("exact p-adic value must be a nonnegative integer below p^(T+1)");
  mpz_fdiv_r(residue_.get_mpz_t(), value.get_mpz_t(), m.get_mpz_t());
}

PAdicTrunc PAdicTrunc::exact_integer(unsigned long p, const Integer& n, unsigned long min_order) {
  if (sgn(n) < 0) throw std::invalid_argument("exact p-adic integers must be nonnegative");
  unsigned long digits = sgn(n) == 0 ? 1 : mpz_sizeinbase(n.get_mpz_t(), static_cast<int>(p));
  // mpz_sizeinbase may overestimate by one for non-power-of-two bases.
  unsigned long order = std::max<unsigned long>(min_order, digits);
  return PAdicTrunc(p, order, n, true);
}

PAdicTrunc PAdicTrunc::from_rational(unsigned long p, unsigned long order, const Rational& x) {
  Integer pp(p);
  Integer g;
  Integer den = x.den();
  mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t());
  if (g != 1) throw std::invalid_argument("rational is not a p-adic integer");
  Integer m = ipow(pp, order + 1);
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  Integer v = x.num() * inv;
  bool exact = x.is_integer() && sgn(x.num()) >= 0 && x.num() < m;
  return PAdicTrunc(p, order, v, exact);
}

Integer PAdicTrunc::modulus() const { return ipow(Integer(p_), order_ + 1); }

std::vector<unsigned long> PAdicTrunc::digits() const {
  std::vector<unsigned long> out;
  Integer r = residue_;
  for (unsigned long i = 0; i <= order_; ++i) {
    Integer d;
    mpz_fdiv_qr_ui(r.get_mpz_t(), d.get_mpz_t(), r.get_mpz_t(), p_);
    out.push_back(d.get_ui());
  }
  return out;
}

std::optional<unsigned long> PAdicTrunc::valuation() const { return padic_valuation(residue_, p_); }

Rational PAdicTrunc::abs() const {
  auto v = valuation();
  if (!v) return Rational(0);
  return pow(Rational(static_cast<long>(p_)), -static_cast<long>(*v));
}

namespace {

void require_same_prime(const PAdicTrunc& a, const PAdicTrunc& b) {
  if (a.prime() != b.prime()) throw std::invalid_argument("p-adic operands with different primes");
}

PAdicTrunc padic_combine(const PAdicTrunc& a, const PAdicTrunc& b, const Integer& exact_value,
                         const Integer& approx_value) {
  if (a.exact() && b.exact() && sgn(exact_value) >= 0)
    return PAdicTrunc::exact_integer(a.prime(), exact_value, std::min(a.order(), b.order()));
  unsigned long order = a.exact() ? b.order() : (b.exact() ? a.order() : std::min(a.order(), b.order()));
  return PAdicTrunc(a.prime(), order, approx_value);
}

}  // namespace

PAdicTrunc operator+(const PAdicTrunc& a, const PAdicTrunc& b) {
  require_same_prime(a, b);
  Integer s = a.residue_ + b.residue_;
  return padic_combine(a, b, s, s);
}

PAdicTrunc operator-(const PAdicTrunc& a, const PAdicTrunc& b) {
  require_same_prime(a, b);
  Integer s = a.residue_ - b.residue_;
  return padic_combine(a, b, s, s);
}

PAdicTrunc operator*(const PAdicTrunc& a, const PAdicTrunc& b) {
  require_same_prime(a, b);
  Integer s = a.residue_ * b.residue_;
  return padic_combine(a, b, s, s);
}

Rational padic_distance(const PAdicTrunc& x, const Rational& r, bool* upper_only) {
  const unsigned long p = x.prime();
  if (upper_only) *upper_only = false;
  Integer u = r.num(), w = r.den();
  long vw = static_cast<long>(*padic_valuation(w, p));
  Integer D = w * x.residue() - u;
  Rational P(static_cast<long>(p));
  if (x.exact()) {
    if (sgn(D) == 0) return Rational(0);
    return pow(P, vw - static_cast<long>(*padic_valuation(D, p)));
  }
  long resolved = static_cast<long>(x.order()) + 1 + vw;
  if (sgn(D) != 0) {
    long vd = static_cast<long>(*padic_valuation(D, p));
    if (vd < resolved) return pow(P, vw - vd);
  }
  Rational bound = pow(P, -static_cast<long>(x.order() + 1));
  if (!upper_only) throw PrecisionError("p-adic distance below truncation precision");
  *upper_only = true;
  return bound;
}

// ---------------------------------------------------------------------------
// Polynomials over F_p

PolyFp::PolyFp(unsigned long p, std::vector<unsigned long> coeffs) : p_(p), c_(std::move(coeffs)) {
  if (p < 2) throw std::invalid_argument("PolyFp requires p >= 2");
  for (auto& x : c_) x %= p_;
  trim();
}

PolyFp PolyFp::from_index(unsigned long p, const Integer& n) {
  std::vector<unsigned long> c;
  Integer r = n;
  while (sgn(r) > 0) {
    Integer d;
    mpz_fdiv_qr_ui(r.get_mpz_t(), d.get_mpz_t(), r.get_mpz_t(), p);
    c.push_back(d.get_ui());
  }
  return PolyFp(p, c);
}

void PolyFp::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

unsigned long PolyFp::coeff(long i) const {
  return (i < 0 || i >= static_cast<long>(c_.size())) ? 0 : c_[static_cast<std::size_t>(i)];
}

Integer PolyFp::index() const {
  Integer n = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) n = n * p_ + *it;
  return n;
}

std::string PolyFp::str() const {
  if (c_.empty()) return "0";
  std::string s;
  for (long i = degree(); i >= 0; --i) {
    unsigned long a = c_[static_cast<std::size_t>(i)];
    if (a == 0) continue;
    if (!s.empty()) s += "+";
    if (i == 0) {
      s += std::to_string(a);
      continue;
    }
    if (a != 1) s += std::to_string(a) + "*";
    s += "X";
    if (i > 1) s += "^" + std::to_string(i);
  }
  return s;
}

PolyFp operator+(const PolyFp& a, const PolyFp& b) {
  std::vector<unsigned long> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (a.coeff(static_cast<long>(i)) + b.coeff(static_cast<long>(i))) % a.p_;
  return PolyFp(a.p_, c);
}

PolyFp operator-(const PolyFp& a, const PolyFp& b) {
  std::vector<unsigned long> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = (a.coeff(static_cast<long>(i)) + a.p_ - b.coeff(static_cast<long>(i))) % a.p_;
  return PolyFp(a.p_, c);
}

PolyFp operator*(const PolyFp& a, const PolyFp& b) {
  if (a.is_zero() || b.is_zero()) return PolyFp(a.p_, {});
  std::vector<unsigned long> c(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = (c[i + j] + a.c_[i] * b.c_[j]) % a.p_;
  return PolyFp(a.p_, c);
}

// ---------------------------------------------------------------------------
// Laurent series

namespace {

unsigned long inverse_mod(unsigned long a, unsigned long p) {
  Integer r, aa(a), pp(p);
  if (mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), pp.get_mpz_t()) == 0)
    throw std::domain_error("no inverse modulo p");
  return r.get_ui();
}

}  // namespace

LaurentTrunc::LaurentTrunc(unsigned long h, long top, std::vector<unsigned long> coeffs, bool exact)
    : h_(h), top_(top), c_(std::move(coeffs)), exact_(exact) {
  if (!is_prime(Integer(h))) throw std::invalid_argument("LaurentTrunc supports prime h only");
  if (c_.empty()) c_.push_back(0);
  for (auto& x : c_) x %= h_;
}

LaurentTrunc LaurentTrunc::from_poly(const PolyFp& p) {
  long top = std::max<long>(p.degree(), 0);
  std::vector<unsigned long> c;
  for (long e = top; e >= 0; --e) c.push_back(p.coeff(e));
  return LaurentTrunc(p.prime(), top, c, true);
}

LaurentTrunc LaurentTrunc::from_ratio(const PolyFp& p, const PolyFp& q, long bottom) {
  if (q.is_zero()) throw std::domain_error("Laurent ratio with zero denominator");
  const unsigned long h = p.prime();
  if (p.is_zero()) return LaurentTrunc(h, bottom, {0}, true);
  const long n = q.degree();
  const unsigned long inv = inverse_mod(q.coeff(n), h);
  const long top = std::max(p.degree() - n, bottom);
  // Remainder coefficients indexed by exponent - (bottom + 0).
  const long r_lo = std::min(bottom, 0L);
  std::vector<unsigned long> rem(static_cast<std::size_t>(std::max(p.degree(), top + n) - r_lo + 1), 0);
  for (long e = 0; e <= p.degree(); ++e) rem[static_cast<std::size_t>(e - r_lo)] = p.coeff(e);
  std::vector<unsigned long> out;
  for (long e = top; e >= bottom; --e) {
    unsigned long a = (rem[static_cast<std::size_t>(e + n - r_lo)] * inv) % h;
    out.push_back(a);
    if (a == 0) continue;
    for (long i = 0; i <= n; ++i) {
      auto& slot = rem[static_cast<std::size_t>(e + i - r_lo)];
      slot = (slot + h - (a * q.coeff(i)) % h) % h;
    }
  }
  bool exact = std::all_of(rem.begin(), rem.end(), [](unsigned long x) { return x == 0; });
  return LaurentTrunc(h, top, out, exact);
}

unsigned long LaurentTrunc::coeff(long exponent) const {
  if (exponent > top_) return 0;
  if (exponent < bottom()) {
    if (exact_) return 0;
    throw PrecisionError("Laurent coefficient below truncation");
  }
  return c_[static_cast<std::size_t>(top_ - exponent)];
}

std::optional<long> LaurentTrunc::leading_exponent() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return top_ - static_cast<long>(i);
  return std::nullopt;
}

std::string LaurentTrunc::str() const {
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    long e = top_ - static_cast<long>(i);
    if (!s.empty()) s += "+";
    if (c_[i] != 1 || e == 0) s += std::to_string(c_[i]);
    if (e != 0) s += (c_[i] != 1 ? "*X^" : "X^") + std::to_string(e);
  }
  if (s.empty()) s = "0";
  if (!exact_) s += "+O(X^" + std::to_string(bottom() - 1) + ")";
  return s;
}

namespace {

LaurentTrunc laurent_linear(const LaurentTrunc& a, const LaurentTrunc& b, bool subtract) {
  if (a.field_size() != b.field_size()) throw std::invalid_argument("Laurent operands over different fields");
  const unsigned long h = a.field_size();
  long bottom;
  if (a.exact() && b.exact()) bottom = std::min(a.bottom(), b.bottom());
  else if (a.exact()) bottom = b.bottom();
  else if (b.exact()) bottom = a.bottom();
  else bottom = std::max(a.bottom(), b.bottom());
  long top = std::max({a.top(), b.top(), bottom});
  std::vector<unsigned long> c;
  for (long e = top; e >= bottom; --e) {
    unsigned long x = e >= a.bottom() || a.exact() ? a.coeff(e) : 0;
    unsigned long y = e >= b.bottom() || b.exact() ? b.coeff(e) : 0;
    c.push_back(subtract ? (x + h - y) % h : (x + y) % h);
  }
  return LaurentTrunc(h, top, c, a.exact() && b.exact());
}

}  // namespace

LaurentTrunc operator+(const LaurentTrunc& a, const LaurentTrunc& b) { return laurent_linear(a, b, false); }
LaurentTrunc operator-(const LaurentTrunc& a, const LaurentTrunc& b) { return laurent_linear(a, b, true); }

LaurentTrunc operator*(const PolyFp& a, const LaurentTrunc& b) {
  const unsigned long h = b.field_size();
  if (a.prime() != h) throw std::invalid_argument("Laurent operands over different fields");
  if (a.is_zero()) return LaurentTrunc(h, b.bottom(), {0}, true);
  const long d = a.degree();
  const long top = b.top() + d;
  const long full_bottom = b.bottom();
  std::vector<unsigned long> c(static_cast<std::size_t>(top - full_bottom + 1), 0);
  for (long i = 0; i <= d; ++i) {
    unsigned long ai = a.coeff(i);
    if (ai == 0) continue;
    for (long e = b.bottom(); e <= b.top(); ++e) {
      auto& slot = c[static_cast<std::size_t>(top - (e + i))];
      slot = (slot + ai * b.coeff(e)) % h;
    }
  }
  if (b.exact()) return LaurentTrunc(h, top, c, true);
  // The unknown tail of b reaches up to exponent b.bottom() - 1 + d.
  long known_bottom = b.bottom() + d;
  c.resize(static_cast<std::size_t>(top - known_bottom + 1));
  return LaurentTrunc(h, top, c, false);
}

bool operator==(const LaurentTrunc& a, const LaurentTrunc& b) {
  if (a.h_ != b.h_ || a.exact_ != b.exact_) return false;
  if (!a.exact_ && a.bottom() != b.bottom()) return false;
  long lo = std::min(a.bottom(), b.bottom());
  long hi = std::max(a.top_, b.top_);
  for (long e = hi; e >= lo; --e) {
    unsigned long x = (e < a.bottom()) ? 0 : a.coeff(e);
    unsigned long y = (e < b.bottom()) ? 0 : b.coeff(e);
    if (x != y) return false;
  }
  return true;
}

Rational laurent_abs(const LaurentTrunc& x) {
  auto n = x.leading_exponent();
  if (!n) return Rational(0);
  return pow(Rational(static_cast<long>(x.field_size())), *n);
}

Rational laurent_distance(const LaurentTrunc& x, const PolyFp& p, const PolyFp& q, bool* upper_only) {
  if (upper_only) *upper_only = false;
  if (q.is_zero()) throw std::domain_error("Laurent distance to p/0");
  LaurentTrunc y = q * x - LaurentTrunc::from_poly(p);
  Rational H(static_cast<long>(x.field_size()));
  if (auto n = y.leading_exponent()) return pow(H, *n - q.degree());
  if (y.exact()) return Rational(0);
  if (!upper_only) throw PrecisionError("Laurent distance below truncation precision");
  *upper_only = true;
  return pow(H, y.bottom() - 1 - q.degree());
}

}  // namespace badapprox
