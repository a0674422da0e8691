#include "badapprox/rational.hpp"

#include <climits>
#include <stdexcept>

namespace badapprox {

Integer integer_from_i64(std::int64_t v) {
  if (v >= LONG_MIN && v <= LONG_MAX) return Integer(static_cast<long>(v));
  return Integer(std::to_string(v));
}

Integer ipow(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

Integer iroot(const Integer& x, unsigned long n, bool* exact) {
  if (sgn(x) < 0) throw std::invalid_argument("iroot of a negative integer");
  if (n == 0) throw std::invalid_argument("iroot with n = 0");
  Integer r;
  int e = mpz_root(r.get_mpz_t(), x.get_mpz_t(), n);
  if (exact) *exact = e != 0;
  return r;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer ceil_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Rational::Rational(const Integer& num, const Integer& den) {
  if (sgn(den) == 0) throw std::invalid_argument("zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::from_mpq(const mpq_class& v) {
  Rational r;
  r.v_ = v;
  r.v_.canonicalize();
  return r;
}

Rational Rational::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [](std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    for (std::size_t j = i; j < s.size(); ++j)
      if (s[j] < '0' || s[j] > '9')
        throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    std::string digits(s[0] == '+' ? s.substr(1) : s);
    return Integer(digits);
  };
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Integer num = parse_int(trim(text.substr(0, slash)));
  Integer den = parse_int(trim(text.substr(slash + 1)));
  return Rational(num, den);
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Integer Rational::floor() const { return floor_div(v_.get_num(), v_.get_den()); }

Integer Rational::ceil() const { return ceil_div(v_.get_num(), v_.get_den()); }

Rational& Rational::operator+=(const Rational& o) {
  v_ += o.v_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  v_ -= o.v_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  v_ *= o.v_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  v_ /= o.v_;
  return *this;
}
Rational Rational::operator-() const { return from_mpq(-v_); }

Rational pow(const Rational& base, long exp) {
  unsigned long e = static_cast<unsigned long>(exp < 0 ? -exp : exp);
  Integer n = ipow(base.num(), e);
  Integer d = ipow(base.den(), e);
  if (exp >= 0) return Rational(n, d);
  if (sgn(n) == 0) throw std::domain_error("zero to a negative power");
  return Rational(d, n);
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational root_floor_dyadic(const Rational& x, unsigned long n, unsigned long bits) {
  if (x.sign() < 0) throw std::invalid_argument("root of a negative rational");
  Integer scaled = floor_div(x.num() * ipow(Integer(2), bits * n), x.den());
  return Rational(iroot(scaled, n), ipow(Integer(2), bits));
}

}  // namespace badapprox
