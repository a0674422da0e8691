#include "badapprox/instances.hpp"

#include <algorithm>
#include <stdexcept>

#include "badapprox/dimension_lab.hpp"

namespace badapprox {
namespace {

Integer ipow_l(const Integer& k, long e) { return ipow(k, static_cast<unsigned long>(std::max(0L, e))); }

std::vector<CoordSpace> repeat_space(CoordKind kind, std::size_t n, unsigned long prime = 0) {
  return std::vector<CoordSpace>(n, CoordSpace{kind, prime});
}

// Odometer over per-axis choice lists; calls f with one index per axis.
template <class F>
void for_each_product(const std::vector<std::size_t>& sizes, F&& f) {
  for (std::size_t s : sizes)
    if (s == 0) return;
  std::vector<std::size_t> idx(sizes.size(), 0);
  while (true) {
    f(idx);
    std::size_t axis = sizes.size();
    while (axis > 0) {
      --axis;
      if (++idx[axis] < sizes[axis]) break;
      idx[axis] = 0;
      if (axis == 0) return;
    }
    if (sizes.empty()) return;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Real rationals

RealRationalProvider::RealRationalProvider(std::size_t n) : spaces_(repeat_space(CoordKind::real, n)) {
  if (n == 0) throw std::invalid_argument("provider dimension must be positive");
}

std::vector<ResonantPoint> RealRationalProvider::enumerate(long m, const Integer& k, const Rect& region) const {
  if (m < 1) throw std::invalid_argument("height layer must be at least 1");
  const std::size_t n = spaces_.size();
  std::vector<Rational> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rational& c = std::get<Rational>(region.center.at(i));
    lo[i] = max(Rational(0), c - region.half_widths.at(i));
    hi[i] = min(Rational(1), c + region.half_widths.at(i));
    if (lo[i] > hi[i]) return {};
  }
  const Integer q_lo = ipow_l(k, m - 1), q_hi = ipow_l(k, m);
  std::vector<ResonantPoint> out;
  for (const auto& [p1, q] : enumerate_rationals(lo[0], hi[0], q_lo, q_hi)) {
    std::vector<Integer> first(n), count(n);
    first[0] = p1;
    count[0] = 1;
    bool empty = false;
    for (std::size_t i = 1; i < n && !empty; ++i) {
      first[i] = (lo[i] * Rational(q)).ceil();
      Integer last = (hi[i] * Rational(q)).floor();
      count[i] = last - first[i] + 1;
      empty = count[i] <= 0;
    }
    if (empty) continue;
    std::vector<std::size_t> sizes;
    for (const auto& c : count) sizes.push_back(c.get_ui());
    for_each_product(sizes, [&](const std::vector<std::size_t>& idx) {
      ResonantPoint r;
      r.height = {Rational(q), Rational(1)};
      for (std::size_t i = 0; i < n; ++i) {
        Integer p = first[i] + static_cast<unsigned long>(idx[i]);
        r.label.push_back(p);
        r.coords.emplace_back(Rational(p, q));
      }
      r.label.push_back(q);
      out.push_back(std::move(r));
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian

GaussianProvider::GaussianProvider(std::size_t n) : spaces_(repeat_space(CoordKind::complex, n)) {
  if (n == 0) throw std::invalid_argument("provider dimension must be positive");
}

std::vector<ResonantPoint> GaussianProvider::enumerate(long m, const Integer& k, const Rect& region) const {
  if (m < 1) throw std::invalid_argument("height layer must be at least 1");
  const std::size_t n = spaces_.size();
  const Integer A = ipow_l(k, 2 * (m - 1)), B = ipow_l(k, 2 * m);
  const Integer K = iroot(B - 1, 2);
  std::vector<ResonantPoint> out;
  for (Integer a = -K; a <= K; ++a) {
    for (Integer b = -K; b <= K; ++b) {
      const Integer norm = a * a + b * b;
      if (norm == 0 || norm < A || norm >= B) continue;
      const GaussianRational q{Rational(a), Rational(b)};
      std::vector<std::vector<GaussInt>> choices(n);
      bool empty = false;
      for (std::size_t i = 0; i < n && !empty; ++i) {
        const auto& z = std::get<GaussianRational>(region.center.at(i));
        const Rational& l = region.half_widths.at(i);
        GaussianRational w = q * z;
        Rational r2 = l * l * Rational(norm);
        Integer s = iroot(r2.ceil(), 2) + 1;
        Integer re_lo = w.re().floor() - s, re_hi = w.re().ceil() + s;
        Integer im_lo = w.im().floor() - s, im_hi = w.im().ceil() + s;
        for (Integer x = re_lo; x <= re_hi; ++x)
          for (Integer y = im_lo; y <= im_hi; ++y) {
            Rational dx = Rational(x) - w.re(), dy = Rational(y) - w.im();
            if (dx * dx + dy * dy <= r2) choices[i].push_back({x, y});
          }
        empty = choices[i].empty();
      }
      if (empty) continue;
      std::vector<std::size_t> sizes;
      for (const auto& c : choices) sizes.push_back(c.size());
      const GaussInt gq{a, b};
      for_each_product(sizes, [&](const std::vector<std::size_t>& idx) {
        ResonantPoint r;
        r.height = {Rational(norm), Rational(Integer(1), Integer(2))};
        for (std::size_t i = 0; i < n; ++i) {
          const GaussInt& p = choices[i][idx[i]];
          r.label.push_back(p.re);
          r.label.push_back(p.im);
          r.coords.emplace_back(GaussianRational::ratio(p, gq));
        }
        r.label.push_back(a);
        r.label.push_back(b);
        out.push_back(std::move(r));
      });
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// p-adic

PAdicProvider::PAdicProvider(unsigned long p, std::size_t n) : p_(p), spaces_(repeat_space(CoordKind::padic, n, p)) {
  if (!is_prime(Integer(p))) throw std::invalid_argument("p must be prime");
  if (n == 0) throw std::invalid_argument("provider dimension must be positive");
}

std::vector<ResonantPoint> PAdicProvider::enumerate(long m, const Integer& k, const Rect& region) const {
  if (m < 1) throw std::invalid_argument("height layer must be at least 1");
  const std::size_t n = spaces_.size();
  const Integer B = ipow_l(k, m), B_lo = ipow_l(k, m - 1);
  std::vector<long> radius_exp(n);
  for (std::size_t i = 0; i < n; ++i) radius_exp[i] = ultrametric_exponent_floor(region.half_widths.at(i), p_);
  std::vector<ResonantPoint> out;
  for (Integer q = 1; q < B; ++q) {
    const long v = static_cast<long>(*padic_valuation(q, p_));
    std::vector<std::vector<Integer>> choices(n);
    bool empty = false;
    for (std::size_t i = 0; i < n && !empty; ++i) {
      const auto& c = std::get<PAdicTrunc>(region.center.at(i));
      const long e = radius_exp[i] + v;
      Integer mod = 1, res = 0;
      if (e > 0) {
        if (!c.exact() && static_cast<long>(c.order()) + 1 < e)
          throw PrecisionError("p-adic center known only to order " + std::to_string(c.order()));
        mod = ipow(Integer(p_), static_cast<unsigned long>(e));
        res = q * c.residue();
        mpz_fdiv_r(res.get_mpz_t(), res.get_mpz_t(), mod.get_mpz_t());
      }
      // r in (-B, B) with r = res mod `mod`.
      Integer r = res + mod * ceil_div(-B + 1 - res, mod);
      for (; r < B; r += mod) choices[i].push_back(r);
      empty = choices[i].empty();
    }
    if (empty) continue;
    std::vector<std::size_t> sizes;
    for (const auto& c : choices) sizes.push_back(c.size());
    for_each_product(sizes, [&](const std::vector<std::size_t>& idx) {
      Integer height = q;
      for (std::size_t i = 0; i < n; ++i) {
        Integer a = abs(choices[i][idx[i]]);
        if (a > height) height = a;
      }
      if (height < B_lo) return;
      ResonantPoint r;
      r.height = {Rational(height), Rational(1)};
      for (std::size_t i = 0; i < n; ++i) {
        r.label.push_back(choices[i][idx[i]]);
        r.coords.emplace_back(Rational(choices[i][idx[i]], q));
      }
      r.label.push_back(q);
      out.push_back(std::move(r));
    });
  }
  return out;
}

bool padic_valuation_bound_holds(const Integer& det_numerator, unsigned long p, const Integer& k, long n) {
  auto v = padic_valuation(det_numerator, p);
  if (!v) return true;
  return ipow(Integer(p), *v) < Integer(6) * ipow_l(k, 3 * n + 3);
}

bool laurent_det_bound_holds(const PolyFp& det_numerator, long denominator_degree, unsigned long k_exp, long n) {
  if (det_numerator.is_zero()) return true;
  return det_numerator.degree() - denominator_degree > -3 * (n + 1) * static_cast<long>(k_exp);
}

// ---------------------------------------------------------------------------
// Laurent series

LaurentProvider::LaurentProvider(unsigned long h, std::size_t n) : h_(h), spaces_(repeat_space(CoordKind::laurent, n, h)) {
  if (!is_prime(Integer(h))) throw std::invalid_argument("h must be prime");
  if (n == 0) throw std::invalid_argument("provider dimension must be positive");
}

std::vector<ResonantPoint> LaurentProvider::enumerate(long m, const Integer& k, const Rect& region) const {
  if (m < 1) throw std::invalid_argument("height layer must be at least 1");
  long k_exp = 0;
  for (Integer x = k; x > 1; x /= h_, ++k_exp)
    if (x % h_ != 0) throw std::invalid_argument("k must be a power of h");
  const std::size_t n = spaces_.size();
  std::vector<long> radius_exp(n);
  for (std::size_t i = 0; i < n; ++i) radius_exp[i] = ultrametric_exponent_floor(region.half_widths.at(i), h_);
  const Integer H(h_);
  std::vector<ResonantPoint> out;
  for (long d = (m - 1) * k_exp; d < m * k_exp; ++d) {
    const Integer q_end = ipow(H, static_cast<unsigned long>(d + 1));
    for (Integer qi = ipow(H, static_cast<unsigned long>(d)); qi < q_end; ++qi) {
      const PolyFp q = PolyFp::from_index(h_, qi);
      std::vector<std::pair<Integer, Integer>> ranges(n);  // first p index, count
      bool empty = false;
      for (std::size_t i = 0; i < n && !empty; ++i) {
        const LaurentTrunc qc = q * std::get<LaurentTrunc>(region.center.at(i));
        const long M = d - radius_exp[i];
        if (!qc.exact() && qc.bottom() > M + 1) throw PrecisionError("Laurent center truncated above the ball radius");
        for (long e = M + 1; e < 0 && !empty; ++e) empty = qc.coeff(e) != 0;
        if (empty) break;
        Integer base = 0;
        for (long e = qc.top(); e >= std::max(M + 1, 0L); --e) base += Integer(qc.coeff(e)) * ipow(H, static_cast<unsigned long>(e));
        ranges[i] = {base, M >= 0 ? ipow(H, static_cast<unsigned long>(M + 1)) : Integer(1)};
      }
      if (empty) continue;
      std::vector<std::size_t> sizes;
      for (const auto& r : ranges) sizes.push_back(r.second.get_ui());
      for_each_product(sizes, [&](const std::vector<std::size_t>& idx) {
        ResonantPoint r;
        r.height = {Rational(ipow(H, static_cast<unsigned long>(d))), Rational(1)};
        for (std::size_t i = 0; i < n; ++i) {
          Integer pi = ranges[i].first + static_cast<unsigned long>(idx[i]);
          r.label.push_back(pi);
          r.coords.emplace_back(RationalFunction{PolyFp::from_index(h_, pi), q});
        }
        r.label.push_back(qi);
        out.push_back(std::move(r));
      });
    }
  }
  return out;
}

std::string LaurentProvider::label_string(const ResonantPoint& r) const {
  std::string s = "(";
  for (std::size_t i = 0; i < r.label.size(); ++i) s += (i ? "," : "") + PolyFp::from_index(h_, r.label[i]).str();
  return s + ")";
}

// ---------------------------------------------------------------------------
// Covering ground sets

Candidates CoveringGround::candidates(const Rect& parent, const std::vector<Rational>& half_widths) const {
  const std::size_t t = parent.dimension();
  if (half_widths.size() != t) throw std::invalid_argument("candidate dimension mismatch");
  std::vector<std::vector<Rational>> axes(t);
  for (std::size_t i = 0; i < t; ++i) {
    const auto* c = std::get_if<Rational>(&parent.center[i]);
    if (!c) throw std::invalid_argument("covering ground sets support real coordinates only");
    const Rational& L = parent.half_widths[i];
    const Rational& w = half_widths[i];
    if (w.sign() <= 0 || w > L) throw std::invalid_argument("candidate half-width must lie in (0, parent]");
    std::vector<Rational> pts = axis_points(*c - L + w, *c + L - w, w);
    std::vector<Rect> line;
    for (const auto& p : pts) line.push_back({{p}, {w}});
    for (std::size_t j : select_disjoint_cover(line)) axes[i].push_back(pts[j]);
  }
  Candidates out;
  out.fringe.assign(t, Rational(0));
  std::vector<std::size_t> sizes;
  for (const auto& a : axes) sizes.push_back(a.size());
  for_each_product(sizes, [&](const std::vector<std::size_t>& idx) {
    Rect r;
    r.half_widths = half_widths;
    for (std::size_t i = 0; i < t; ++i) r.center.emplace_back(axes[i][idx[i]]);
    out.rects.push_back(std::move(r));
  });
  return out;
}

CylinderGround::CylinderGround(long m) : m_(m) {
  if (m < 2) throw std::invalid_argument("M must be at least 2");
}

std::vector<Rational> CylinderGround::axis_points(const Rational& lo, const Rational& hi,
                                                  const Rational& resolution) const {
  std::vector<Rational> out;
  if (lo > hi) return out;
  // Cylinder of [0; a_1..a_d] has endpoints p_d/q_d and (p_d + p_{d-1})/(q_d + q_{d-1}).
  auto rec = [&](auto&& self, const Integer& pm, const Integer& qm, const Integer& p, const Integer& q) -> void {
    Rational e1(p, q), e2(p + pm, q + qm);
    Rational a = min(e1, e2), b = max(e1, e2);
    if (b < lo || a > hi) return;
    if (b - a < resolution) {
      Rational rep(Integer(m_) * p + pm, Integer(m_) * q + qm);
      if (lo <= rep && rep <= hi) out.push_back(rep);
      return;
    }
    for (long d = 1; d <= m_; ++d) self(self, p, q, Integer(d) * p + pm, Integer(d) * q + qm);
  };
  rec(rec, Integer(1), Integer(0), Integer(0), Integer(1));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Rational> CantorGround::axis_points(const Rational& lo, const Rational& hi,
                                                const Rational& resolution) const {
  std::vector<Rational> out;
  if (lo > hi) return out;
  const Rational third(Integer(1), Integer(3));
  auto rec = [&](auto&& self, const Rational& left, const Rational& len) -> void {
    if (left + len < lo || left > hi) return;
    if (len < resolution) {
      Rational rep = left + len / Rational(4);
      if (lo <= rep && rep <= hi) out.push_back(rep);
      return;
    }
    Rational sub = len * third;
    self(self, left, sub);
    self(self, left + Rational(2) * sub, sub);
  };
  rec(rec, Rational(0), Rational(1));
  return out;
}

Rational cf_value(const std::vector<long>& quotients) {
  ContinuedFraction cf;
  cf.quotients.push_back(0);
  for (long a : quotients) cf.quotients.push_back(a);
  return cf.value();
}

// ---------------------------------------------------------------------------
// Instances

ConstructionParams InstanceSpec::params(long depth, Mode mode) const {
  ConstructionParams p;
  p.k = k;
  p.theta = theta;
  p.kappa1 = kappa1;
  p.kappa2 = kappa2;
  p.depth = depth;
  p.mode = mode;
  p.rho = rho;
  p.delta = delta;
  return p;
}

Rational InstanceSpec::c_k() const { return default_c_k(params(1, Mode::greedy)); }

namespace {

// x^(1/n): exact when rational, otherwise rounded down to 64 fractional bits.
Rational root_rounded_down(const Rational& x, unsigned long n) {
  bool en = false, ed = false;
  Integer a = iroot(x.num(), n, &en), b = iroot(x.den(), n, &ed);
  if (en && ed) return Rational(a, b);
  return root_floor_dyadic(x, n, 64);
}

Integer factorial(std::size_t n) {
  Integer f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<unsigned long>(i);
  return f;
}

std::string join(const std::vector<Rational>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s;
}

void check_weights(std::vector<Rational>& w) {
  if (w.empty()) throw std::invalid_argument("exponent list is empty");
  Rational sum(0);
  for (const auto& x : w) {
    if (x.sign() < 0) throw std::invalid_argument("exponents must be nonnegative");
    sum += x;
  }
  if (sum != Rational(1)) throw std::invalid_argument("exponents must sum to 1");
  std::sort(w.begin(), w.end());
}

Rational real_root_coordinate(std::size_t r) {
  static const Rational table[] = {Rational(Integer(309), Integer(500)), Rational(Integer(2071), Integer(5000)),
                                   Rational(Integer(183), Integer(250))};
  if (r < 3) return table[r];
  // Fractional part of (r + 1) * golden ratio to four digits.
  Integer v = (Integer(static_cast<unsigned long>(r + 1)) * 6180) % 10000;
  return Rational(v, Integer(10000));
}

Point search_ultrametric_root(const InstanceSpec& spec, const std::function<Coord(const Integer&, std::size_t)>& make) {
  ScaleLadder ladder(spec.params(1, Mode::greedy), spec.spaces);
  std::vector<Rational> hw = ladder.half_widths(1);
  for (Integer trial = 0; trial < 100000; ++trial) {
    Point c;
    for (std::size_t i = 0; i < spec.dimension(); ++i) c.push_back(make(trial, i));
    if (spec.provider->enumerate(1, spec.k, {c, hw}).empty()) return c;
  }
  throw std::runtime_error("no root center avoids the resonant points of height below k");
}

}  // namespace

Rational theta_simultaneous(std::size_t n, const Integer& k) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  Integer den = ipow(Integer(2), n) * factorial(n) * ipow(k, n + 1);
  return root_rounded_down(Rational(Integer(1), den), n);
}

InstanceSpec instance_bad_N(std::vector<Rational> exponents, const Integer& k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  check_weights(exponents);
  const std::size_t n = exponents.size();
  InstanceSpec s;
  s.name = "bad_N";
  s.spaces = repeat_space(CoordKind::real, n);
  for (const auto& i : exponents) s.rho.exponents.push_back(Rational(1) + i);
  s.delta.assign(n, Rational(1));
  s.k = k;
  s.theta = theta_simultaneous(n, k);
  s.theta_formula = "1/2 (N! k^(N+1))^(-1/N)";
  s.kappa1 = Rational(Integer(1), ipow(Integer(4), n));
  s.kappa2 = s.kappa1 / Rational(2);
  s.provider = std::make_shared<RealRationalProvider>(n);
  s.ground = std::make_shared<FullCubeGround>(s.spaces);
  for (std::size_t r = 0; r < n; ++r) s.root_center.emplace_back(real_root_coordinate(r));
  s.config = {{"instance", "bad_N"}, {"k", k.get_str()}, {"exponents", join(exponents)}};
  return s;
}

InstanceSpec instance_bad_interval(const Integer& k) {
  InstanceSpec s = instance_bad_N({Rational(1)}, k);
  s.name = "bad_interval";
  s.theta_formula = "1/2 k^-2";
  s.config = {{"instance", "bad_interval"}, {"k", k.get_str()}};
  return s;
}

InstanceSpec instance_bad_ij(Rational i, Rational j, const Integer& k) {
  if (i + j != Rational(1)) throw std::invalid_argument("need i + j = 1");
  InstanceSpec s = instance_bad_N({i, j}, k);
  s.name = "bad_ij";
  s.theta_formula = "1/2 (2 k^3)^(-1/2)";
  s.config = {{"instance", "bad_ij"}, {"k", k.get_str()}, {"exponents", join({min(i, j), max(i, j)})}};
  return s;
}

InstanceSpec instance_FM_product(long M, Rational i, Rational j, const Integer& k, std::optional<Rational> delta) {
  InstanceSpec s = instance_bad_ij(i, j, k);
  s.name = "fm_product";
  s.ground = std::make_shared<CylinderGround>(M);
  Rational d = delta ? *delta : estimate_cylinder_delta(M);
  s.delta.assign(2, d);
  std::vector<long> a, b;
  for (int r = 0; r < 12; ++r) {
    a.push_back(r % 2 ? 2 : 1);
    b.push_back(r % 2 ? 1 : 2);
  }
  a.push_back(M);
  b.push_back(M);
  s.root_center = {cf_value(a), cf_value(b)};
  s.config = {{"instance", "fm_product"}, {"k", k.get_str()}, {"M", std::to_string(M)},
              {"exponents", join({min(i, j), max(i, j)})}};
  if (delta) s.config["delta"] = delta->str();
  return s;
}

InstanceSpec instance_cantor_interval(const Integer& k) {
  InstanceSpec s = instance_bad_interval(k);
  s.name = "cantor_interval";
  s.ground = std::make_shared<CantorGround>();
  s.delta = {Rational(Integer(630930), Integer(1000000))};
  // Ternary digits 0,2,2,0 repeated, then a point of the remaining interval.
  Rational x(0), scale(1);
  const int digits[] = {0, 2, 2, 0};
  for (int r = 0; r < 20; ++r) {
    scale /= Rational(3);
    x += Rational(digits[r % 4]) * scale;
  }
  s.root_center = {x + scale / Rational(4)};
  s.config = {{"instance", "cantor_interval"}, {"k", k.get_str()}};
  return s;
}

InstanceSpec instance_gaussian(Rational i, Rational j, const Integer& k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  std::vector<Rational> w{i, j};
  check_weights(w);
  InstanceSpec s;
  s.name = "gaussian";
  s.spaces = repeat_space(CoordKind::complex, 2);
  s.rho.exponents = {Rational(1) + w[0], Rational(1) + w[1]};
  s.delta.assign(2, Rational(2));
  s.k = k;
  s.theta = root_rounded_down(Rational(Integer(1), Integer(8) * ipow(k, 3)), 2);
  s.theta_formula = "(8 k^3)^(-1/2)";
  s.kappa1 = Rational(Integer(1), Integer(32));
  s.kappa2 = Rational(Integer(1), Integer(64));
  s.provider = std::make_shared<GaussianProvider>(2);
  s.ground = std::make_shared<FullCubeGround>(s.spaces);
  s.root_center = {GaussianRational(real_root_coordinate(0), real_root_coordinate(1)),
                   GaussianRational(real_root_coordinate(2), Rational(Integer(3), Integer(10)))};
  s.config = {{"instance", "gaussian"}, {"k", k.get_str()}, {"exponents", join(w)}};
  return s;
}

InstanceSpec instance_padic(unsigned long p, Rational i, Rational j, unsigned long s_exp,
                            std::optional<unsigned long> t_exp) {
  if (!is_prime(Integer(p))) throw std::invalid_argument("p must be prime");
  if (s_exp < 1) throw std::invalid_argument("s must be at least 1");
  std::vector<Rational> w{i, j};
  check_weights(w);
  const Integer k = ipow(Integer(p), s_exp);
  const Integer bound = Integer(6) * ipow(k, 3);
  unsigned long t = 0;
  if (t_exp) {
    t = *t_exp;
    if (ipow(Integer(p), 2 * t) <= bound) throw std::invalid_argument("theta constraint p^(-2t) < 1/(6 k^3) violated");
  } else {
    while (ipow(Integer(p), 2 * t) <= bound) ++t;
  }
  InstanceSpec s;
  s.name = "padic";
  s.spaces = repeat_space(CoordKind::padic, 2, p);
  s.rho.exponents = {Rational(1) + w[0], Rational(1) + w[1]};
  s.delta.assign(2, Rational(1));
  s.k = k;
  s.theta = pow(Rational(static_cast<long>(p)), -static_cast<long>(t));
  s.theta_formula = "p^(-t)";
  s.kappa1 = Rational(Integer(1), Integer(4));
  s.kappa2 = Rational(Integer(1), Integer(8));
  s.provider = std::make_shared<PAdicProvider>(p, 2);
  s.ground = std::make_shared<FullCubeGround>(s.spaces);
  s.root_center = search_ultrametric_root(s, [p](const Integer& trial, std::size_t axis) {
    Integer v = axis == 0 ? Integer(5461) + 7 * trial : Integer(3277) + 11 * trial;
    return Coord(PAdicTrunc::exact_integer(p, v));
  });
  s.config = {{"instance", "padic"}, {"p", std::to_string(p)}, {"s", std::to_string(s_exp)},
              {"t", std::to_string(t)}, {"exponents", join(w)}};
  return s;
}

InstanceSpec instance_power_series(unsigned long h, Rational i, Rational j, unsigned long k_exp) {
  if (!is_prime(Integer(h))) throw std::invalid_argument("h must be prime");
  if (k_exp < 1) throw std::invalid_argument("k must be h^s with s >= 1");
  std::vector<Rational> w{i, j};
  check_weights(w);
  const unsigned long t = (3 * k_exp + 1) / 2;
  InstanceSpec s;
  s.name = "power_series";
  s.spaces = repeat_space(CoordKind::laurent, 2, h);
  s.rho.exponents = {Rational(1) + w[0], Rational(1) + w[1]};
  s.delta.assign(2, Rational(1));
  s.k = ipow(Integer(h), k_exp);
  s.theta = pow(Rational(static_cast<long>(h)), -static_cast<long>(t));
  s.theta_formula = "h^(-ceil(3 s / 2))";
  s.kappa1 = Rational(Integer(1), Integer(4));
  s.kappa2 = Rational(Integer(1), Integer(8));
  s.provider = std::make_shared<LaurentProvider>(h, 2);
  s.ground = std::make_shared<FullCubeGround>(s.spaces);
  s.root_center = search_ultrametric_root(s, [h](const Integer& trial, std::size_t axis) {
    // Coefficients of X^0 .. X^-15 from a fixed pattern perturbed by the trial index.
    Integer v = (axis == 0 ? Integer(0xB6D5) : Integer(0x9A73)) + (axis == 0 ? 7 : 13) * trial;
    std::vector<unsigned long> coeffs(16);
    for (std::size_t e = 0; e < 16; ++e) {
      Integer d;
      mpz_fdiv_qr_ui(v.get_mpz_t(), d.get_mpz_t(), v.get_mpz_t(), h);
      coeffs[e] = d.get_ui();
    }
    return Coord(LaurentTrunc(h, 0, coeffs, true));
  });
  s.config = {{"instance", "power_series"}, {"h", std::to_string(h)}, {"k", s.k.get_str()},
              {"exponents", join(w)}};
  return s;
}

}  // namespace badapprox
