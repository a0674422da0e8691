#include "badapprox/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace badapprox {

std::string to_string(CoordKind kind) {
  switch (kind) {
    case CoordKind::real: return "real";
    case CoordKind::complex: return "complex";
    case CoordKind::padic: return "padic";
    case CoordKind::laurent: return "laurent";
  }
  return "?";
}

CoordKind coord_kind_from_string(const std::string& s) {
  if (s == "real") return CoordKind::real;
  if (s == "complex") return CoordKind::complex;
  if (s == "padic") return CoordKind::padic;
  if (s == "laurent") return CoordKind::laurent;
  throw std::invalid_argument("unknown coordinate kind '" + s + "'");
}

// ---------------------------------------------------------------------------
// Distances

namespace {

const Rational kOne(1);
const Rational kHalf(Integer(1), Integer(2));

Distance exact_distance(Rational v) { return {{std::move(v), kOne}, false}; }

template <class T>
const T& as(const Coord& c, const char* what) {
  if (const T* p = std::get_if<T>(&c)) return *p;
  throw std::invalid_argument(std::string("coordinate kind mismatch: expected ") + what);
}

Distance padic_coord_distance(const PAdicTrunc& a, const PAdicTrunc& b) {
  if (a.prime() != b.prime()) throw std::invalid_argument("p-adic coordinates with different primes");
  if (b.exact()) {
    bool upper = false;
    Rational d = padic_distance(a, Rational(b.residue()), &upper);
    return {{d, kOne}, upper};
  }
  if (a.exact()) return padic_coord_distance(b, a);
  PAdicTrunc diff = a - b;
  if (auto v = diff.valuation())
    return exact_distance(pow(Rational(static_cast<long>(a.prime())), -static_cast<long>(*v)));
  return {{pow(Rational(static_cast<long>(a.prime())), -static_cast<long>(diff.order() + 1)), kOne}, true};
}

Distance laurent_coord_distance(const LaurentTrunc& a, const LaurentTrunc& b) {
  LaurentTrunc diff = a - b;
  Rational H(static_cast<long>(a.field_size()));
  if (auto n = diff.leading_exponent()) return exact_distance(pow(H, *n));
  if (diff.exact()) return exact_distance(Rational(0));
  return {{pow(H, diff.bottom() - 1), kOne}, true};
}

}  // namespace

Distance coord_distance(const Coord& a, const Coord& b) {
  if (a.index() != b.index()) throw std::invalid_argument("coordinate kind mismatch");
  switch (a.index()) {
    case 0: return exact_distance((std::get<Rational>(a) - std::get<Rational>(b)).abs());
    case 1: return {{(std::get<GaussianRational>(a) - std::get<GaussianRational>(b)).norm(), kHalf}, false};
    case 2: return padic_coord_distance(std::get<PAdicTrunc>(a), std::get<PAdicTrunc>(b));
    default: return laurent_coord_distance(std::get<LaurentTrunc>(a), std::get<LaurentTrunc>(b));
  }
}

Distance resonant_distance(const Coord& x, const ResonantCoord& r) {
  switch (x.index()) {
    case 0: {
      const auto* q = std::get_if<Rational>(&r);
      if (!q) throw std::invalid_argument("real coordinate needs a rational resonant coordinate");
      return exact_distance((std::get<Rational>(x) - *q).abs());
    }
    case 1: {
      const auto* q = std::get_if<GaussianRational>(&r);
      if (!q) throw std::invalid_argument("complex coordinate needs a Gaussian resonant coordinate");
      return {{(std::get<GaussianRational>(x) - *q).norm(), kHalf}, false};
    }
    case 2: {
      const auto* q = std::get_if<Rational>(&r);
      if (!q) throw std::invalid_argument("p-adic coordinate needs a rational resonant coordinate");
      bool upper = false;
      Rational d = padic_distance(std::get<PAdicTrunc>(x), *q, &upper);
      return {{d, kOne}, upper};
    }
    default: {
      const auto* q = std::get_if<RationalFunction>(&r);
      if (!q) throw std::invalid_argument("Laurent coordinate needs a rational-function resonant coordinate");
      bool upper = false;
      Rational d = laurent_distance(std::get<LaurentTrunc>(x), q->num, q->den, &upper);
      return {{d, kOne}, upper};
    }
  }
}

bool distance_less(const Distance& d, const PowerProduct& bound) {
  int c = compare_power_products({d.magnitude}, bound);
  if (!d.upper_bound) return c < 0;
  if (c < 0) return true;
  throw PrecisionError("distance comparison unresolved at this precision");
}

bool distance_at_most(const Distance& d, const PowerProduct& bound) {
  int c = compare_power_products({d.magnitude}, bound);
  if (!d.upper_bound) return c <= 0;
  if (c <= 0) return true;
  throw PrecisionError("distance comparison unresolved at this precision");
}

// ---------------------------------------------------------------------------
// Ordering and printing

int compare_coords(const Coord& a, const Coord& b) {
  if (a.index() != b.index()) throw std::invalid_argument("coordinate kind mismatch");
  auto sign = [](auto c) { return (c > 0) - (c < 0); };
  switch (a.index()) {
    case 0: return sign(cmp(std::get<Rational>(a).value(), std::get<Rational>(b).value()));
    case 1: {
      const auto& x = std::get<GaussianRational>(a);
      const auto& y = std::get<GaussianRational>(b);
      int c = sign(cmp(x.re().value(), y.re().value()));
      return c != 0 ? c : sign(cmp(x.im().value(), y.im().value()));
    }
    case 2: {
      const auto& x = std::get<PAdicTrunc>(a);
      const auto& y = std::get<PAdicTrunc>(b);
      int c = sign(cmp(x.residue(), y.residue()));
      return c != 0 ? c : sign(static_cast<long>(x.order()) - static_cast<long>(y.order()));
    }
    default: {
      const auto& x = std::get<LaurentTrunc>(a);
      const auto& y = std::get<LaurentTrunc>(b);
      long hi = std::max(x.top(), y.top());
      long lo = std::min(x.bottom(), y.bottom());
      for (long e = hi; e >= lo; --e) {
        unsigned long u = e < x.bottom() ? 0 : x.coeff(e);
        unsigned long v = e < y.bottom() ? 0 : y.coeff(e);
        if (u != v) return u < v ? -1 : 1;
      }
      return sign(x.bottom() - y.bottom());
    }
  }
}

int compare_points(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = compare_coords(a[i], b[i])) return c;
  return 0;
}

std::string coord_str(const Coord& c) {
  switch (c.index()) {
    case 0: return std::get<Rational>(c).str();
    case 1: return std::get<GaussianRational>(c).str();
    case 2: {
      const auto& x = std::get<PAdicTrunc>(c);
      return x.residue().get_str() + (x.exact() ? "" : "+O(" + std::to_string(x.prime()) + "^" +
                                                         std::to_string(x.order() + 1) + ")");
    }
    default: return std::get<LaurentTrunc>(c).str();
  }
}

std::string point_str(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + coord_str(p[i]);
  return s + ")";
}

std::vector<CoordSpace> spaces_of(const Point& p) {
  std::vector<CoordSpace> out;
  for (const auto& c : p) {
    switch (c.index()) {
      case 0: out.push_back({CoordKind::real, 0}); break;
      case 1: out.push_back({CoordKind::complex, 0}); break;
      case 2: out.push_back({CoordKind::padic, std::get<PAdicTrunc>(c).prime()}); break;
      default: out.push_back({CoordKind::laurent, std::get<LaurentTrunc>(c).field_size()}); break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rects

void validate_rect(const Rect& r) {
  if (r.center.size() != r.half_widths.size()) throw std::invalid_argument("rect dimension mismatch");
  for (const auto& l : r.half_widths)
    if (l.sign() <= 0) throw std::invalid_argument("rect half-widths must be positive");
}

bool rect_contains_point(const Rect& r, const Point& x) {
  if (x.size() != r.center.size()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!distance_at_most(coord_distance(x[i], r.center[i]), {{r.half_widths[i], kOne}})) return false;
  return true;
}

bool rect_contains(const Rect& outer, const Rect& inner) {
  if (outer.dimension() != inner.dimension()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < outer.dimension(); ++i) {
    const Rational& L = outer.half_widths[i];
    const Rational& l = inner.half_widths[i];
    const Coord& c = outer.center[i];
    const Coord& d = inner.center[i];
    switch (c.index()) {
      case 0:
        if ((std::get<Rational>(c) - std::get<Rational>(d)).abs() + l > L) return false;
        break;
      case 1: {
        if (l > L) return false;
        Rational gap = L - l;
        if ((std::get<GaussianRational>(c) - std::get<GaussianRational>(d)).norm() > gap * gap) return false;
        break;
      }
      default:
        if (l > L) return false;
        if (!distance_at_most(coord_distance(c, d), {{L, kOne}})) return false;
    }
  }
  return true;
}

namespace {

// Some coordinate separates a and b: strictly (closed rects) or weakly (interiors).
bool separated(const Rect& a, const Rect& b, bool strict) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    const Coord& c = a.center[i];
    const Coord& d = b.center[i];
    const Rational& l = a.half_widths[i];
    const Rational& m = b.half_widths[i];
    switch (c.index()) {
      case 0: {
        Rational gap = (std::get<Rational>(c) - std::get<Rational>(d)).abs();
        if (strict ? gap > l + m : gap >= l + m) return true;
        break;
      }
      case 1: {
        Rational n = (std::get<GaussianRational>(c) - std::get<GaussianRational>(d)).norm();
        Rational s = (l + m) * (l + m);
        if (strict ? n > s : n >= s) return true;
        break;
      }
      default:
        if (!distance_at_most(coord_distance(c, d), {{max(l, m), kOne}})) return true;
    }
  }
  return false;
}

}  // namespace

bool interiors_disjoint(const Rect& a, const Rect& b) { return separated(a, b, false); }
bool closed_disjoint(const Rect& a, const Rect& b) { return separated(a, b, true); }

Rect dilate(const Rect& r, const Rational& factor) {
  Rect out = r;
  for (auto& l : out.half_widths) l *= factor;
  return out;
}

long ultrametric_exponent_floor(const Rational& r, unsigned long p) {
  if (r.sign() <= 0) throw std::invalid_argument("radius must be positive");
  Rational P(static_cast<long>(p));
  double est = -std::log(r.to_double()) / std::log(static_cast<double>(p));
  long a = std::isfinite(est) ? static_cast<long>(std::ceil(est)) : 0;
  while (pow(P, -a) > r) ++a;
  while (pow(P, -(a - 1)) <= r) --a;
  return a;
}

Rational sup_distance(const std::vector<Rational>& x, const std::vector<Rational>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("sup_distance: dimension mismatch");
  Rational best(0);
  for (std::size_t i = 0; i < x.size(); ++i) best = max(best, (x[i] - y[i]).abs());
  return best;
}

// ---------------------------------------------------------------------------
// Simplex predicate

namespace {

bool is_zero_value(const Rational& x) { return x.is_zero(); }
bool is_zero_value(const GaussianRational& x) { return x.is_zero(); }

template <class T>
T determinant(std::vector<std::vector<T>> m) {
  const std::size_t n = m.size();
  T det(Rational(1));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && is_zero_value(m[pivot][col])) ++pivot;
    if (pivot == n) return T(Rational(0));
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = T(Rational(0)) - det;
    }
    det = det * m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_zero_value(m[r][col])) continue;
      T f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] = m[r][c] - f * m[col][c];
    }
  }
  return det;
}

template <class T>
std::vector<std::vector<T>> simplex_matrix(const std::vector<std::vector<T>>& points) {
  if (points.size() < 2) throw std::invalid_argument("simplex_det needs N+1 points with N >= 1");
  const std::size_t N = points.size() - 1;
  std::vector<std::vector<T>> m;
  for (const auto& p : points) {
    if (p.size() != N) throw std::invalid_argument("simplex_det: points must lie in dimension N");
    std::vector<T> row{T(Rational(1))};
    row.insert(row.end(), p.begin(), p.end());
    m.push_back(std::move(row));
  }
  return m;
}

}  // namespace

Rational simplex_det(const std::vector<std::vector<Rational>>& points) {
  return determinant(simplex_matrix(points));
}

GaussianRational simplex_det(const std::vector<std::vector<GaussianRational>>& points) {
  std::vector<std::vector<GaussianRational>> m;
  for (const auto& row : simplex_matrix(points)) {
    m.emplace_back();
    for (const auto& x : row) m.back().push_back(x);
  }
  return determinant(m);
}

std::string to_string(SimplexVerdict v) {
  switch (v) {
    case SimplexVerdict::hypothesis_violated: return "hypothesis_violated";
    case SimplexVerdict::collinear: return "collinear";
    case SimplexVerdict::counterexample: return "counterexample";
  }
  return "?";
}

SimplexVerdict simplex_lemma_check(const Rational& e_volume, const SimplexInput& in) {
  const std::size_t N = in.dimension;
  if (N < 1 || in.points.size() != N + 1 || in.denominators.size() != N + 1)
    throw std::invalid_argument("simplex_lemma_check: need N+1 points with denominators");
  Integer fact = 1;
  for (std::size_t i = 2; i <= N; ++i) fact *= static_cast<unsigned long>(i);
  Rational bound = Rational(Integer(1), fact * ipow(in.k, N + 1));
  if (e_volume > bound) return SimplexVerdict::hypothesis_violated;
  for (std::size_t i = 0; i <= N; ++i) {
    const Integer& q = in.denominators[i];
    if (q < 1 || q >= in.k) return SimplexVerdict::hypothesis_violated;
    for (const auto& x : in.points[i])
      if (!(x * Rational(q)).is_integer()) return SimplexVerdict::hypothesis_violated;
  }
  Rational det = simplex_det(in.points);
  // The hull of the points must fit in a convex set of the stated volume.
  if (det.abs() / Rational(fact) > e_volume) return SimplexVerdict::hypothesis_violated;
  return det.is_zero() ? SimplexVerdict::collinear : SimplexVerdict::counterexample;
}

// ---------------------------------------------------------------------------
// Covering selection

std::vector<std::size_t> select_disjoint_cover(const std::vector<Rect>& rects) {
  std::vector<std::size_t> chosen;
  if (rects.empty()) return chosen;
  for (const auto& r : rects) {
    validate_rect(r);
    if (r.half_widths != rects.front().half_widths)
      throw std::invalid_argument("select_disjoint_cover requires identical half-widths");
  }
  for (std::size_t i = 0; i < rects.size(); ++i) {
    bool free = true;
    for (std::size_t j : chosen) {
      if (!closed_disjoint(rects[i], rects[j])) {
        free = false;
        break;
      }
    }
    if (free) chosen.push_back(i);
  }
  return chosen;
}

// ---------------------------------------------------------------------------
// Subdivision

namespace {

struct AxisChildren {
  std::vector<Coord> centers;
  Rational fringe;
};

AxisChildren real_axis(const Rational& c, const Rational& L, const Rational& l) {
  AxisChildren out;
  Integer m = (L / l).floor();
  Rational lo = c - L;
  for (Integer j = 0; j < m; ++j) out.centers.emplace_back(lo + l * Rational(2 * j + 1));
  out.fringe = Rational(2) * (L - l * Rational(m));
  return out;
}

AxisChildren complex_axis(const GaussianRational& c, const Rational& L, const Rational& l) {
  AxisChildren out;
  Integer m = (L / l).floor();
  Rational gap = L - l;
  for (Integer a = 0; a < m; ++a) {
    Rational re = c.re() - L + l * Rational(2 * a + 1);
    for (Integer b = 0; b < m; ++b) {
      GaussianRational z(re, c.im() - L + l * Rational(2 * b + 1));
      if ((z - c).norm() <= gap * gap) out.centers.emplace_back(z);
    }
  }
  out.fringe = Rational(2) * (L - l * Rational(m));
  return out;
}

long exact_power_exponent(const Rational& r, unsigned long p) {
  long a = ultrametric_exponent_floor(r, p);
  if (pow(Rational(static_cast<long>(p)), -a) != r)
    throw std::invalid_argument("ultrametric half-widths must be powers of the prime");
  return a;
}

AxisChildren padic_axis(const PAdicTrunc& c, const Rational& L, const Rational& l) {
  const unsigned long p = c.prime();
  long a = exact_power_exponent(L, p), b = exact_power_exponent(l, p);
  AxisChildren out;
  out.fringe = Rational(0);
  Integer step = a > 0 ? ipow(Integer(p), static_cast<unsigned long>(a)) : Integer(1);
  if (!c.exact() && static_cast<long>(c.order()) + 1 < a)
    throw PrecisionError("parent p-adic center known below the ball radius");
  Integer base = a > 0 ? Integer(c.residue() % step) : Integer(0);
  Integer count = ipow(Integer(p), static_cast<unsigned long>(b - std::max(a, 0L)));
  for (Integer j = 0; j < count; ++j)
    out.centers.emplace_back(PAdicTrunc::exact_integer(p, base + j * step, c.order()));
  return out;
}

AxisChildren laurent_axis(const LaurentTrunc& c, const Rational& L, const Rational& l) {
  const unsigned long h = c.field_size();
  long a = exact_power_exponent(L, h), b = exact_power_exponent(l, h);
  AxisChildren out;
  out.fringe = Rational(0);
  // Coefficients at exponents > -a are fixed by the parent; -a .. -(b-1) vary.
  long fixed_low = -a + 1;
  long new_bottom = std::min(-(b - 1), fixed_low);
  long top = std::max(c.top(), fixed_low);
  std::vector<unsigned long> prefix;
  for (long e = top; e >= fixed_low; --e) prefix.push_back(c.coeff(e));
  long free = b - a;
  Integer count = ipow(Integer(h), static_cast<unsigned long>(free));
  for (Integer j = 0; j < count; ++j) {
    std::vector<unsigned long> coeffs = prefix;
    std::vector<unsigned long> digits(static_cast<std::size_t>(free), 0);
    Integer r = j;
    for (long i = free - 1; i >= 0; --i) {
      Integer d;
      mpz_fdiv_qr_ui(r.get_mpz_t(), d.get_mpz_t(), r.get_mpz_t(), h);
      digits[static_cast<std::size_t>(i)] = d.get_ui();
    }
    coeffs.insert(coeffs.end(), digits.begin(), digits.end());
    coeffs.resize(static_cast<std::size_t>(top - new_bottom + 1), 0);
    out.centers.emplace_back(LaurentTrunc(h, top, coeffs, true));
  }
  return out;
}

}  // namespace

Subdivision subdivide(const Rect& parent, const std::vector<Rational>& child_half_widths,
                      const std::vector<CoordSpace>& spaces) {
  validate_rect(parent);
  const std::size_t t = parent.dimension();
  if (child_half_widths.size() != t || spaces.size() != t) throw std::invalid_argument("subdivide: dimension mismatch");
  for (std::size_t i = 0; i < t; ++i) {
    if (child_half_widths[i].sign() <= 0) throw std::invalid_argument("subdivide: zero child width");
    if (child_half_widths[i] > parent.half_widths[i])
      throw std::invalid_argument("subdivide: child wider than parent");
  }
  std::vector<AxisChildren> axes;
  for (std::size_t i = 0; i < t; ++i) {
    const Coord& c = parent.center[i];
    const Rational& L = parent.half_widths[i];
    const Rational& l = child_half_widths[i];
    switch (spaces[i].kind) {
      case CoordKind::real: axes.push_back(real_axis(as<Rational>(c, "real"), L, l)); break;
      case CoordKind::complex: axes.push_back(complex_axis(as<GaussianRational>(c, "complex"), L, l)); break;
      case CoordKind::padic: axes.push_back(padic_axis(as<PAdicTrunc>(c, "p-adic"), L, l)); break;
      case CoordKind::laurent: axes.push_back(laurent_axis(as<LaurentTrunc>(c, "Laurent"), L, l)); break;
    }
  }
  Subdivision out;
  std::size_t total = 1;
  for (const auto& a : axes) {
    out.per_axis.push_back(a.centers.size());
    out.fringe.push_back(a.fringe);
    total *= a.centers.size();
  }
  out.children.reserve(total);
  std::vector<std::size_t> idx(t, 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rem = n;
    for (std::size_t i = t; i-- > 0;) {
      idx[i] = rem % axes[i].centers.size();
      rem /= axes[i].centers.size();
    }
    Rect child;
    child.half_widths = child_half_widths;
    for (std::size_t i = 0; i < t; ++i) child.center.push_back(axes[i].centers[idx[i]]);
    out.children.push_back(std::move(child));
  }
  return out;
}

}  // namespace badapprox
