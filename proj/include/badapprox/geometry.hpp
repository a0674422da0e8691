#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "badapprox/number_systems.hpp"
#include "badapprox/power_compare.hpp"
#include "badapprox/rational.hpp"

namespace badapprox {

enum class CoordKind { real, complex, padic, laurent };

/// Metric kind of one coordinate; `prime` is p (p-adic) or h (Laurent).
struct CoordSpace {
  CoordKind kind = CoordKind::real;
  unsigned long prime = 0;

  bool ultrametric() const { return kind == CoordKind::padic || kind == CoordKind::laurent; }
  friend bool operator==(const CoordSpace&, const CoordSpace&) = default;
};

std::string to_string(CoordKind kind);
CoordKind coord_kind_from_string(const std::string& s);

using Coord = std::variant<Rational, GaussianRational, PAdicTrunc, LaurentTrunc>;
using Point = std::vector<Coord>;

struct RationalFunction {
  PolyFp num;
  PolyFp den;
};

/// Coordinates of resonant points: rationals (real, or read p-adically),
/// Gaussian rationals, or quotients of polynomials over F_h.
using ResonantCoord = std::variant<Rational, GaussianRational, RationalFunction>;

/// A distance magnitude.base^magnitude.exponent. When `upper_bound` is set the
/// true distance is only known to be at most that value.
struct Distance {
  PowerTerm magnitude;
  bool upper_bound = false;
};

Distance coord_distance(const Coord& a, const Coord& b);
Distance resonant_distance(const Coord& x, const ResonantCoord& r);

/// d < bound, exactly; PrecisionError if an upper-bounded distance cannot decide.
bool distance_less(const Distance& d, const PowerProduct& bound);
/// d <= bound, exactly; same precision rule.
bool distance_at_most(const Distance& d, const PowerProduct& bound);

/// Strict lexicographic order on coordinates of the same kind.
int compare_coords(const Coord& a, const Coord& b);
int compare_points(const Point& a, const Point& b);
std::string coord_str(const Coord& c);
std::string point_str(const Point& p);

/// Closed ball for the product sup metric: d_i(x_i, center_i) <= half_widths_i.
struct Rect {
  Point center;
  std::vector<Rational> half_widths;

  std::size_t dimension() const { return center.size(); }
};

void validate_rect(const Rect& r);
bool rect_contains_point(const Rect& r, const Point& x);
bool rect_contains(const Rect& outer, const Rect& inner);
/// Interiors disjoint; ultrametric balls are disjoint or nested.
bool interiors_disjoint(const Rect& a, const Rect& b);
/// Closed rects disjoint.
bool closed_disjoint(const Rect& a, const Rect& b);
Rect dilate(const Rect& r, const Rational& factor);

/// Largest a with p^(-a) <= r, for r > 0.
long ultrametric_exponent_floor(const Rational& r, unsigned long p);

Rational sup_distance(const std::vector<Rational>& x, const std::vector<Rational>& y);

/// Determinant of the (N+1)x(N+1) matrix with rows (1, point).
Rational simplex_det(const std::vector<std::vector<Rational>>& points);
GaussianRational simplex_det(const std::vector<std::vector<GaussianRational>>& points);

struct SimplexInput {
  std::size_t dimension = 0;
  std::vector<std::vector<Rational>> points;
  std::vector<Integer> denominators;
  Integer k;
};

enum class SimplexVerdict { hypothesis_violated, collinear, counterexample };
std::string to_string(SimplexVerdict v);

SimplexVerdict simplex_lemma_check(const Rational& e_volume, const SimplexInput& input);

/// Greedy selection in input order: a rect is taken when its center lies
/// outside the doubled copy of every rect taken so far. Returns indices.
std::vector<std::size_t> select_disjoint_cover(const std::vector<Rect>& rects);

struct Subdivision {
  std::vector<Rect> children;
  std::vector<std::size_t> per_axis;
  /// Uncovered width per axis (zero for ultrametric axes).
  std::vector<Rational> fringe;
};

/// Grid of children anchored at the least corner. Complex axes use a square
/// grid of discs and keep those inside the parent disc; ultrametric axes
/// partition the ball exactly.
Subdivision subdivide(const Rect& parent, const std::vector<Rational>& child_half_widths,
                      const std::vector<CoordSpace>& spaces);

std::vector<CoordSpace> spaces_of(const Point& p);

}  // namespace badapprox
