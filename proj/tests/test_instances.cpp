#include <gtest/gtest.h>

#include <algorithm>

#include "badapprox/instances.hpp"
#include "badapprox/serialization.hpp"
#include "support.hpp"

using namespace badapprox;
using badapprox::testing::Gen;

namespace {

Rational R(long p, long q = 1) { return Rational(Integer(p), Integer(q)); }

using Labels = std::vector<std::vector<Integer>>;

Labels labels_of(const std::vector<ResonantPoint>& rs) {
  Labels out;
  for (const auto& r : rs) out.push_back(r.label);
  std::sort(out.begin(), out.end());
  return out;
}

Labels sorted(Labels l) {
  std::sort(l.begin(), l.end());
  return l;
}

PolyFp poly_det3(const std::array<std::array<PolyFp, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

bool all_triples_collinear(const std::vector<ResonantPoint>& rs, CoordKind kind, unsigned long h) {
  for (std::size_t a = 0; a < rs.size(); ++a)
    for (std::size_t b = a + 1; b < rs.size(); ++b)
      for (std::size_t c = b + 1; c < rs.size(); ++c) {
        const ResonantPoint* t[3] = {&rs[a], &rs[b], &rs[c]};
        if (kind == CoordKind::complex) {
          std::vector<std::vector<GaussianRational>> pts;
          for (auto* r : t)
            pts.push_back({std::get<GaussianRational>(r->coords[0]), std::get<GaussianRational>(r->coords[1])});
          if (!simplex_det(pts).is_zero()) return false;
        } else if (kind == CoordKind::laurent) {
          std::array<std::array<PolyFp, 3>, 3> m;
          for (int i = 0; i < 3; ++i) {
            const auto& f0 = std::get<RationalFunction>(t[i]->coords[0]);
            const auto& f1 = std::get<RationalFunction>(t[i]->coords[1]);
            m[i] = {f0.den, f0.num, f1.num};
            EXPECT_EQ(f0.den, f1.den);
          }
          if (!poly_det3(m).is_zero()) return false;
          (void)h;
        } else {
          std::vector<std::vector<Rational>> pts;
          for (auto* r : t) pts.push_back({std::get<Rational>(r->coords[0]), std::get<Rational>(r->coords[1])});
          if (!simplex_det(pts).is_zero()) return false;
        }
      }
  return true;
}

}  // namespace

TEST(Theta, PerInstanceValues) {
  EXPECT_EQ(instance_bad_interval(Integer(10)).theta, R(1, 200));
  const Rational step = pow(R(2), -64);
  Rational t = instance_bad_ij(R(1, 2), R(1, 2), Integer(10)).theta;
  EXPECT_LE(t * t, R(1, 8000));
  EXPECT_GT((t + step) * (t + step), R(1, 8000));
  EXPECT_NEAR(t.to_double(), 0.01118, 1e-5);
  Rational tg = instance_gaussian(R(1, 2), R(1, 2), Integer(4)).theta;
  EXPECT_LE(tg * tg, R(1, 512));
  EXPECT_GT((tg + step) * (tg + step), R(1, 512));
  Rational t3 = instance_bad_N({R(1, 3), R(1, 3), R(1, 3)}, Integer(5)).theta;
  EXPECT_LE(pow(t3, 3) * R(8 * 6 * 625), R(1));
  EXPECT_EQ(instance_padic(2, R(1, 2), R(1, 2), 2).theta, R(1, 32));
  EXPECT_EQ(instance_power_series(2, R(1, 2), R(1, 2), 2).theta, R(1, 8));
  EXPECT_EQ(instance_power_series(2, R(1, 2), R(1, 2), 3).theta, R(1, 32));
}

TEST(Instances, ParameterValidation) {
  EXPECT_THROW(instance_bad_ij(R(1, 2), R(1, 3), Integer(10)), std::invalid_argument);
  EXPECT_THROW(instance_bad_N({R(1, 2), R(-1, 2), R(1)}, Integer(10)), std::invalid_argument);
  EXPECT_THROW(instance_gaussian(R(1), R(1), Integer(4)), std::invalid_argument);
  EXPECT_THROW(instance_padic(4, R(1, 2), R(1, 2), 1), std::invalid_argument);
  EXPECT_THROW(instance_padic(2, R(1, 2), R(1, 2), 2, 4), std::invalid_argument);
  EXPECT_NO_THROW(instance_padic(2, R(1, 2), R(1, 2), 2, 5));
  EXPECT_THROW(instance_FM_product(1, R(1, 2), R(1, 2), Integer(10), R(1, 2)), std::invalid_argument);
  // Exponents are stored in increasing order; i = 0 is allowed.
  InstanceSpec s = instance_bad_ij(R(1), R(0), Integer(10));
  EXPECT_EQ(s.rho.exponents, (std::vector<Rational>{R(1), R(2)}));
}

TEST(Providers, RealMatchesDoubleLoop) {
  Gen g(41);
  for (int i = 0; i < 24; ++i) {
    const long k = g.uniform(2, 4), m = g.uniform(1, 3);
    Rect region{{Coord(g.rational(40)), Coord(g.rational(40))}, {R(1, g.uniform(3, 30)), R(1, g.uniform(3, 30))}};
    Labels want;
    const long qlo = ipow(Integer(k), m - 1).get_si(), qhi = ipow(Integer(k), m).get_si();
    for (long q = qlo; q < qhi; ++q)
      for (long p1 = 0; p1 <= q; ++p1)
        for (long p2 = 0; p2 <= q; ++p2)
          if (rect_contains_point(region, {Coord(R(p1, q)), Coord(R(p2, q))}))
            want.push_back({Integer(p1), Integer(p2), Integer(q)});
    EXPECT_EQ(labels_of(RealRationalProvider(2).enumerate(m, Integer(k), region)), sorted(want));
  }
}

TEST(Providers, GaussianMatchesDoubleLoop) {
  Gen g(42);
  for (int i = 0; i < 16; ++i) {
    const long k = g.uniform(2, 3), m = g.uniform(1, 2);
    GaussianRational z(g.rational(20, -1, 1), g.rational(20, -1, 1));
    const Rational l = R(1, g.uniform(2, 12));
    Rect region{{Coord(z)}, {l}};
    Labels want;
    const long lo = ipow(Integer(k), 2 * (m - 1)).get_si(), hi = ipow(Integer(k), 2 * m).get_si();
    for (long a = -k * k; a <= k * k; ++a)
      for (long b = -k * k; b <= k * k; ++b) {
        const long n = a * a + b * b;
        if (n < lo || n >= hi || n == 0) continue;
        // |p| <= |q| (|z| + l) < 9 * 2.
        for (long x = -18; x <= 18; ++x)
          for (long y = -18; y <= 18; ++y) {
            GaussianRational w = GaussianRational::ratio({Integer(x), Integer(y)}, {Integer(a), Integer(b)});
            if ((w - z).norm() <= l * l) want.push_back({Integer(x), Integer(y), Integer(a), Integer(b)});
          }
      }
    EXPECT_EQ(labels_of(GaussianProvider(1).enumerate(m, Integer(k), region)), sorted(want));
  }
}

TEST(Providers, PAdicMatchesDoubleLoop) {
  Gen g(43);
  for (int i = 0; i < 12; ++i) {
    const unsigned long p = i % 2 ? 2 : 3;
    const long k = p == 2 ? 4 : 3, m = g.uniform(1, 2);
    Rect region{{Coord(PAdicTrunc::exact_integer(p, Integer(g.uniform(0, 500)))),
                 Coord(PAdicTrunc::exact_integer(p, Integer(g.uniform(0, 500))))},
                {pow(R(static_cast<long>(p)), -g.uniform(0, 3)), pow(R(static_cast<long>(p)), -g.uniform(0, 3))}};
    Labels want;
    const long B = ipow(Integer(k), m).get_si(), Bl = ipow(Integer(k), m - 1).get_si();
    for (long q = 1; q < B; ++q)
      for (long r1 = -B + 1; r1 < B; ++r1)
        for (long r2 = -B + 1; r2 < B; ++r2) {
          if (std::max({std::labs(r1), std::labs(r2), q}) < Bl) continue;
          bool in = true;
          const long r[2] = {r1, r2};
          for (int a = 0; a < 2 && in; ++a) {
            const auto& c = std::get<PAdicTrunc>(region.center[a]);
            in = padic_abs(R(r[a], q) - Rational(c.residue()), p) <= region.half_widths[a];
          }
          if (in) want.push_back({Integer(r1), Integer(r2), Integer(q)});
        }
    EXPECT_EQ(labels_of(PAdicProvider(p, 2).enumerate(m, Integer(k), region)), sorted(want));
  }
}

TEST(Providers, LaurentMatchesDoubleLoop) {
  Gen g(44);
  for (int i = 0; i < 12; ++i) {
    const unsigned long h = 2;
    const long k_exp = 2, m = g.uniform(1, 2);
    std::vector<unsigned long> c0(10), c1(10);
    for (auto& c : c0) c = g.uniform(0, 1);
    for (auto& c : c1) c = g.uniform(0, 1);
    Rect region{{Coord(LaurentTrunc(h, 0, c0, true)), Coord(LaurentTrunc(h, 0, c1, true))},
                {pow(R(2), -g.uniform(0, 4)), pow(R(2), -g.uniform(0, 4))}};
    Labels want;
    for (long d = (m - 1) * k_exp; d < m * k_exp; ++d)
      for (long qi = 1L << d; qi < (1L << (d + 1)); ++qi) {
        PolyFp q = PolyFp::from_index(h, Integer(qi));
        for (long a = 0; a < (1L << (d + 1)); ++a)
          for (long b = 0; b < (1L << (d + 1)); ++b) {
            PolyFp pa = PolyFp::from_index(h, Integer(a)), pb = PolyFp::from_index(h, Integer(b));
            const auto& x0 = std::get<LaurentTrunc>(region.center[0]);
            const auto& x1 = std::get<LaurentTrunc>(region.center[1]);
            if (laurent_distance(x0, pa, q) <= region.half_widths[0] && laurent_distance(x1, pb, q) <= region.half_widths[1])
              want.push_back({Integer(a), Integer(b), Integer(qi)});
          }
      }
    EXPECT_EQ(labels_of(LaurentProvider(h, 2).enumerate(m, Integer(4), region)), sorted(want));
  }
  // Over F_2 there are 2^d polynomials of degree below d.
  Rect everything{{Coord(LaurentTrunc(2, 0, {0}, true))}, {R(1)}};
  std::size_t total = 0;
  for (long m = 1; m <= 2; ++m) {
    std::set<Integer> qs;
    for (const auto& r : LaurentProvider(2, 1).enumerate(m, Integer(4), everything)) qs.insert(r.label.back());
    total += qs.size();
  }
  EXPECT_EQ(total, 15u);
}

TEST(Instances, DimensionOneAndTwoReduceToTheDedicatedInstances) {
  InstanceSpec a = instance_bad_N({R(1)}, Integer(10));
  InstanceSpec b = instance_bad_interval(Integer(10));
  CantorTree ta = build_tree(a.params(3, Mode::greedy), *a.provider, *a.ground, a.root_center, 1);
  CantorTree tb = build_tree(b.params(3, Mode::greedy), *b.provider, *b.ground, b.root_center, 1);
  EXPECT_EQ(tree_to_json(ta), tree_to_json(tb));
  InstanceSpec c = instance_bad_N({R(1, 2), R(1, 2)}, Integer(4));
  InstanceSpec d = instance_bad_ij(R(1, 2), R(1, 2), Integer(4));
  CantorTree tc = build_tree(c.params(3, Mode::greedy), *c.provider, *c.ground, c.root_center, 1);
  CantorTree td = build_tree(d.params(3, Mode::greedy), *d.provider, *d.ground, d.root_center, 1);
  EXPECT_EQ(tree_to_json(tc), tree_to_json(td));
}

TEST(Instances, FMProductCentersStayInFM) {
  InstanceSpec s = instance_FM_product(2, R(1, 2), R(1, 2), Integer(10));
  EXPECT_GT(s.delta[0], R(1, 2));
  EXPECT_LT(s.delta[0], R(3, 5));
  CantorTree t = build_tree(s.params(2, Mode::greedy), *s.provider, *s.ground, s.root_center, 1);
  EXPECT_GT(t.levels.back().nodes.size(), 1u);
  for (const auto& level : t.levels)
    for (const auto& n : level.nodes)
      for (const auto& c : n.center) EXPECT_TRUE(is_in_F_M(std::get<Rational>(c), 2, 1000));
}

TEST(Instances, CantorGroundPointsLieInTheCantorSet) {
  InstanceSpec s = instance_cantor_interval(Integer(4));
  CantorTree t = build_tree(s.params(3, Mode::greedy), *s.provider, *s.ground, s.root_center, 1);
  for (const auto& n : t.levels.back().nodes) {
    // No ternary digit 1 among the first 12.
    Rational x = std::get<Rational>(n.center[0]);
    for (int d = 0; d < 12; ++d) {
      x = x * R(3);
      Integer digit = x.floor();
      EXPECT_NE(digit, 1);
      x = x - Rational(digit);
    }
  }
}

TEST(Collinearity, PlanarInstancesAtSmallK) {
  struct Case {
    InstanceSpec spec;
    long depth;
  };
  std::vector<Case> cases{{instance_bad_ij(R(1, 2), R(1, 2), Integer(4)), 3},
                          {instance_bad_ij(R(1, 3), R(2, 3), Integer(5)), 2},
                          {instance_gaussian(R(1, 2), R(1, 2), Integer(3)), 2},
                          {instance_padic(2, R(1, 2), R(1, 2), 2), 3},
                          {instance_power_series(2, R(1, 2), R(1, 2), 2), 3}};
  for (const auto& c : cases) {
    const InstanceSpec& s = c.spec;
    CantorTree t = build_tree(s.params(c.depth, Mode::greedy), *s.provider, *s.ground, s.root_center, 1);
    std::size_t groups = 0;
    for (long n = 1; n < c.depth; ++n)
      for (std::size_t i = 0; i < t.levels[n - 1].nodes.size(); ++i) {
        auto rs = s.provider->enumerate(n + 1, s.k, t.rect(n - 1, i));
        groups += rs.size() >= 3;
        EXPECT_TRUE(all_triples_collinear(rs, s.spaces[0].kind, s.spaces[0].prime)) << s.name << " level " << n;
      }
    RecordProperty(s.name + "_groups", static_cast<int>(groups));
  }
}

TEST(Collinearity, ThreeDimensionalSimplexAtK5) {
  InstanceSpec s = instance_bad_N({R(1, 3), R(1, 3), R(1, 3)}, Integer(5));
  CantorTree t = build_tree(s.params(2, Mode::greedy), *s.provider, *s.ground, s.root_center, 1);
  for (long n = 1; n < 2; ++n)
    for (std::size_t i = 0; i < t.levels[n - 1].nodes.size(); ++i) {
      auto rs = s.provider->enumerate(n + 1, s.k, t.rect(n - 1, i));
      for (std::size_t a = 0; a + 3 < rs.size(); ++a) {
        std::vector<std::vector<Rational>> pts;
        for (std::size_t j = a; j < a + 4; ++j) {
          std::vector<Rational> x;
          for (const auto& c : rs[j].coords) x.push_back(std::get<Rational>(c));
          pts.push_back(x);
        }
        EXPECT_TRUE(simplex_det(pts).is_zero());
      }
    }
}

TEST(Determinants, ValuationAndDegreeBounds) {
  EXPECT_TRUE(padic_valuation_bound_holds(Integer(0), 2, Integer(4), 1));
  EXPECT_TRUE(padic_valuation_bound_holds(Integer(24576), 2, Integer(4), 1));
  EXPECT_FALSE(padic_valuation_bound_holds(Integer(1) << 20, 2, Integer(4), 1));
  EXPECT_TRUE(laurent_det_bound_holds(PolyFp(), 9, 2, 1));
  EXPECT_TRUE(laurent_det_bound_holds(PolyFp(2, {1}), 11, 2, 1));
  EXPECT_FALSE(laurent_det_bound_holds(PolyFp(2, {1}), 12, 2, 1));
}
