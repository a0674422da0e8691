#include <gtest/gtest.h>

#include <algorithm>

#include "badapprox/dimension_lab.hpp"
#include "badapprox/instances.hpp"
#include "badapprox/serialization.hpp"
#include "support.hpp"

using namespace badapprox;
using badapprox::testing::Gen;
using badapprox::testing::i128;
using badapprox::testing::i128_abs;

namespace {

Rational R(long p, long q = 1) { return Rational(Integer(p), Integer(q)); }

i128 big_i128(const Integer& z) {
  i128 v = 0;
  std::string s = z.get_str();
  bool neg = s[0] == '-';
  for (std::size_t i = neg; i < s.size(); ++i) v = v * 10 + (s[i] - '0');
  return neg ? -v : v;
}

/// Brute-force separation oracle for one real coordinate: returns the first
/// (p, q) with q < q_end violating |x - p/q| >= c / q^2, or {-1, -1}.
std::pair<long, long> first_violation(const Rational& x, const Rational& c, long k, long q_end) {
  const i128 a = big_i128(x.num()), b = big_i128(x.den()), cn = big_i128(c.num()), cd = big_i128(c.den());
  for (long q = 1; q < q_end; ++q)
    for (long p = 0; p <= q; ++p) {
      const i128 gap = i128_abs(a * q - static_cast<i128>(p) * b);
      const bool bad = q < k ? gap == 0 : gap * q * cd < cn * b;
      if (bad) return {p, q};
    }
  return {-1, -1};
}

}  // namespace

TEST(Params, RhoAndKappa) {
  RhoFamily rho{{R(3, 2), R(3, 2)}};
  EXPECT_NO_THROW(rho.validate());
  EXPECT_THROW((RhoFamily{{R(2), R(1)}}).validate(), std::invalid_argument);
  EXPECT_THROW((RhoFamily{{R(0)}}).validate(), std::invalid_argument);
  ConstructionParams p;
  p.kappa1 = R(1, 4);
  p.kappa2 = R(1, 8);
  EXPECT_EQ(p.kappa(), R(1, 16));
  p.kappa1 = R(4);
  p.kappa2 = R(1);
  EXPECT_EQ(p.kappa(), R(1));
  EXPECT_EQ(mode_from_string("theorem"), Mode::theorem);
  EXPECT_THROW(mode_from_string("fast"), std::invalid_argument);
}

TEST(ScaleLadder, BadIntervalScales) {
  InstanceSpec s = instance_bad_interval(Integer(10));
  ConstructionParams p = s.params(3, Mode::theorem);
  ScaleLadder ladder(p, s.spaces);
  EXPECT_EQ(ladder.half_widths(1)[0], R(1, 20000));
  EXPECT_EQ(ladder.half_widths(2)[0], R(1, 2000000));
  EXPECT_EQ(ladder.candidate_half_widths(1)[0], R(1, 1000000));
  EXPECT_EQ(ladder.theorem_target(), 6);  // floor(100 / 16)
  EXPECT_EQ(s.c_k(), R(1, 20000));
}

TEST(Prune, MatchesBruteForceOverRationals) {
  Gen g(31);
  InstanceSpec s = instance_bad_interval(Integer(5));
  for (Mode mode : {Mode::theorem, Mode::greedy}) {
    ConstructionParams p = s.params(3, mode);
    ScaleLadder ladder(p, s.spaces);
    for (int i = 0; i < 60; ++i) {
      const long n = g.uniform(1, 2);
      const Rational L = ladder.half_widths(n)[0];
      Rect parent{{Coord(L + g.dyadic(20) * (R(1) - R(2) * L))}, {L}};
      Candidates c = s.ground->candidates(parent, ladder.candidate_half_widths(n));
      PruneResult got = prune_level(parent, c.rects, *s.provider, n, p);
      const Rational margin = R(2) * p.theta * pow(R(5), -2 * (n + 1));
      std::vector<std::size_t> kept;
      for (std::size_t j = 0; j < c.rects.size(); ++j) {
        const Rational& x = std::get<Rational>(c.rects[j].center[0]);
        bool pruned = false;
        for (long q = ipow(Integer(5), n).get_si(); q < ipow(Integer(5), n + 1).get_si() && !pruned; ++q)
          for (long pp = 0; pp <= q && !pruned; ++pp) pruned = (x - R(pp, q)).abs() < margin;
        if (!pruned) kept.push_back(j);
      }
      EXPECT_EQ(got.kept, kept);
      EXPECT_EQ(got.pruned, c.rects.size() - kept.size());
    }
  }
}

TEST(Construction, TheoremModeKeepsKappaTargetChildren) {
  InstanceSpec s = instance_bad_interval(Integer(10));
  CantorTree t = build_tree(s.params(3, Mode::theorem), *s.provider, *s.ground, s.root_center, 2);
  ASSERT_EQ(t.depth(), 3);
  EXPECT_EQ(t.levels[1].nodes.size(), 6u);
  EXPECT_EQ(t.levels[2].nodes.size(), 36u);
  for (const auto& n : t.levels[1].nodes) EXPECT_EQ(n.mu, R(1, 6));
  for (const auto& n : t.levels[2].nodes) EXPECT_EQ(n.mu, R(1, 36));
  EXPECT_EQ(t.levels[0].nodes[0].audit.candidates, 50u);
  EXPECT_TRUE(check_mu(t).ok());
}

TEST(Construction, ChildrenNestInsideParentsAndAreDisjoint) {
  for (Mode mode : {Mode::theorem, Mode::greedy, Mode::control}) {
    InstanceSpec s = instance_bad_ij(R(1, 3), R(2, 3), Integer(4));
    CantorTree t = build_tree(s.params(3, mode), *s.provider, *s.ground, s.root_center, 1);
    for (std::size_t n = 1; n < t.levels.size(); ++n) {
      const auto& nodes = t.levels[n].nodes;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        EXPECT_TRUE(rect_contains(t.rect(n - 1, nodes[i].parent), t.rect(n, i)));
        if (i + 1 < nodes.size() && nodes[i + 1].parent == nodes[i].parent)
          EXPECT_TRUE(interiors_disjoint(t.rect(n, i), t.rect(n, i + 1)));
      }
    }
    EXPECT_TRUE(check_mu(t).ok());
  }
}

TEST(Construction, WorkerCountDoesNotChangeTheTree) {
  InstanceSpec s = instance_bad_ij(R(1, 2), R(1, 2), Integer(4));
  CantorTree a = build_tree(s.params(3, Mode::greedy), *s.provider, *s.ground, s.root_center, 1);
  CantorTree b = build_tree(s.params(3, Mode::greedy), *s.provider, *s.ground, s.root_center, 4);
  EXPECT_EQ(tree_to_json(a), tree_to_json(b));
}

TEST(Construction, ResonantOverflowAtTheRoot) {
  InstanceSpec s = instance_bad_interval(Integer(10));
  const Point half{Coord(R(1, 2))};
  try {
    build_tree(s.params(2, Mode::theorem), *s.provider, *s.ground, half, 1);
    FAIL() << "expected ConstructionError";
  } catch (const ConstructionError& e) {
    EXPECT_NE(std::string(e.what()).find("resonant overflow"), std::string::npos);
  }
  CantorTree t = build_tree(s.params(2, Mode::greedy), *s.provider, *s.ground, half, 1);
  // Labels are unreduced pairs, so every representation of 1/2 is excluded.
  ASSERT_EQ(t.excluded.size(), 4u);
  for (long q = 2; q <= 8; q += 2)
    EXPECT_NE(std::find(t.excluded.begin(), t.excluded.end(), std::vector<Integer>{Integer(q / 2), Integer(q)}),
              t.excluded.end());
}

TEST(Construction, KappaTargetUnreachableIsReported) {
  InstanceSpec s = instance_bad_interval(Integer(10));
  ConstructionParams p = s.params(2, Mode::theorem);
  p.kappa1 = R(2);
  p.kappa2 = R(1, 100);
  try {
    build_tree(p, *s.provider, *s.ground, s.root_center, 1);
    FAIL() << "expected ConstructionError";
  } catch (const ConstructionError& e) {
    EXPECT_NE(std::string(e.what()).find("kappa target unreachable at level 1 node 0"), std::string::npos);
  }
}

TEST(Certification, GreedyTreeCentersPassTheBruteForceOracle) {
  InstanceSpec s = instance_bad_interval(Integer(5));
  CantorTree t = build_tree(s.params(3, Mode::greedy), *s.provider, *s.ground, s.root_center, 1);
  for (const auto& node : t.levels.back().nodes) {
    const Rational& x = std::get<Rational>(node.center[0]);
    CertifyResult r = certify_separation(node.center, *s.provider, Integer(5), t.c_k, t.params.rho, 3);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(first_violation(x, t.c_k, 5, 125).second, -1);
  }
}

TEST(Certification, EngineAgreesWithOracleOnArbitraryPoints) {
  Gen g(32);
  InstanceSpec s = instance_bad_interval(Integer(4));
  const Rational c = R(1, 50);
  for (int i = 0; i < 400; ++i) {
    Rational x = g.rational(300);
    CertifyResult r = certify_separation({Coord(x)}, *s.provider, Integer(4), c, s.rho, 3);
    auto v = first_violation(x, c, 4, 64);
    EXPECT_EQ(r.ok, v.second == -1) << x.str();
  }
}

TEST(Certification, HalfIsWitnessedByOneOverTwo) {
  InstanceSpec s = instance_bad_interval(Integer(10));
  CertifyResult r = certify_separation({Coord(R(1, 2))}, *s.provider, Integer(10), s.c_k(), s.rho, 3);
  ASSERT_FALSE(r.ok);
  EXPECT_TRUE(r.coincidence);
  EXPECT_EQ(s.provider->label_string(*r.witness), "(1,2)");
}

TEST(Counting, BadIntervalMatchesTheFiniteBounds) {
  InstanceSpec s = instance_bad_interval(Integer(10));
  ConstructionParams p = s.params(3, Mode::theorem);
  ScaleLadder ladder(p, s.spaces);
  std::vector<Rect> rects{{{Coord(R(309, 500))}, ladder.half_widths(1)}, {{Coord(R(1, 3))}, ladder.half_widths(1)}};
  CountingReport rep = check_counting_hypotheses(*s.provider, p, *s.ground, rects, 1);
  ASSERT_EQ(rep.rows.size(), 2u);
  for (const auto& row : rep.rows) {
    EXPECT_EQ(row.candidates, 50u);
    EXPECT_LE(row.pruned, 1u);
    EXPECT_DOUBLE_EQ(row.kappa1_threshold, 25.0);
    EXPECT_DOUBLE_EQ(row.kappa2_threshold, 12.5);
  }
  EXPECT_TRUE(rep.all_pass);
}

TEST(Serialization, RoundTripIsByteIdentical) {
  for (const InstanceSpec& s :
       {instance_bad_ij(R(1, 2), R(1, 2), Integer(4)), instance_gaussian(R(1, 2), R(1, 2), Integer(4)),
        instance_padic(2, R(1, 2), R(1, 2), 2), instance_power_series(2, R(1, 2), R(1, 2), 2)}) {
    CantorTree t = build_tree(s.params(2, Mode::greedy), *s.provider, *s.ground, s.root_center, 1);
    t.instance = s.config;
    const std::string a = tree_to_json(t);
    const CantorTree back = tree_from_json(a);
    EXPECT_EQ(tree_to_json(back), a) << s.name;
    EXPECT_EQ(back.node_count(), t.node_count());
  }
}

TEST(Serialization, CorruptFilesAreRejected) {
  InstanceSpec s = instance_bad_interval(Integer(4));
  CantorTree t = build_tree(s.params(2, Mode::greedy), *s.provider, *s.ground, s.root_center, 1);
  std::string good = tree_to_json(t);
  EXPECT_THROW(tree_from_json("{"), FormatError);
  EXPECT_THROW(tree_from_json(good.substr(0, good.size() / 2)), FormatError);
  std::string wrong_schema = good;
  wrong_schema.replace(wrong_schema.find("badapprox.tree/1"), 16, "badapprox.tree/9");
  EXPECT_THROW(tree_from_json(wrong_schema), FormatError);
  std::string bad_parent = good;
  auto pos = bad_parent.rfind("[0,[\"");
  ASSERT_NE(pos, std::string::npos);
  bad_parent.replace(pos, 3, "[99,");
  EXPECT_THROW(tree_from_json(bad_parent), FormatError);
}

TEST(Certification, GoldenMeanConvergent) {
  // 55/89 stays away from every p/q with 3 <= q < 27 by more than q^-2 / 100.
  RealRationalProvider provider(1);
  RhoFamily rho{{R(2)}};
  const Point x{Coord(R(55, 89))};
  CertifyResult r = certify_separation(x, provider, Integer(3), R(1, 100), rho, 3);
  EXPECT_TRUE(r.ok);
  for (long q = 1; q < 27; ++q)
    for (long p = 0; p <= q; ++p) EXPECT_GE((R(55, 89) - R(p, q)).abs() * R(q * q), R(1, 100));
}
