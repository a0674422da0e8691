#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>

#include "badapprox/dimension_lab.hpp"
#include "badapprox/instances.hpp"
#include "support.hpp"

using namespace badapprox;
using badapprox::testing::Gen;

namespace {

Rational R(long p, long q = 1) { return Rational(Integer(p), Integer(q)); }

CantorTree bad_interval_tree(long k, long depth) {
  InstanceSpec s = instance_bad_interval(Integer(k));
  CantorTree t = build_tree(s.params(depth, Mode::greedy), *s.provider, *s.ground, s.root_center, 1);
  t.instance = s.config;
  return t;
}

// Midpoints of the 2^depth middle-third intervals of generation `depth`.
std::vector<std::vector<double>> cantor_midpoints(int depth) {
  std::vector<double> left{0.0};
  double len = 1.0;
  for (int d = 0; d < depth; ++d) {
    len /= 3;
    std::vector<double> next;
    for (double x : left) {
      next.push_back(x);
      next.push_back(x + 2 * len);
    }
    left = std::move(next);
  }
  std::vector<std::vector<double>> pts;
  for (double x : left) pts.push_back({x + len / 2});
  return pts;
}

}  // namespace

TEST(Mu, WeightsAreConsistentOnBuiltTrees) {
  CantorTree t = bad_interval_tree(4, 3);
  MuReport r = check_mu(t);
  EXPECT_TRUE(r.ok()) << r.first_failure;
  auto w = mu_weights(t);
  Rational total(0);
  for (const auto& x : w.back()) total += x;
  EXPECT_EQ(total, R(1));
  EXPECT_EQ(mu_weight(t, 0, 0), R(1));
  t.levels[2].nodes[0].mu = R(1, 3);
  r = check_mu(t);
  EXPECT_FALSE(r.stored_match);
  EXPECT_FALSE(r.first_failure.empty());
}

TEST(Mu, MassDistributionCheck) {
  CantorTree t = bad_interval_tree(10, 3);
  MdpReport trivial = mdp_check(t, 0.0, 200, 1.0, 5);
  EXPECT_TRUE(trivial.pass);
  EXPECT_LE(trivial.max_ratio, 1.0 + 1e-12);
  MdpReport tight = mdp_check(t, 1.0, 200, 1e-6, 5);
  EXPECT_FALSE(tight.pass);
  EXPECT_EQ(mdp_check(t, 1.0, 200, 1e-6, 5, 4).max_ratio, tight.max_ratio);
  const double c = mdp_constant(t, 0.9);
  EXPECT_TRUE(std::isfinite(c));
  EXPECT_TRUE(mdp_check(t, 0.9, 300, c, 9).pass);
}

TEST(Epsilon, ClosedFormAndMonotone) {
  EXPECT_NEAR(epsilon_k(R(1, 16), R(100)), 4 * std::log(32.0) / std::log(100.0), 1e-12);
  EXPECT_NEAR(epsilon_k(R(1, 16), R(100)), 3.0103, 1e-4);
  double prev = 1e300;
  for (long lambda = 2; lambda < 2000; lambda *= 3) {
    const double e = epsilon_k(R(1, 16), R(lambda));
    EXPECT_LT(e, prev);
    prev = e;
  }
  EXPECT_THROW(epsilon_k(R(1, 16), R(1)), std::invalid_argument);
  EXPECT_THROW(epsilon_k(R(0), R(10)), std::invalid_argument);
}

TEST(Fitting, LeastSquaresOnExactAndNoisyLines) {
  std::vector<double> x{0, 1, 2, 3, 4}, y;
  for (double v : x) y.push_back(1.5 * v - 2);
  LineFit f = least_squares(x, y);
  EXPECT_NEAR(f.slope, 1.5, 1e-12);
  EXPECT_NEAR(f.intercept, -2, 1e-12);
  EXPECT_NEAR(f.residual, 0, 1e-12);
  Gen g(51);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> xs, ys;
    const double a = g.uniform(-50, 50) / 10.0;
    for (int j = 0; j < 20; ++j) {
      xs.push_back(j);
      ys.push_back(a * j + (g.coin() ? 0.01 : -0.01));
    }
    EXPECT_NEAR(least_squares(xs, ys).slope, a, 0.01);
  }
}

TEST(BoxCounting, GridAndCantorSet) {
  std::vector<std::vector<double>> grid;
  for (int i = 0; i < 128; ++i)
    for (int j = 0; j < 128; ++j) grid.push_back({(i + 0.5) / 128, (j + 0.5) / 128});
  DimensionReport r = box_dimension(grid, {1.0 / 2, 1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32});
  EXPECT_NEAR(r.exponent, 2.0, 1e-9);
  EXPECT_EQ(r.values.back(), 1024.0);
  std::vector<double> scales;
  for (int j = 1; j <= 7; ++j) scales.push_back(std::pow(3.0, -j));
  DimensionReport c = box_dimension(cantor_midpoints(10), scales);
  EXPECT_NEAR(c.exponent, std::log(2.0) / std::log(3.0), 1e-9);
}

TEST(BoxCounting, SubsetsNeverOccupyMoreBoxes) {
  Gen g(52);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 400; ++i) pts.push_back({g.uniform(0, 1 << 20) / double(1 << 20)});
    std::vector<std::vector<double>> half(pts.begin(), pts.begin() + 200);
    const std::vector<double> scales{0.1, 0.03, 0.01, 0.003};
    DimensionReport all = box_dimension(pts, scales), part = box_dimension(half, scales);
    for (std::size_t s = 0; s < scales.size(); ++s) EXPECT_LE(part.values[s], all.values[s]);
  }
}

TEST(BoxCounting, RejectsDegenerateInput) {
  std::vector<std::vector<double>> few(50, std::vector<double>{0.5});
  EXPECT_THROW(box_dimension(few, {0.1, 0.01, 0.001}), std::invalid_argument);
  std::vector<std::vector<double>> same(200, std::vector<double>{0.5});
  EXPECT_THROW(box_dimension(same, {0.1, 0.01, 0.001}), std::invalid_argument);
  EXPECT_THROW(box_dimension(cantor_midpoints(8), {0.1, 0.01}), std::invalid_argument);
}

TEST(BoxCounting, TreeScalesSkipTheRoot) {
  CantorTree t = bad_interval_tree(10, 3);
  auto s = box_scales(t);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s[0], 2 * t.levels[1].half_widths[0].to_double());
  EXPECT_DOUBLE_EQ(s[2], 2 * t.levels[2].half_widths[0].to_double());
  EXPECT_NEAR(s[1], std::sqrt(s[0] * s[2]), 1e-15);
  EXPECT_THROW(box_scales(bad_interval_tree(10, 2)), std::invalid_argument);
  DimensionReport r = box_dimension(tree_points(t), s);
  EXPECT_GT(r.exponent, 0.95);
  EXPECT_LT(r.exponent, 1.01);
}

TEST(Holder, ExponentNearOneOnBadInterval) {
  CantorTree t = bad_interval_tree(10, 3);
  std::vector<double> radii;
  for (double s : box_scales(t)) radii.push_back(s / 2);
  DimensionReport r = holder_exponent(t, radii, 200, 3);
  EXPECT_GT(r.exponent, 0.85);
  EXPECT_LT(r.exponent, 1.1);
  EXPECT_EQ(r.method, holder_exponent(t, radii, 200, 3).method);
  EXPECT_EQ(report_to_json(r), report_to_json(holder_exponent(t, radii, 200, 3)));
}

TEST(Measures, MassesOfSimpleSets) {
  LebesgueCube cube(2);
  EXPECT_NEAR(cube.ball_mass({0.5, 0.5}, 0.25), 0.25, 1e-12);
  EXPECT_NEAR(cube.ball_mass({0.0, 0.5}, 0.25), 0.125, 1e-12);
  EXPECT_NEAR(cube.slab_mass({0.5, 0.5}, 0.25, 0, 0.5, 0.05), 0.1 * 0.5, 1e-12);
  CantorMeasure cantor;
  EXPECT_NEAR(cantor.ball_mass({1.0 / 6}, 1.0 / 6), 0.5, 1e-9);
  EXPECT_NEAR(cantor.ball_mass({0.5}, 1.0 / 6 - 1e-9), 0.0, 1e-9);
  EXPECT_NEAR(cantor.ball_mass({1.0 / 18}, 1.0 / 18), 0.25, 1e-9);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    double x = cantor.sample_support(rng)[0];
    for (int d = 0; d < 12; ++d) {
      x *= 3;
      const int digit = static_cast<int>(x);
      EXPECT_NE(digit, 1);
      x -= digit;
    }
  }
  CylinderMeasure cyl(2, 10);
  EXPECT_NEAR(cyl.ball_mass({0.5}, 0.5), 1.0, 1e-9);
  for (int i = 0; i < 50; ++i) {
    const double x = cyl.sample_support(rng)[0];
    EXPECT_TRUE(is_in_F_M(Rational::from_mpq(mpq_class(x)), 2, 6));
  }
}

TEST(ConditionA, ExponentsOfKnownMeasures) {
  const std::vector<double> radii{1e-2, 1e-3, 1e-4};
  EXPECT_NEAR(verify_condition_A(LebesgueCube(1), 64, radii, 1).delta, 1.0, 0.02);
  ConditionAReport sq = verify_condition_A(LebesgueCube(2), 64, radii, 1);
  EXPECT_NEAR(sq.delta, 2.0, 0.03);
  EXPECT_LE(sq.a, sq.b);
  EXPECT_NEAR(verify_condition_A(CantorMeasure(), 64, radii, 1).delta, std::log(2.0) / std::log(3.0), 0.05);
  const double d2 = verify_condition_A(CylinderMeasure(2, 16), 64, radii, 1).delta;
  const double d5 = verify_condition_A(CylinderMeasure(5, 10), 64, radii, 1).delta;
  EXPECT_GT(d5, d2);
  EXPECT_GT(d2, 0.4);
  EXPECT_LT(d5, 1.0);
  // Interior centers have mass exactly 2r.
  std::vector<std::vector<double>> centers{{0.25}, {0.5}, {0.75}};
  ConditionAReport e = verify_condition_A(LebesgueCube(1), centers, radii);
  EXPECT_NEAR(e.delta, 1.0, 1e-9);
  EXPECT_NEAR(e.a, 2.0, 1e-6);
  EXPECT_NEAR(e.b, 2.0, 1e-6);
  EXPECT_EQ(e.balls, 9u);
}

TEST(ConditionA, CylinderDeltaEstimates) {
  const Rational d2 = estimate_cylinder_delta(2), d5 = estimate_cylinder_delta(5);
  EXPECT_GT(d2, R(45, 100));
  EXPECT_LT(d2, R(60, 100));
  EXPECT_GT(d5, d2);
  EXPECT_EQ(estimate_cylinder_delta(2), d2);
}

TEST(Decay, LebesgueAndCantor) {
  DecayOptions o;
  DecayReport leb = decay_exponent_estimate(LebesgueCube(2), o);
  EXPECT_NEAR(leb.alpha, 1.0, 0.05);
  EXPECT_LE(leb.alpha_low, leb.alpha);
  EXPECT_GE(leb.alpha_high, leb.alpha);
  DecayReport can = decay_exponent_estimate(CantorMeasure(), o);
  EXPECT_GT(can.alpha, 0.4);
  EXPECT_LT(can.alpha, 0.9);
  o.eps_ratios = {2.0, 1.0, 0.5, 0.25};
  EXPECT_THROW(decay_exponent_estimate(LebesgueCube(1), o), std::invalid_argument);
}

TEST(Output, StableFormatting) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  DimensionReport r;
  r.method = "box";
  r.scales = {0.5, 0.25};
  r.values = {2, 4};
  r.exponent = 1;
  r.flags = {"note"};
  auto j = nlohmann::json::parse(report_to_json(r));
  EXPECT_EQ(j.at("schema"), "badapprox.dimension/1");
  EXPECT_EQ(j.at("method"), "box");
  const std::string csv = report_to_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}
