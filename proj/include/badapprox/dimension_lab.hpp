#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "badapprox/cantor_engine.hpp"

namespace badapprox {

// ---------------------------------------------------------------------------
// The measure mu on a tree

/// Weight of a node recomputed from the tree shape: product of reciprocal
/// branching factors along the ancestry.
Rational mu_weight(const CantorTree& tree, std::size_t level, std::size_t index);
/// All weights, level by level.
std::vector<std::vector<Rational>> mu_weights(const CantorTree& tree);

struct MuReport {
  bool level_sums_one = true;
  bool parent_equals_children = true;
  /// Stored node weights agree with the recomputed ones.
  bool stored_match = true;
  std::string first_failure;
  bool ok() const { return level_sums_one && parent_equals_children && stored_match; }
};
MuReport check_mu(const CantorTree& tree);

/// Coordinates flattened to doubles; a complex coordinate takes two slots.
std::vector<double> embed_point(const Point& p);

struct MdpReport {
  double s = 0;
  double c = 0;
  double max_ratio = 0;
  double worst_radius = 0;
  std::size_t worst_node = 0;
  std::size_t samples = 0;
  bool pass = true;
};

/// Samples balls centered at deepest-level centers with radii log-uniform in
/// [min deepest half-width, 2 * max root half-width]. mu(B) sums the weights of
/// deepest-level centers inside B (sup metric over coordinates).
MdpReport mdp_check(const CantorTree& tree, double s, std::size_t ball_samples, double c, std::uint64_t seed,
                    unsigned workers = 1);

/// max over levels n and r in [h(n+1), h(n)] of mu_max(n+1) prod_i (r / h_i(n+1) + 2)^(d_i) / r^s,
/// with d_i = 2 for complex coordinates; r >= h(1) uses mu = 1.
double mdp_constant(const CantorTree& tree, double s);

/// 4 log(2 / kappa) / log(lambda). Throws std::invalid_argument for lambda <= 1.
double epsilon_k(const Rational& kappa, const Rational& lambda);

// ---------------------------------------------------------------------------
// Estimators

struct DimensionReport {
  std::string method;
  std::vector<double> scales;
  /// Occupied-box counts or mean masses, one per scale.
  std::vector<double> values;
  double exponent = 0;
  double intercept = 0;
  /// Root-mean-square residual of the log-log fit.
  double residual = 0;
  std::vector<std::string> flags;
};

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;
  double slope_stderr = 0;
};
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log(occupied boxes) against log(1/scale); boxes are anchored at 0.
DimensionReport box_dimension(const std::vector<std::vector<double>>& points, const std::vector<double>& scales);

/// Deepest-level centers of a tree as points.
std::vector<std::vector<double>> tree_points(const CantorTree& tree);
/// Box widths for a tree: 2 h(n) (coordinate 0) for n = 2..depth plus the
/// geometric mean of each neighbouring pair. The root level is a single cell
/// and is left out. Needs depth >= 3.
std::vector<double> box_scales(const CantorTree& tree);

/// Slope of mean log mu(B(x, r)) against log r, centers drawn from deepest nodes.
DimensionReport holder_exponent(const CantorTree& tree, const std::vector<double>& radii, std::size_t samples,
                                std::uint64_t seed);

/// Product of identical one-dimensional measures on [0, 1]^N.
class MeasureSampler {
 public:
  explicit MeasureSampler(std::size_t dimension) : dimension_(dimension) {}
  virtual ~MeasureSampler() = default;
  std::size_t dimension() const { return dimension_; }
  /// Mass of the sup-metric ball B(c, r).
  double ball_mass(const std::vector<double>& c, double r) const;
  /// Mass of B(c, r) intersected with {x : |x_axis - offset| <= eps}.
  double slab_mass(const std::vector<double>& c, double r, std::size_t axis, double offset, double eps) const;
  std::vector<double> sample_support(std::mt19937_64& rng) const;
  virtual std::string name() const = 0;

 protected:
  virtual double interval_mass(double lo, double hi) const = 0;
  virtual double sample_axis(std::mt19937_64& rng) const = 0;

 private:
  std::size_t dimension_;
};

class LebesgueCube : public MeasureSampler {
 public:
  explicit LebesgueCube(std::size_t n) : MeasureSampler(n) {}
  std::string name() const override { return "lebesgue"; }

 protected:
  double interval_mass(double lo, double hi) const override;
  double sample_axis(std::mt19937_64& rng) const override;
};

/// Middle-third Cantor measure, evaluated through the Cantor function.
class CantorMeasure : public MeasureSampler {
 public:
  explicit CantorMeasure(std::size_t n = 1, int depth = 40) : MeasureSampler(n), depth_(depth) {}
  std::string name() const override { return "cantor"; }

 protected:
  double interval_mass(double lo, double hi) const override;
  double sample_axis(std::mt19937_64& rng) const override;

 private:
  double cdf(double x) const;
  int depth_;
};

/// Uniform branching measure on depth-D continued-fraction cylinders with
/// quotients <= M; mass is spread evenly inside each deepest cylinder.
class CylinderMeasure : public MeasureSampler {
 public:
  CylinderMeasure(long m, int depth, std::size_t n = 1);
  std::string name() const override { return "cf-cylinder M=" + std::to_string(m_); }

 protected:
  double interval_mass(double lo, double hi) const override;
  double sample_axis(std::mt19937_64& rng) const override;

 private:
  long m_;
  int depth_;
};

struct ConditionAReport {
  double delta = 0;
  double a = 0;
  double b = 0;
  double residual = 0;
  std::size_t balls = 0;
};

/// Fits log m(B(c, r)) against log r; a and b bound m / r^delta over the samples.
ConditionAReport verify_condition_A(const MeasureSampler& m, const std::vector<std::vector<double>>& centers,
                                    const std::vector<double>& radii);
/// Same, with `count` centers drawn from the measure.
ConditionAReport verify_condition_A(const MeasureSampler& m, std::size_t count, const std::vector<double>& radii,
                                    std::uint64_t seed);

struct DecayOptions {
  std::size_t centers = 32;
  std::size_t line_samples = 8;
  std::vector<double> radii{1.0 / 8, 1.0 / 32, 1.0 / 128};
  /// Values of eps / r; entries >= 1 are saturated and excluded from the fit.
  std::vector<double> eps_ratios{1.0 / 2, 1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  std::uint64_t seed = 1;
};

struct DecayReport {
  double alpha = 0;
  double alpha_low = 0;
  double alpha_high = 0;
  double residual = 0;
  std::size_t used = 0;
  std::size_t saturated = 0;
};

/// For each center and radius, the largest slab ratio m(B cap L^eps) / m(B)
/// over sampled axis-parallel hyperplanes L (the first through the center);
/// alpha is the slope of mean log ratio against log(eps / r), with a 2-sigma band.
DecayReport decay_exponent_estimate(const MeasureSampler& m, const DecayOptions& options);

/// delta_M estimate for F_M rounded down to three decimals (fixed seed).
Rational estimate_cylinder_delta(long M);

// ---------------------------------------------------------------------------
// Output

/// "%.17g" formatting, stable across runs.
std::string format_double(double v);
std::string report_to_csv(const DimensionReport& r);
std::string report_to_json(const DimensionReport& r);

}  // namespace badapprox
