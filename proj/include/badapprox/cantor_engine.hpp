#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "badapprox/geometry.hpp"
#include "badapprox/power_compare.hpp"
#include "badapprox/rational.hpp"

namespace badapprox {

/// Raised by build_tree; the message carries level and node context.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// rho_i(r) = r^(-e_i) with rational e_i > 0.
struct RhoFamily {
  std::vector<Rational> exponents;

  std::size_t size() const { return exponents.size(); }
  void validate() const;
  /// rho_i(k^m).
  PowerTerm at_power(std::size_t i, const Integer& k, long m) const;
  /// rho_i(beta) for a height beta given as a power term.
  PowerTerm at(std::size_t i, const PowerTerm& beta) const;
};

struct ResonantPoint {
  /// Index alpha, e.g. (p, q) or (r1, r2, q); polynomials are stored by index.
  std::vector<Integer> label;
  /// beta_alpha as base^exponent (exponent 1/2 for Gaussian moduli).
  PowerTerm height;
  std::vector<ResonantCoord> coords;
};

class ResonantProvider {
 public:
  virtual ~ResonantProvider() = default;
  virtual const std::vector<CoordSpace>& spaces() const = 0;
  std::size_t dimension() const { return spaces().size(); }
  /// Every resonant point with k^(m-1) <= beta < k^m whose coordinates all lie
  /// in the closed region. The order is deterministic.
  virtual std::vector<ResonantPoint> enumerate(long m, const Integer& k, const Rect& region) const = 0;
  virtual std::string label_string(const ResonantPoint& r) const;
};

struct Candidates {
  std::vector<Rect> rects;
  std::vector<Rational> fringe;
};

/// Source of candidate sub-rectangles centered in the ground set.
class GroundSet {
 public:
  virtual ~GroundSet() = default;
  /// Pairwise interior-disjoint rects of the given half-widths inside `parent`.
  virtual Candidates candidates(const Rect& parent, const std::vector<Rational>& half_widths) const = 0;
  virtual std::string descriptor() const = 0;
};

/// The whole product space; candidates come from the corner-anchored grid.
class FullCubeGround : public GroundSet {
 public:
  explicit FullCubeGround(std::vector<CoordSpace> spaces) : spaces_(std::move(spaces)) {}
  Candidates candidates(const Rect& parent, const std::vector<Rational>& half_widths) const override;
  std::string descriptor() const override { return "full cube"; }

 private:
  std::vector<CoordSpace> spaces_;
};

enum class Mode { theorem, greedy, control };
std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct ConstructionParams {
  Integer k = 2;
  Rational theta = Rational(1);
  Rational kappa1 = Rational(Integer(1), Integer(4));
  Rational kappa2 = Rational(Integer(1), Integer(8));
  long depth = 1;
  Mode mode = Mode::greedy;
  RhoFamily rho;
  /// Measure exponents delta_i of the product measure.
  std::vector<Rational> delta;

  /// min{1, (kappa1 - kappa2) / 2}.
  Rational kappa() const;
  void validate(std::size_t dimension) const;
};

/// Exact threshold with cheap rational bounds for the common comparisons.
struct Threshold {
  PowerProduct exact;
  RationalBounds bounds;
};
Threshold make_threshold(PowerProduct exact);
/// d < threshold, exactly. Throws PrecisionError for unresolved truncations.
bool below_threshold(const Distance& d, const Threshold& t);

/// Per-level half-widths: h_i(n) = theta * rho_i(k^n), rounded down to a
/// 64-bit dyadic (real, complex) or to a power of the prime (ultrametric).
class ScaleLadder {
 public:
  ScaleLadder(const ConstructionParams& params, std::vector<CoordSpace> spaces);

  std::vector<Rational> half_widths(long n) const;
  /// Half-widths of the candidates used to build level n + 1.
  std::vector<Rational> candidate_half_widths(long n) const;
  /// 2 theta rho_i(k^(n+1)).
  Threshold prune_margin(long n, std::size_t i) const;
  /// floor(kappa * prod_i k^(e_i delta_i)).
  Integer theorem_target() const;
  /// prod_i k^(e_i delta_i) as a power product.
  PowerProduct measure_ratio() const;

 private:
  Rational floor_width(const PowerProduct& value, std::size_t i) const;
  ConstructionParams params_;
  std::vector<CoordSpace> spaces_;
};

struct NodeAudit {
  std::size_t candidates = 0;
  std::size_t pruned = 0;
  std::size_t kept = 0;
};

struct TreeNode {
  static constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();
  std::size_t parent = kNoParent;
  Point center;
  Rational mu;
  /// Audit of this node's own subdivision (zero on the deepest level).
  NodeAudit audit;
};

struct TreeLevel {
  std::vector<Rational> half_widths;
  std::vector<TreeNode> nodes;
};

struct CantorTree {
  ConstructionParams params;
  std::vector<CoordSpace> spaces;
  std::vector<TreeLevel> levels;
  /// Labels of resonant points with beta < k meeting the root.
  std::vector<std::vector<Integer>> excluded;
  /// Instance configuration echo, used to rebuild the provider.
  std::map<std::string, std::string> instance;
  Rational c_k;

  long depth() const { return static_cast<long>(levels.size()); }
  Rect rect(std::size_t level, std::size_t index) const;
  std::size_t node_count() const;
};

struct PruneResult {
  std::vector<std::size_t> kept;
  std::size_t pruned = 0;
  std::size_t resonant_seen = 0;
};

/// Removes candidates whose center is within 2 theta rho_i(k^(n+1)) of some
/// point of J(n+1) in every coordinate.
PruneResult prune_level(const Rect& parent, const std::vector<Rect>& candidates,
                        const ResonantProvider& provider, long n, const ConstructionParams& params);

/// Builds levels 1..depth. `workers` = 0 uses the available parallelism.
CantorTree build_tree(const ConstructionParams& params, const ResonantProvider& provider,
                      const GroundSet& ground, const Point& root_center, unsigned workers = 0);

/// min_i theta / lambda_i(k) with lambda_i(k) = k^(e_i), rounded down when irrational.
Rational default_c_k(const ConstructionParams& params);

struct CertifyResult {
  bool ok = true;
  std::optional<ResonantPoint> witness;
  /// The witness has beta < k and coincides with x.
  bool coincidence = false;
  std::size_t checked = 0;
};

/// Checks d_i(x_i, R_i) >= c_k rho_i(beta) for some i, for every alpha with
/// k <= beta < k^height_bound, and that x is not a resonant point of height < k.
CertifyResult certify_separation(const Point& x, const ResonantProvider& provider, const Integer& k,
                                 const Rational& c_k, const RhoFamily& rho, long height_bound);

struct CountingRow {
  std::size_t candidates = 0;
  std::size_t pruned = 0;
  std::size_t resonant_pairs = 0;
  std::size_t resonant_values = 0;
  double kappa1_threshold = 0;
  double kappa2_threshold = 0;
  bool candidates_pass = false;
  bool pruned_pass = false;
};

struct CountingReport {
  long level = 0;
  std::vector<CountingRow> rows;
  bool all_pass = true;
};

/// Candidate and prune counts for each sample rect theta F_n against
/// kappa1 * ratio and kappa2 * ratio.
CountingReport check_counting_hypotheses(const ResonantProvider& provider, const ConstructionParams& params,
                                         const GroundSet& ground, const std::vector<Rect>& sample_rects,
                                         long n);

}  // namespace badapprox
