#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "badapprox/cantor_engine.hpp"

namespace badapprox {

// ---------------------------------------------------------------------------
// Providers

/// (p_1/q, ..., p_N/q) with 0 <= p_r <= q; beta = q.
class RealRationalProvider : public ResonantProvider {
 public:
  explicit RealRationalProvider(std::size_t n);
  const std::vector<CoordSpace>& spaces() const override { return spaces_; }
  std::vector<ResonantPoint> enumerate(long m, const Integer& k, const Rect& region) const override;

 private:
  std::vector<CoordSpace> spaces_;
};

/// (p_1/q, ..., p_N/q) with Gaussian integers, q != 0; beta = |q|.
class GaussianProvider : public ResonantProvider {
 public:
  explicit GaussianProvider(std::size_t n);
  const std::vector<CoordSpace>& spaces() const override { return spaces_; }
  std::vector<ResonantPoint> enumerate(long m, const Integer& k, const Rect& region) const override;

 private:
  std::vector<CoordSpace> spaces_;
};

/// (r_1/q, ..., r_N/q) read p-adically, q >= 1; beta = max(|r_1|, ..., |r_N|, q).
class PAdicProvider : public ResonantProvider {
 public:
  PAdicProvider(unsigned long p, std::size_t n);
  const std::vector<CoordSpace>& spaces() const override { return spaces_; }
  std::vector<ResonantPoint> enumerate(long m, const Integer& k, const Rect& region) const override;

 private:
  unsigned long p_;
  std::vector<CoordSpace> spaces_;
};

/// (p_1/q, ..., p_N/q) over F_h[X], q != 0; beta = ||q|| = h^deg q; k must be a power of h.
class LaurentProvider : public ResonantProvider {
 public:
  LaurentProvider(unsigned long h, std::size_t n);
  const std::vector<CoordSpace>& spaces() const override { return spaces_; }
  std::vector<ResonantPoint> enumerate(long m, const Integer& k, const Rect& region) const override;
  std::string label_string(const ResonantPoint& r) const override;

 private:
  unsigned long h_;
  std::vector<CoordSpace> spaces_;
};

// ---------------------------------------------------------------------------
// Ground sets built from sample points and the covering selection

/// Real axes only. Sample points of the ground set are taken per axis at the
/// candidate resolution, thinned by the covering selection, and combined.
class CoveringGround : public GroundSet {
 public:
  Candidates candidates(const Rect& parent, const std::vector<Rational>& half_widths) const override;
  /// Ascending points of the ground set in [lo, hi], spaced roughly by `resolution`.
  virtual std::vector<Rational> axis_points(const Rational& lo, const Rational& hi,
                                            const Rational& resolution) const = 0;
};

/// F_M: points of [0, 1] whose partial quotients are all <= M.
class CylinderGround : public CoveringGround {
 public:
  explicit CylinderGround(long m);
  std::vector<Rational> axis_points(const Rational& lo, const Rational& hi,
                                    const Rational& resolution) const override;
  std::string descriptor() const override { return "CF-cylinder set M=" + std::to_string(m_); }

 private:
  long m_;
};

/// The middle-third Cantor set.
class CantorGround : public CoveringGround {
 public:
  std::vector<Rational> axis_points(const Rational& lo, const Rational& hi,
                                    const Rational& resolution) const override;
  std::string descriptor() const override { return "Cantor attractor"; }
};

/// [0; a_1, ..., a_d].
Rational cf_value(const std::vector<long>& quotients_after_zero);

// ---------------------------------------------------------------------------
// Instances

struct InstanceSpec {
  std::string name;
  std::vector<CoordSpace> spaces;
  RhoFamily rho;
  std::vector<Rational> delta;
  Rational theta;
  std::string theta_formula;
  Rational kappa1;
  Rational kappa2;
  Integer k;
  std::shared_ptr<const ResonantProvider> provider;
  std::shared_ptr<const GroundSet> ground;
  Point root_center;
  /// Parameters that rebuild this instance through instance_from_config.
  std::map<std::string, std::string> config;

  ConstructionParams params(long depth, Mode mode) const;
  Rational c_k() const;
  std::size_t dimension() const { return spaces.size(); }
};

/// 1/2 (N! k^(N+1))^(-1/N), rounded down to 64 fractional bits when irrational.
Rational theta_simultaneous(std::size_t n, const Integer& k);

InstanceSpec instance_bad_interval(const Integer& k);
InstanceSpec instance_bad_ij(Rational i, Rational j, const Integer& k);
InstanceSpec instance_bad_N(std::vector<Rational> exponents, const Integer& k);
/// delta defaults to an estimate from the cylinder measure.
InstanceSpec instance_FM_product(long M, Rational i, Rational j, const Integer& k,
                                 std::optional<Rational> delta = std::nullopt);
InstanceSpec instance_cantor_interval(const Integer& k);
InstanceSpec instance_gaussian(Rational i, Rational j, const Integer& k);
/// k = p^s, theta = p^(-t_exp); t_exp defaults to the least value with p^(2 t) > 6 k^3.
InstanceSpec instance_padic(unsigned long p, Rational i, Rational j, unsigned long s,
                            std::optional<unsigned long> t_exp = std::nullopt);
/// k = h^k_exp, theta = h^(-ceil(3 k_exp / 2)).
InstanceSpec instance_power_series(unsigned long h, Rational i, Rational j, unsigned long k_exp);

/// Deepest determinant valuation allowed for three p-adic resonant points with
/// heights below k^(n+1): v_p(N) < log_p(6 k^(3n+3)), i.e. p^v < 6 k^(3n+3).
bool padic_valuation_bound_holds(const Integer& det_numerator, unsigned long p, const Integer& k, long n);

/// Laurent analogue: the determinant N / (q q' q'') of three points with
/// deg q < (n+1) k_exp satisfies log_h ||D|| > -3 (n+1) k_exp unless N = 0.
bool laurent_det_bound_holds(const PolyFp& det_numerator, long denominator_degree, unsigned long k_exp, long n);

}  // namespace badapprox
