#include "badapprox/dimension_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace badapprox {

// ---------------------------------------------------------------------------
// mu

std::vector<std::vector<Rational>> mu_weights(const CantorTree& tree) {
  std::vector<std::vector<Rational>> w(tree.levels.size());
  if (tree.levels.empty()) return w;
  w[0].assign(tree.levels[0].nodes.size(), Rational(1));
  for (std::size_t n = 1; n < tree.levels.size(); ++n) {
    const auto& nodes = tree.levels[n].nodes;
    std::vector<std::size_t> children(tree.levels[n - 1].nodes.size(), 0);
    for (const auto& node : nodes) ++children.at(node.parent);
    w[n].reserve(nodes.size());
    for (const auto& node : nodes) w[n].push_back(w[n - 1][node.parent] / Rational(children[node.parent]));
  }
  return w;
}

Rational mu_weight(const CantorTree& tree, std::size_t level, std::size_t index) {
  Rational w(1);
  while (level > 0) {
    const std::size_t parent = tree.levels.at(level).nodes.at(index).parent;
    std::size_t siblings = 0;
    for (const auto& node : tree.levels[level].nodes) siblings += node.parent == parent;
    w /= Rational(siblings);
    index = parent;
    --level;
  }
  return w;
}

MuReport check_mu(const CantorTree& tree) {
  MuReport r;
  auto fail = [&](bool& flag, const std::string& msg) {
    if (r.first_failure.empty()) r.first_failure = msg;
    flag = false;
  };
  const auto w = mu_weights(tree);
  for (std::size_t n = 0; n < tree.levels.size(); ++n) {
    const auto& nodes = tree.levels[n].nodes;
    Rational sum(0), stored_sum(0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      sum += w[n][i];
      stored_sum += nodes[i].mu;
      if (nodes[i].mu != w[n][i])
        fail(r.stored_match, "level " + std::to_string(n + 1) + " node " + std::to_string(i) + ": stored mu " +
                                 nodes[i].mu.str() + " != " + w[n][i].str());
    }
    if (sum != Rational(1) || stored_sum != Rational(1))
      fail(r.level_sums_one, "level " + std::to_string(n + 1) + " sums to " + stored_sum.str());
    if (n + 1 < tree.levels.size()) {
      std::vector<Rational> child_sum(nodes.size(), Rational(0));
      for (const auto& c : tree.levels[n + 1].nodes) child_sum.at(c.parent) += c.mu;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        if (child_sum[i] != nodes[i].mu)
          fail(r.parent_equals_children, "level " + std::to_string(n + 1) + " node " + std::to_string(i) +
                                             ": children sum to " + child_sum[i].str());
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Atoms at deepest-level centers

std::vector<double> embed_point(const Point& p) {
  std::vector<double> out;
  for (const auto& c : p) {
    if (const auto* x = std::get_if<Rational>(&c)) {
      out.push_back(x->to_double());
    } else if (const auto* z = std::get_if<GaussianRational>(&c)) {
      out.push_back(z->re().to_double());
      out.push_back(z->im().to_double());
    } else {
      throw std::invalid_argument("ultrametric coordinates have no real embedding");
    }
  }
  return out;
}

namespace {

double power_term_double(const PowerTerm& t) { return std::pow(t.base.to_double(), t.exponent.to_double()); }

bool all_real(const std::vector<CoordSpace>& spaces) {
  return std::all_of(spaces.begin(), spaces.end(), [](const CoordSpace& s) { return s.kind == CoordKind::real; });
}

class Atoms {
 public:
  explicit Atoms(const CantorTree& tree) : tree_(tree) {
    if (tree.levels.empty()) throw std::invalid_argument("empty tree");
    const auto& deep = tree.levels.back().nodes;
    real_ = all_real(tree.spaces);
    weights_.reserve(deep.size());
    for (const auto& n : deep) weights_.push_back(n.mu.to_double());
    if (real_) {
      for (const auto& n : deep) pts_.push_back(embed_point(n.center));
      order_.resize(deep.size());
      std::iota(order_.begin(), order_.end(), 0);
      std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return pts_[a][0] < pts_[b][0]; });
      for (std::size_t i : order_) key_.push_back(pts_[i][0]);
    }
  }

  std::size_t size() const { return weights_.size(); }

  /// Total weight of atoms within sup-distance r of atom `center`.
  double mass(std::size_t center, double r) const {
    const auto& deep = tree_.levels.back().nodes;
    double m = 0;
    if (real_) {
      const auto& x = pts_[center];
      auto lo = std::lower_bound(key_.begin(), key_.end(), x[0] - r);
      auto hi = std::upper_bound(key_.begin(), key_.end(), x[0] + r);
      for (auto it = lo; it != hi; ++it) {
        const std::size_t j = order_[static_cast<std::size_t>(it - key_.begin())];
        bool in = true;
        for (std::size_t a = 1; a < x.size() && in; ++a) in = std::abs(pts_[j][a] - x[a]) <= r;
        if (in) m += weights_[j];
      }
      return m;
    }
    for (std::size_t j = 0; j < deep.size(); ++j) {
      bool in = true;
      for (std::size_t a = 0; a < deep[j].center.size() && in; ++a)
        in = power_term_double(coord_distance(deep[j].center[a], deep[center].center[a]).magnitude) <= r;
      if (in) m += weights_[j];
    }
    return m;
  }

 private:
  const CantorTree& tree_;
  bool real_ = false;
  std::vector<double> weights_;
  std::vector<std::vector<double>> pts_;
  std::vector<std::size_t> order_;
  std::vector<double> key_;
};

double min_width(const std::vector<Rational>& hw) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& h : hw) m = std::min(m, h.to_double());
  return m;
}

double max_width(const std::vector<Rational>& hw) {
  double m = 0;
  for (const auto& h : hw) m = std::max(m, h.to_double());
  return m;
}

}  // namespace

MdpReport mdp_check(const CantorTree& tree, double s, std::size_t ball_samples, double c, std::uint64_t seed,
                    unsigned workers) {
  if (tree.levels.size() < 2) throw std::invalid_argument("mdp_check needs depth >= 2");
  Atoms atoms(tree);
  const double r_lo = min_width(tree.levels.back().half_widths);
  const double r_hi = 2 * max_width(tree.levels.front().half_widths);
  // Draw all samples up front so the result does not depend on scheduling.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<std::size_t, double>> balls(ball_samples);
  for (auto& b : balls) {
    b.first = pick(rng);
    b.second = r_lo * std::pow(r_hi / r_lo, u(rng));
  }
  std::vector<double> ratio(balls.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, balls.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < balls.size(); i += workers)
        ratio[i] = atoms.mass(balls[i].first, balls[i].second) / std::pow(balls[i].second, s);
    });
  for (auto& t : pool) t.join();

  MdpReport r;
  r.s = s;
  r.c = c;
  r.samples = balls.size();
  for (std::size_t i = 0; i < balls.size(); ++i)
    if (ratio[i] > r.max_ratio) {
      r.max_ratio = ratio[i];
      r.worst_node = balls[i].first;
      r.worst_radius = balls[i].second;
    }
  r.pass = r.max_ratio <= c;
  return r;
}

double mdp_constant(const CantorTree& tree, double s) {
  std::vector<int> dims;
  for (const auto& sp : tree.spaces) dims.push_back(sp.kind == CoordKind::complex ? 2 : 1);
  const auto& levels = tree.levels;
  double best = 0;
  auto scan = [&](double lo, double hi, double mu_max, const std::vector<Rational>* child_hw) {
    const int steps = 64;
    for (int i = 0; i <= steps; ++i) {
      const double r = lo * std::pow(hi / lo, static_cast<double>(i) / steps);
      double count = 1;
      if (child_hw)
        for (std::size_t a = 0; a < dims.size(); ++a) count *= std::pow(r / (*child_hw)[a].to_double() + 2, dims[a]);
      best = std::max(best, std::min(1.0, mu_max * count) / std::pow(r, s));
    }
  };
  for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
    double mu_max = 0;
    for (const auto& node : levels[n + 1].nodes) mu_max = std::max(mu_max, node.mu.to_double());
    scan(min_width(levels[n + 1].half_widths), max_width(levels[n].half_widths), mu_max, &levels[n + 1].half_widths);
  }
  const double root = max_width(levels.front().half_widths);
  scan(root, 2 * root, 1.0, nullptr);
  return best;
}

double epsilon_k(const Rational& kappa, const Rational& lambda) {
  if (lambda <= Rational(1)) throw std::invalid_argument("epsilon_k needs lambda > 1");
  if (kappa.sign() <= 0) throw std::invalid_argument("epsilon_k needs kappa > 0");
  return 4 * std::log(2 / kappa.to_double()) / std::log(lambda.to_double());
}

// ---------------------------------------------------------------------------
// Estimators

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least squares needs >= 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("least squares needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / n);
  f.slope_stderr = x.size() > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0;
  return f;
}

DimensionReport box_dimension(const std::vector<std::vector<double>>& points, const std::vector<double>& scales) {
  if (points.size() < 100) throw std::invalid_argument("box_dimension needs at least 100 points");
  if (scales.size() < 3) throw std::invalid_argument("box_dimension needs at least 3 scales");
  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw std::invalid_argument("points of mixed dimension");
  if (std::all_of(points.begin(), points.end(), [&](const auto& p) { return p == points.front(); }))
    throw std::invalid_argument("degenerate point set: all points equal");
  DimensionReport r;
  r.method = "box-count";
  std::vector<double> lx, ly;
  std::vector<std::vector<long long>> keys(points.size(), std::vector<long long>(dim));
  for (double s : scales) {
    if (!(s > 0)) throw std::invalid_argument("scales must be positive");
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t a = 0; a < dim; ++a) keys[i][a] = static_cast<long long>(std::floor(points[i][a] / s));
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    const double count = static_cast<double>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    r.scales.push_back(s);
    r.values.push_back(count);
    lx.push_back(std::log(1 / s));
    ly.push_back(std::log(count));
  }
  const LineFit f = least_squares(lx, ly);
  r.exponent = f.slope;
  r.intercept = f.intercept;
  r.residual = f.residual;
  if (!std::isfinite(r.exponent)) throw std::runtime_error("box-dimension fit is not finite");
  return r;
}

std::vector<std::vector<double>> tree_points(const CantorTree& tree) {
  std::vector<std::vector<double>> pts;
  for (const auto& n : tree.levels.back().nodes) pts.push_back(embed_point(n.center));
  return pts;
}

std::vector<double> box_scales(const CantorTree& tree) {
  if (tree.depth() < 3) throw std::invalid_argument("box scales need tree depth >= 3");
  std::vector<double> out;
  for (std::size_t n = 1; n < tree.levels.size(); ++n) {
    const double w = 2 * tree.levels[n].half_widths[0].to_double();
    if (n > 1) out.push_back(std::sqrt(out.back() * w));
    out.push_back(w);
  }
  return out;
}

DimensionReport holder_exponent(const CantorTree& tree, const std::vector<double>& radii, std::size_t samples,
                                std::uint64_t seed) {
  if (radii.size() < 3) throw std::invalid_argument("holder_exponent needs at least 3 radii");
  if (samples == 0) throw std::invalid_argument("holder_exponent needs samples");
  Atoms atoms(tree);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  std::vector<std::size_t> centers(samples);
  for (auto& c : centers) c = pick(rng);
  DimensionReport r;
  r.method = "mu-holder";
  std::vector<double> lx, ly;
  for (double rad : radii) {
    double acc = 0;
    for (std::size_t c : centers) acc += std::log(atoms.mass(c, rad));
    acc /= static_cast<double>(samples);
    r.scales.push_back(rad);
    r.values.push_back(std::exp(acc));
    lx.push_back(std::log(rad));
    ly.push_back(acc);
  }
  const LineFit f = least_squares(lx, ly);
  r.exponent = f.slope;
  r.intercept = f.intercept;
  r.residual = f.residual;
  return r;
}

// ---------------------------------------------------------------------------
// Measures

double MeasureSampler::ball_mass(const std::vector<double>& c, double r) const {
  if (c.size() != dimension_) throw std::invalid_argument("center dimension mismatch");
  double m = 1;
  for (double x : c) m *= interval_mass(x - r, x + r);
  return m;
}

double MeasureSampler::slab_mass(const std::vector<double>& c, double r, std::size_t axis, double offset,
                                 double eps) const {
  if (c.size() != dimension_ || axis >= dimension_) throw std::invalid_argument("slab dimension mismatch");
  double m = 1;
  for (std::size_t a = 0; a < dimension_; ++a) {
    if (a == axis) {
      const double lo = std::max(c[a] - r, offset - eps), hi = std::min(c[a] + r, offset + eps);
      m *= lo <= hi ? interval_mass(lo, hi) : 0.0;
    } else {
      m *= interval_mass(c[a] - r, c[a] + r);
    }
  }
  return m;
}

std::vector<double> MeasureSampler::sample_support(std::mt19937_64& rng) const {
  std::vector<double> x(dimension_);
  for (auto& v : x) v = sample_axis(rng);
  return x;
}

double LebesgueCube::interval_mass(double lo, double hi) const {
  return std::max(0.0, std::min(1.0, hi) - std::max(0.0, lo));
}

double LebesgueCube::sample_axis(std::mt19937_64& rng) const { return std::uniform_real_distribution<double>(0, 1)(rng); }

double CantorMeasure::cdf(double x) const {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double f = 0, weight = 0.5;
  for (int i = 0; i < depth_; ++i) {
    x *= 3;
    if (x < 1) {
    } else if (x < 2) {
      return f + weight;
    } else {
      f += weight;
      x -= 2;
    }
    weight /= 2;
  }
  return f;
}

double CantorMeasure::interval_mass(double lo, double hi) const { return lo > hi ? 0.0 : cdf(hi) - cdf(lo); }

double CantorMeasure::sample_axis(std::mt19937_64& rng) const {
  double x = 0, scale = 1;
  for (int i = 0; i < depth_; ++i) {
    scale /= 3;
    if (rng() & 1) x += 2 * scale;
  }
  return x;
}

CylinderMeasure::CylinderMeasure(long m, int depth, std::size_t n) : MeasureSampler(n), m_(m), depth_(depth) {
  if (m < 2) throw std::invalid_argument("M must be at least 2");
  if (depth < 1 || depth > 24) throw std::invalid_argument("cylinder depth must lie in [1, 24]");
}

double CylinderMeasure::interval_mass(double lo, double hi) const {
  if (lo > hi) return 0;
  double total = 0;
  auto rec = [&](auto&& self, double pm, double qm, double p, double q, int d, double w) -> void {
    const double e1 = p / q, e2 = (p + pm) / (q + qm);
    const double a = std::min(e1, e2), b = std::max(e1, e2);
    if (b <= lo || a >= hi) return;
    if (lo <= a && b <= hi) {
      total += w;
      return;
    }
    if (d == depth_) {
      total += w * (std::min(b, hi) - std::max(a, lo)) / (b - a);
      return;
    }
    for (long k = 1; k <= m_; ++k) self(self, p, q, k * p + pm, k * q + qm, d + 1, w / m_);
  };
  rec(rec, 1.0, 0.0, 0.0, 1.0, 0, 1.0);
  return total;
}

double CylinderMeasure::sample_axis(std::mt19937_64& rng) const {
  std::uniform_int_distribution<long> digit(1, m_);
  double pm = 1, qm = 0, p = 0, q = 1;
  for (int d = 0; d < depth_; ++d) {
    const long a = digit(rng);
    const double np = a * p + pm, nq = a * q + qm;
    pm = p;
    qm = q;
    p = np;
    q = nq;
  }
  return (p + 0.5 * pm) / (q + 0.5 * qm);
}

ConditionAReport verify_condition_A(const MeasureSampler& m, const std::vector<std::vector<double>>& centers,
                                    const std::vector<double>& radii) {
  std::vector<double> lx, ly, rs, ms;
  for (const auto& c : centers)
    for (double r : radii) {
      const double mass = m.ball_mass(c, r);
      if (mass <= 0) continue;
      lx.push_back(std::log(r));
      ly.push_back(std::log(mass));
      rs.push_back(r);
      ms.push_back(mass);
    }
  ConditionAReport out;
  out.balls = lx.size();
  if (lx.size() < 2) return out;
  const LineFit f = least_squares(lx, ly);
  out.delta = f.slope;
  out.residual = f.residual;
  out.a = std::numeric_limits<double>::infinity();
  out.b = 0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double v = ms[i] / std::pow(rs[i], out.delta);
    out.a = std::min(out.a, v);
    out.b = std::max(out.b, v);
  }
  return out;
}

ConditionAReport verify_condition_A(const MeasureSampler& m, std::size_t count, const std::vector<double>& radii,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> centers(count);
  for (auto& c : centers) c = m.sample_support(rng);
  return verify_condition_A(m, centers, radii);
}

DecayReport decay_exponent_estimate(const MeasureSampler& m, const DecayOptions& o) {
  if (o.centers == 0 || o.line_samples == 0 || o.radii.empty())
    throw std::invalid_argument("insufficient samples for decay estimate");
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> axis_pick(0, m.dimension() - 1);
  DecayReport rep;
  std::vector<double> lx, ly;
  for (double e : o.eps_ratios) {
    if (e >= 1) ++rep.saturated;
  }
  std::vector<double> sum(o.eps_ratios.size(), 0.0);
  std::vector<std::size_t> cnt(o.eps_ratios.size(), 0);
  for (std::size_t ci = 0; ci < o.centers; ++ci) {
    const auto c = m.sample_support(rng);
    for (double r : o.radii) {
      const double ball = m.ball_mass(c, r);
      std::vector<std::pair<std::size_t, double>> lines{{axis_pick(rng), 0.0}};
      lines.front().second = c[lines.front().first];
      for (std::size_t l = 1; l < o.line_samples; ++l) {
        const std::size_t a = axis_pick(rng);
        lines.push_back({a, c[a] + u(rng) * r});
      }
      if (ball <= 0) continue;
      for (std::size_t ei = 0; ei < o.eps_ratios.size(); ++ei) {
        const double e = o.eps_ratios[ei];
        if (e >= 1) continue;
        double best = 0;
        for (const auto& [a, off] : lines) best = std::max(best, m.slab_mass(c, r, a, off, e * r) / ball);
        if (best <= 0) continue;
        sum[ei] += std::log(best);
        ++cnt[ei];
      }
    }
  }
  for (std::size_t ei = 0; ei < o.eps_ratios.size(); ++ei) {
    if (cnt[ei] == 0) continue;
    lx.push_back(std::log(o.eps_ratios[ei]));
    ly.push_back(sum[ei] / static_cast<double>(cnt[ei]));
    rep.used += cnt[ei];
  }
  if (lx.size() < 3) throw std::invalid_argument("insufficient samples for decay estimate");
  const LineFit f = least_squares(lx, ly);
  rep.alpha = f.slope;
  rep.residual = f.residual;
  rep.alpha_low = f.slope - 2 * f.slope_stderr;
  rep.alpha_high = f.slope + 2 * f.slope_stderr;
  return rep;
}

Rational estimate_cylinder_delta(long M) {
  CylinderMeasure m(M, 20);
  std::vector<double> radii;
  for (int i = 0; i < 8; ++i) radii.push_back(std::pow(10.0, -2.0 - 0.5 * i));
  const ConditionAReport r = verify_condition_A(m, 64, radii, 20240611);
  if (!(r.delta > 0)) throw std::runtime_error("cylinder delta estimate failed");
  return Rational(Integer(static_cast<long>(std::floor(r.delta * 1000))), Integer(1000));
}

// ---------------------------------------------------------------------------
// Output

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string report_to_csv(const DimensionReport& r) {
  std::string s = "# badapprox.dimension/1 method=" + r.method + "\nscale,value\n";
  for (std::size_t i = 0; i < r.scales.size(); ++i) s += format_double(r.scales[i]) + "," + format_double(r.values[i]) + "\n";
  s += "# exponent=" + format_double(r.exponent) + " residual=" + format_double(r.residual) + "\n";
  return s;
}

std::string report_to_json(const DimensionReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "badapprox.dimension/1";
  j["method"] = r.method;
  j["scales"] = r.scales;
  j["values"] = r.values;
  j["exponent"] = r.exponent;
  j["intercept"] = r.intercept;
  j["residual"] = r.residual;
  j["flags"] = r.flags;
  return j.dump(2) + "\n";
}

}  // namespace badapprox
