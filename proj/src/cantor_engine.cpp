#include "badapprox/cantor_engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace badapprox {

// ---------------------------------------------------------------------------
// Families, providers, ground sets

void RhoFamily::validate() const {
  if (exponents.empty()) throw std::invalid_argument("rho family is empty");
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i].sign() <= 0) throw std::invalid_argument("rho exponents must be positive");
    if (i > 0 && exponents[i] < exponents[i - 1])
      throw std::invalid_argument("rho exponents must be nondecreasing (rho_1 >= ... >= rho_t)");
  }
}

PowerTerm RhoFamily::at_power(std::size_t i, const Integer& k, long m) const {
  return {Rational(k), Rational(-m) * exponents.at(i)};
}

PowerTerm RhoFamily::at(std::size_t i, const PowerTerm& beta) const {
  return {beta.base, -(beta.exponent * exponents.at(i))};
}

std::string ResonantProvider::label_string(const ResonantPoint& r) const {
  std::string s = "(";
  for (std::size_t i = 0; i < r.label.size(); ++i) s += (i ? "," : "") + r.label[i].get_str();
  return s + ")";
}

Candidates FullCubeGround::candidates(const Rect& parent, const std::vector<Rational>& half_widths) const {
  Subdivision sub = subdivide(parent, half_widths, spaces_);
  return {std::move(sub.children), std::move(sub.fringe)};
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::theorem: return "theorem";
    case Mode::greedy: return "greedy";
    case Mode::control: return "control";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "theorem") return Mode::theorem;
  if (s == "greedy") return Mode::greedy;
  if (s == "control") return Mode::control;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

// ---------------------------------------------------------------------------
// Parameters and scales

Rational ConstructionParams::kappa() const {
  return min(Rational(1), (kappa1 - kappa2) / Rational(2));
}

void ConstructionParams::validate(std::size_t dimension) const {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (theta.sign() <= 0) throw std::invalid_argument("theta must be positive");
  if (!(kappa2.sign() > 0 && kappa2 < kappa1)) throw std::invalid_argument("need 0 < kappa2 < kappa1");
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  rho.validate();
  if (rho.size() != dimension) throw std::invalid_argument("rho family does not match the dimension");
  if (delta.size() != dimension) throw std::invalid_argument("delta does not match the dimension");
  for (const auto& d : delta)
    if (d.sign() <= 0) throw std::invalid_argument("delta must be positive");
}

Threshold make_threshold(PowerProduct exact) {
  RationalBounds b = bound_power_product(exact);
  return {std::move(exact), std::move(b)};
}

bool below_threshold(const Distance& d, const Threshold& t) {
  const Rational& x = d.magnitude.base;
  const Rational& e = d.magnitude.exponent;
  if (e == Rational(1)) {
    if (x < t.bounds.lower) return true;
    if (!d.upper_bound && x >= t.bounds.upper) return false;
  } else if (e == Rational(Integer(1), Integer(2))) {
    if (x < t.bounds.lower * t.bounds.lower) return true;
    if (!d.upper_bound && x >= t.bounds.upper * t.bounds.upper) return false;
  }
  return distance_less(d, t.exact);
}

ScaleLadder::ScaleLadder(const ConstructionParams& params, std::vector<CoordSpace> spaces)
    : params_(params), spaces_(std::move(spaces)) {}

Rational ScaleLadder::floor_width(const PowerProduct& value, std::size_t i) const {
  RationalBounds b = bound_power_product(value);
  if (!spaces_[i].ultrametric()) return b.lower;
  const unsigned long p = spaces_[i].prime;
  Rational P(static_cast<long>(p));
  long a = ultrametric_exponent_floor(b.lower.sign() > 0 ? b.lower : b.upper, p);
  while (compare_power_products({{pow(P, -(a - 1)), Rational(1)}}, value) <= 0) --a;
  while (compare_power_products({{pow(P, -a), Rational(1)}}, value) > 0) ++a;
  return pow(P, -a);
}

std::vector<Rational> ScaleLadder::half_widths(long n) const {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < spaces_.size(); ++i)
    out.push_back(floor_width({{params_.theta, Rational(1)}, params_.rho.at_power(i, params_.k, n)}, i));
  return out;
}

std::vector<Rational> ScaleLadder::candidate_half_widths(long n) const {
  std::vector<Rational> h = half_widths(n + 1);
  if (params_.mode != Mode::theorem) return h;
  for (std::size_t i = 0; i < h.size(); ++i) {
    Rational doubled = Rational(2) * h[i];
    if (spaces_[i].ultrametric())
      h[i] = pow(Rational(static_cast<long>(spaces_[i].prime)), -ultrametric_exponent_floor(doubled, spaces_[i].prime));
    else
      h[i] = doubled;
  }
  return h;
}

Threshold ScaleLadder::prune_margin(long n, std::size_t i) const {
  return make_threshold({{Rational(2) * params_.theta, Rational(1)}, params_.rho.at_power(i, params_.k, n + 1)});
}

PowerProduct ScaleLadder::measure_ratio() const {
  PowerProduct r;
  for (std::size_t i = 0; i < spaces_.size(); ++i)
    r.push_back({Rational(params_.k), params_.rho.exponents[i] * params_.delta[i]});
  return r;
}

Integer ScaleLadder::theorem_target() const {
  PowerProduct value = measure_ratio();
  value.push_back({params_.kappa(), Rational(1)});
  Integer t = bound_power_product(value).lower.floor();
  if (t < 0) t = 0;
  while (compare_power_products({{Rational(t + 1), Rational(1)}}, value) <= 0) ++t;
  while (t > 0 && compare_power_products({{Rational(t), Rational(1)}}, value) > 0) --t;
  return t;
}

Rect CantorTree::rect(std::size_t level, std::size_t index) const {
  return {levels.at(level).nodes.at(index).center, levels.at(level).half_widths};
}

std::size_t CantorTree::node_count() const {
  std::size_t n = 0;
  for (const auto& l : levels) n += l.nodes.size();
  return n;
}

// ---------------------------------------------------------------------------
// Pruning

namespace {

bool same_value(const ResonantCoord& a, const ResonantCoord& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<Rational>(&a)) return *x == std::get<Rational>(b);
  if (const auto* x = std::get_if<GaussianRational>(&a)) return *x == std::get<GaussianRational>(b);
  const auto& x = std::get<RationalFunction>(a);
  const auto& y = std::get<RationalFunction>(b);
  return x.num * y.den == y.num * x.den;
}

std::size_t distinct_values(const std::vector<ResonantPoint>& rs) {
  std::vector<const ResonantPoint*> seen;
  for (const auto& r : rs) {
    bool dup = std::any_of(seen.begin(), seen.end(), [&](const ResonantPoint* s) {
      for (std::size_t i = 0; i < r.coords.size(); ++i)
        if (!same_value(r.coords[i], s->coords[i])) return false;
      return true;
    });
    if (!dup) seen.push_back(&r);
  }
  return seen.size();
}

struct PruneDetail {
  PruneResult result;
  std::size_t distinct = 0;
};

PruneDetail prune_detail(const Rect& parent, const std::vector<Rect>& candidates, const ResonantProvider& provider,
                         long n, const ConstructionParams& params) {
  const std::size_t t = provider.dimension();
  std::vector<Threshold> margins;
  Rect region = parent;
  for (std::size_t i = 0; i < t; ++i) {
    margins.push_back(make_threshold(
        {{Rational(2) * params.theta, Rational(1)}, params.rho.at_power(i, params.k, n + 1)}));
    region.half_widths[i] += margins.back().bounds.upper;
  }
  std::vector<ResonantPoint> rs = provider.enumerate(n + 1, params.k, region);
  PruneDetail out;
  out.result.resonant_seen = rs.size();
  out.distinct = distinct_values(rs);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const Point& x = candidates[c].center;
    bool pruned = std::any_of(rs.begin(), rs.end(), [&](const ResonantPoint& r) {
      for (std::size_t i = 0; i < t; ++i)
        if (!below_threshold(resonant_distance(x[i], r.coords[i]), margins[i])) return false;
      return true;
    });
    if (pruned)
      ++out.result.pruned;
    else
      out.result.kept.push_back(c);
  }
  return out;
}

void check_point_kinds(const Point& p, const std::vector<CoordSpace>& spaces) {
  std::vector<CoordSpace> got = spaces_of(p);
  if (got != spaces) throw std::invalid_argument("point coordinates do not match the provider's spaces");
}

}  // namespace

PruneResult prune_level(const Rect& parent, const std::vector<Rect>& candidates, const ResonantProvider& provider,
                        long n, const ConstructionParams& params) {
  return prune_detail(parent, candidates, provider, n, params).result;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

struct ParentOutcome {
  std::vector<Point> children;
  NodeAudit audit;
};

ParentOutcome expand_parent(const Rect& parent, long n, std::size_t index, const ConstructionParams& params,
                            const ResonantProvider& provider, const GroundSet& ground,
                            const std::vector<Rational>& candidate_hw, const Integer& target) {
  Candidates cands = ground.candidates(parent, candidate_hw);
  ParentOutcome out;
  out.audit.candidates = cands.rects.size();
  std::vector<std::size_t> kept;
  if (params.mode == Mode::control) {
    for (std::size_t i = 0; i < cands.rects.size(); ++i) kept.push_back(i);
  } else {
    PruneResult pr = prune_level(parent, cands.rects, provider, n, params);
    out.audit.pruned = pr.pruned;
    kept = std::move(pr.kept);
  }
  const std::string where = "level " + std::to_string(n) + " node " + std::to_string(index);
  if (params.mode == Mode::theorem) {
    if (Integer(static_cast<unsigned long>(kept.size())) < target)
      throw ConstructionError("kappa target unreachable at " + where + ": " + std::to_string(kept.size()) +
                              " survivors, target " + target.get_str());
    std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
      return compare_points(cands.rects[a].center, cands.rects[b].center) < 0;
    });
    kept.resize(target.get_ui());
  } else if (kept.empty()) {
    throw ConstructionError("no surviving children at " + where);
  }
  out.audit.kept = kept.size();
  for (std::size_t i : kept) out.children.push_back(std::move(cands.rects[i].center));
  return out;
}

}  // namespace

Rational default_c_k(const ConstructionParams& params) {
  std::optional<Rational> best;
  for (std::size_t i = 0; i < params.rho.size(); ++i) {
    Rational v = bound_power_product({{params.theta, Rational(1)}, params.rho.at_power(i, params.k, 1)}).lower;
    if (!best || v < *best) best = v;
  }
  return best.value_or(params.theta);
}

CantorTree build_tree(const ConstructionParams& params, const ResonantProvider& provider, const GroundSet& ground,
                      const Point& root_center, unsigned workers) {
  const std::vector<CoordSpace>& spaces = provider.spaces();
  params.validate(spaces.size());
  check_point_kinds(root_center, spaces);
  ScaleLadder ladder(params, spaces);

  CantorTree tree;
  tree.params = params;
  tree.spaces = spaces;
  tree.c_k = default_c_k(params);
  tree.levels.push_back({ladder.half_widths(1), {}});
  tree.levels[0].nodes.push_back({TreeNode::kNoParent, root_center, Rational(1), {}});

  Rect root{root_center, tree.levels[0].half_widths};
  for (const auto& r : provider.enumerate(1, params.k, root)) tree.excluded.push_back(r.label);
  if (params.mode == Mode::theorem && !tree.excluded.empty())
    throw ConstructionError("resonant overflow: " + std::to_string(tree.excluded.size()) +
                            " resonant points with beta < k meet the root");

  Integer target = params.mode == Mode::theorem ? ladder.theorem_target() : Integer(0);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

  for (long n = 1; n < params.depth; ++n) {
    const TreeLevel& level = tree.levels[static_cast<std::size_t>(n - 1)];
    const std::vector<Rational> cand_hw = ladder.candidate_half_widths(n);
    const std::size_t count = level.nodes.size();
    std::vector<ParentOutcome> outcomes(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          outcomes[i] = expand_parent({level.nodes[i].center, level.half_widths}, n, i, params, provider, ground,
                                      cand_hw, target);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    unsigned threads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (threads <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);

    TreeLevel child_level{ladder.half_widths(n + 1), {}};
    TreeLevel& parents = tree.levels[static_cast<std::size_t>(n - 1)];
    for (std::size_t i = 0; i < count; ++i) {
      parents.nodes[i].audit = outcomes[i].audit;
      Rational mu = parents.nodes[i].mu / Rational(static_cast<long>(outcomes[i].children.size()));
      for (auto& c : outcomes[i].children) child_level.nodes.push_back({i, std::move(c), mu, {}});
    }
    tree.levels.push_back(std::move(child_level));
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Certification

CertifyResult certify_separation(const Point& x, const ResonantProvider& provider, const Integer& k,
                                 const Rational& c_k, const RhoFamily& rho, long height_bound) {
  const std::size_t t = provider.dimension();
  if (x.size() != t || rho.size() != t) throw std::invalid_argument("certify_separation: dimension mismatch");
  if (c_k.sign() <= 0) throw std::invalid_argument("certify_separation: c_k must be positive");
  CertifyResult out;

  Rect probe{x, std::vector<Rational>(t, c_k)};
  for (auto& r : provider.enumerate(1, k, probe)) {
    ++out.checked;
    bool coincide = true;
    for (std::size_t i = 0; i < t && coincide; ++i) {
      Distance d = resonant_distance(x[i], r.coords[i]);
      coincide = !d.upper_bound && d.magnitude.base.is_zero();
    }
    if (coincide) {
      out.ok = false;
      out.coincidence = true;
      out.witness = std::move(r);
      return out;
    }
  }

  for (long m = 2; m <= height_bound; ++m) {
    Rect region{x, {}};
    for (std::size_t i = 0; i < t; ++i)
      region.half_widths.push_back(bound_power_product({{c_k, Rational(1)}, rho.at_power(i, k, m - 1)}).upper);
    for (auto& r : provider.enumerate(m, k, region)) {
      ++out.checked;
      bool violated = true;
      for (std::size_t i = 0; i < t && violated; ++i)
        violated = distance_less(resonant_distance(x[i], r.coords[i]), {{c_k, Rational(1)}, rho.at(i, r.height)});
      if (violated) {
        out.ok = false;
        out.witness = std::move(r);
        return out;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counting hypotheses

CountingReport check_counting_hypotheses(const ResonantProvider& provider, const ConstructionParams& params,
                                         const GroundSet& ground, const std::vector<Rect>& sample_rects, long n) {
  params.validate(provider.dimension());
  ConstructionParams theorem = params;
  theorem.mode = Mode::theorem;
  ScaleLadder ladder(theorem, provider.spaces());
  const std::vector<Rational> cand_hw = ladder.candidate_half_widths(n);
  PowerProduct upper = ladder.measure_ratio();
  PowerProduct lower = upper;
  upper.push_back({params.kappa1, Rational(1)});
  lower.push_back({params.kappa2, Rational(1)});
  const double k1 = bound_power_product(upper).lower.to_double();
  const double k2 = bound_power_product(lower).lower.to_double();

  CountingReport report;
  report.level = n;
  for (const auto& rect : sample_rects) {
    Candidates cands = ground.candidates(rect, cand_hw);
    PruneDetail pd = prune_detail(rect, cands.rects, provider, n, params);
    CountingRow row;
    row.candidates = cands.rects.size();
    row.pruned = pd.result.pruned;
    row.resonant_pairs = pd.result.resonant_seen;
    row.resonant_values = pd.distinct;
    row.kappa1_threshold = k1;
    row.kappa2_threshold = k2;
    row.candidates_pass = compare_power_products({{Rational(static_cast<long>(row.candidates)), Rational(1)}}, upper) >= 0;
    row.pruned_pass = compare_power_products({{Rational(static_cast<long>(row.pruned)), Rational(1)}}, lower) <= 0;
    report.all_pass = report.all_pass && row.candidates_pass && row.pruned_pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace badapprox
