#include "badapprox/serialization.hpp"

#include <json.hpp>

namespace badapprox {
namespace {

using json = nlohmann::ordered_json;

json coord_json(const Coord& c) {
  switch (c.index()) {
    case 0: return std::get<Rational>(c).str();
    case 1: {
      const auto& z = std::get<GaussianRational>(c);
      return json::array({z.re().str(), z.im().str()});
    }
    case 2: {
      const auto& x = std::get<PAdicTrunc>(c);
      return {{"residue", x.residue().get_str()}, {"order", x.order()}, {"exact", x.exact()}};
    }
    default: {
      const auto& x = std::get<LaurentTrunc>(c);
      return {{"top", x.top()}, {"coeffs", x.coeffs()}, {"exact", x.exact()}};
    }
  }
}

Coord coord_from_json(const json& j, const CoordSpace& space) {
  switch (space.kind) {
    case CoordKind::real: return Rational::parse(j.get<std::string>());
    case CoordKind::complex:
      if (!j.is_array() || j.size() != 2) throw FormatError("complex coordinate must be [re, im]");
      return GaussianRational(Rational::parse(j[0].get<std::string>()), Rational::parse(j[1].get<std::string>()));
    case CoordKind::padic:
      return PAdicTrunc(space.prime, j.at("order").get<unsigned long>(), Integer(j.at("residue").get<std::string>()),
                        j.at("exact").get<bool>());
    case CoordKind::laurent:
      return LaurentTrunc(space.prime, j.at("top").get<long>(), j.at("coeffs").get<std::vector<unsigned long>>(),
                          j.at("exact").get<bool>());
  }
  throw FormatError("unknown coordinate kind");
}

json rationals_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

std::vector<Rational> rationals_from_json(const json& j) {
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(Rational::parse(x.get<std::string>()));
  return out;
}

}  // namespace

std::string tree_to_json(const CantorTree& tree) {
  json root;
  root["schema"] = kTreeSchema;
  json inst = json::object();
  for (const auto& [k, v] : tree.instance) inst[k] = v;
  root["instance"] = inst;
  const auto& p = tree.params;
  root["params"] = {{"k", p.k.get_str()},
                    {"theta", p.theta.str()},
                    {"kappa1", p.kappa1.str()},
                    {"kappa2", p.kappa2.str()},
                    {"depth", p.depth},
                    {"mode", to_string(p.mode)},
                    {"rho", rationals_json(p.rho.exponents)},
                    {"delta", rationals_json(p.delta)}};
  root["c_k"] = tree.c_k.str();
  json spaces = json::array();
  for (const auto& s : tree.spaces) spaces.push_back({{"kind", to_string(s.kind)}, {"prime", s.prime}});
  root["spaces"] = spaces;
  json excluded = json::array();
  for (const auto& label : tree.excluded) {
    json l = json::array();
    for (const auto& x : label) l.push_back(x.get_str());
    excluded.push_back(l);
  }
  root["excluded"] = excluded;
  json levels = json::array();
  for (const auto& level : tree.levels) {
    json nodes = json::array();
    for (const auto& n : level.nodes) {
      json center = json::array();
      for (const auto& c : n.center) center.push_back(coord_json(c));
      long parent = n.parent == TreeNode::kNoParent ? -1 : static_cast<long>(n.parent);
      nodes.push_back(json::array(
          {parent, center, n.mu.str(), json::array({n.audit.candidates, n.audit.pruned, n.audit.kept})}));
    }
    levels.push_back({{"half_widths", rationals_json(level.half_widths)}, {"nodes", nodes}});
  }
  root["levels"] = levels;
  return root.dump() + "\n";
}

CantorTree tree_from_json(const std::string& text) {
  try {
    json root = json::parse(text);
    if (root.at("schema").get<std::string>() != kTreeSchema) throw FormatError("unsupported tree schema");
    CantorTree tree;
    for (const auto& [k, v] : root.at("instance").items()) tree.instance[k] = v.get<std::string>();
    const json& p = root.at("params");
    tree.params.k = Integer(p.at("k").get<std::string>());
    tree.params.theta = Rational::parse(p.at("theta").get<std::string>());
    tree.params.kappa1 = Rational::parse(p.at("kappa1").get<std::string>());
    tree.params.kappa2 = Rational::parse(p.at("kappa2").get<std::string>());
    tree.params.depth = p.at("depth").get<long>();
    tree.params.mode = mode_from_string(p.at("mode").get<std::string>());
    tree.params.rho.exponents = rationals_from_json(p.at("rho"));
    tree.params.delta = rationals_from_json(p.at("delta"));
    tree.c_k = Rational::parse(root.at("c_k").get<std::string>());
    for (const auto& s : root.at("spaces"))
      tree.spaces.push_back({coord_kind_from_string(s.at("kind").get<std::string>()), s.at("prime").get<unsigned long>()});
    tree.params.validate(tree.spaces.size());
    for (const auto& label : root.at("excluded")) {
      std::vector<Integer> l;
      for (const auto& x : label) l.emplace_back(x.get<std::string>());
      tree.excluded.push_back(std::move(l));
    }
    std::size_t previous = 0;
    for (const auto& lj : root.at("levels")) {
      TreeLevel level;
      level.half_widths = rationals_from_json(lj.at("half_widths"));
      if (level.half_widths.size() != tree.spaces.size()) throw FormatError("half-width count mismatch");
      for (const auto& nj : lj.at("nodes")) {
        if (!nj.is_array() || nj.size() != 4) throw FormatError("malformed node");
        TreeNode node;
        long parent = nj[0].get<long>();
        if (tree.levels.empty() ? parent != -1 : (parent < 0 || static_cast<std::size_t>(parent) >= previous))
          throw FormatError("node parent index out of range");
        node.parent = parent < 0 ? TreeNode::kNoParent : static_cast<std::size_t>(parent);
        if (nj[1].size() != tree.spaces.size()) throw FormatError("center dimension mismatch");
        for (std::size_t i = 0; i < tree.spaces.size(); ++i)
          node.center.push_back(coord_from_json(nj[1][i], tree.spaces[i]));
        node.mu = Rational::parse(nj[2].get<std::string>());
        const json& a = nj[3];
        node.audit = {a.at(0).get<std::size_t>(), a.at(1).get<std::size_t>(), a.at(2).get<std::size_t>()};
        level.nodes.push_back(std::move(node));
      }
      if (level.nodes.empty()) throw FormatError("empty tree level");
      previous = level.nodes.size();
      tree.levels.push_back(std::move(level));
    }
    if (tree.levels.size() != static_cast<std::size_t>(tree.params.depth) || tree.levels[0].nodes.size() != 1)
      throw FormatError("tree levels do not match the recorded depth");
    return tree;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("corrupt tree file: ") + e.what());
  }
}

}  // namespace badapprox
