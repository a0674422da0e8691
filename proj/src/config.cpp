#include "badapprox/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace badapprox {
namespace {

const std::set<std::string> kInstanceKeys{"instance", "k",  "theta_override", "kappa1", "kappa2", "M",
                                          "p",        "s",  "t",              "h",      "exponents", "delta"};
const std::set<std::string> kRunKeys{"depth", "mode", "seed", "out", "format", "workers", "samples", "height_bound"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

long parse_long(const std::string& key, const std::string& v, long lo) {
  try {
    std::size_t used = 0;
    long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    if (x < lo) throw ConfigError(key + " must be at least " + std::to_string(lo));
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for " + key + ": '" + v + "'");
  }
}

Rational parse_rational(const std::string& key, const std::string& v) {
  try {
    return Rational::parse(v);
  } catch (const std::exception&) {
    throw ConfigError("invalid rational for " + key + ": '" + v + "'");
  }
}

Integer parse_integer(const std::string& key, const std::string& v) {
  Rational r = parse_rational(key, v);
  if (r.den() != 1) throw ConfigError(key + " must be an integer");
  return r.num();
}

std::vector<Rational> parse_list(const std::string& key, const std::string& v) {
  std::vector<Rational> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(key, trim(item)));
  if (out.empty()) throw ConfigError(key + " is empty");
  return out;
}

const std::string& require(const std::map<std::string, std::string>& keys, const std::string& k) {
  auto it = keys.find(k);
  if (it == keys.end()) throw ConfigError("missing key '" + k + "'");
  return it->second;
}

void reject_extra(const std::map<std::string, std::string>& keys, const std::set<std::string>& allowed,
                  const std::string& instance) {
  for (const auto& [k, v] : keys)
    if (!allowed.count(k)) throw ConfigError("key '" + k + "' does not apply to instance " + instance);
}

std::pair<Rational, Rational> pair_exponents(const std::map<std::string, std::string>& keys) {
  auto it = keys.find("exponents");
  if (it == keys.end()) return {Rational(Integer(1), Integer(2)), Rational(Integer(1), Integer(2))};
  auto v = parse_list("exponents", it->second);
  if (v.size() != 2) throw ConfigError("exponents must list two values");
  return {v[0], v[1]};
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "depth") {
    cfg.depth = parse_long(key, value, 1);
  } else if (key == "mode") {
    try {
      cfg.mode = mode_from_string(value);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "seed") {
    parse_long(key, value, 0);
    cfg.seed = std::stoull(value);
  } else if (key == "out") {
    if (value.empty()) throw ConfigError("out must not be empty");
    cfg.out = value;
  } else if (key == "format") {
    if (value != "csv" && value != "json" && value != "both") throw ConfigError("format must be csv, json or both");
    cfg.format = value;
  } else if (key == "workers") {
    cfg.workers = static_cast<unsigned>(parse_long(key, value, 0));
  } else if (key == "samples") {
    cfg.samples = static_cast<std::size_t>(parse_long(key, value, 1));
  } else if (key == "height_bound") {
    cfg.height_bound = parse_long(key, value, 1);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": repeated key '" + key + "'");
    if (kInstanceKeys.count(key)) {
      cfg.instance[key] = value;
    } else if (kRunKeys.count(key)) {
      apply_setting(cfg, key, value);
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!cfg.instance.count("instance")) throw ConfigError("missing key 'instance'");
  instance_from_config(cfg.instance);  // validate before any computation
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

InstanceSpec instance_from_config(const std::map<std::string, std::string>& keys) {
  const std::string& name = require(keys, "instance");
  const std::set<std::string> common{"instance", "theta_override", "kappa1", "kappa2"};
  auto allowed = [&](std::initializer_list<const char*> extra) {
    std::set<std::string> s = common;
    for (const char* e : extra) s.insert(e);
    reject_extra(keys, s, name);
  };
  InstanceSpec spec;
  try {
    if (name == "bad_interval") {
      allowed({"k"});
      spec = instance_bad_interval(parse_integer("k", require(keys, "k")));
    } else if (name == "bad_ij") {
      allowed({"k", "exponents"});
      auto [i, j] = pair_exponents(keys);
      spec = instance_bad_ij(i, j, parse_integer("k", require(keys, "k")));
    } else if (name == "bad_N") {
      allowed({"k", "exponents"});
      spec = instance_bad_N(parse_list("exponents", require(keys, "exponents")), parse_integer("k", require(keys, "k")));
    } else if (name == "fm_product") {
      allowed({"k", "exponents", "M", "delta"});
      auto [i, j] = pair_exponents(keys);
      std::optional<Rational> delta;
      if (keys.count("delta")) delta = parse_rational("delta", keys.at("delta"));
      spec = instance_FM_product(parse_long("M", require(keys, "M"), 2), i, j, parse_integer("k", require(keys, "k")),
                                 delta);
    } else if (name == "cantor_interval") {
      allowed({"k"});
      spec = instance_cantor_interval(parse_integer("k", require(keys, "k")));
    } else if (name == "gaussian") {
      allowed({"k", "exponents"});
      auto [i, j] = pair_exponents(keys);
      spec = instance_gaussian(i, j, parse_integer("k", require(keys, "k")));
    } else if (name == "padic") {
      allowed({"k", "exponents", "p", "s", "t"});
      auto [i, j] = pair_exponents(keys);
      const unsigned long p = static_cast<unsigned long>(parse_long("p", require(keys, "p"), 2));
      const unsigned long s = static_cast<unsigned long>(parse_long("s", require(keys, "s"), 1));
      std::optional<unsigned long> t;
      if (keys.count("t")) t = static_cast<unsigned long>(parse_long("t", keys.at("t"), 1));
      spec = instance_padic(p, i, j, s, t);
      if (keys.count("k") && parse_integer("k", keys.at("k")) != spec.k) throw ConfigError("k must equal p^s");
    } else if (name == "power_series") {
      allowed({"k", "exponents", "h"});
      auto [i, j] = pair_exponents(keys);
      const unsigned long h = static_cast<unsigned long>(parse_long("h", require(keys, "h"), 2));
      Integer k = parse_integer("k", require(keys, "k"));
      unsigned long k_exp = 0;
      for (Integer x = k; x > 1; x /= h, ++k_exp)
        if (x % h != 0) throw ConfigError("k must be a power of h");
      spec = instance_power_series(h, i, j, k_exp);
    } else {
      throw ConfigError("unknown instance '" + name + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(name + ": " + e.what());
  }
  for (const char* key : {"theta_override", "kappa1", "kappa2"}) {
    auto it = keys.find(key);
    if (it == keys.end()) continue;
    Rational v = parse_rational(key, it->second);
    if (v.sign() <= 0) throw ConfigError(std::string(key) + " must be positive");
    if (std::string(key) == "theta_override") spec.theta = v;
    if (std::string(key) == "kappa1") spec.kappa1 = v;
    if (std::string(key) == "kappa2") spec.kappa2 = v;
    spec.config[key] = v.str();
  }
  if (spec.kappa2 >= spec.kappa1) throw ConfigError("kappa2 must be smaller than kappa1");
  return spec;
}

}  // namespace badapprox
