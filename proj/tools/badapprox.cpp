#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "badapprox/config.hpp"
#include "badapprox/dimension_lab.hpp"
#include "badapprox/serialization.hpp"

using namespace badapprox;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kConstruction = 3, kCertify = 4, kBeyondRange = 5, kCorrupt = 6 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read tree file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool want_json(const std::string& f) { return f == "json" || f == "both"; }
bool want_csv(const std::string& f) { return f == "csv" || f == "both"; }

json config_echo(const std::map<std::string, std::string>& instance) {
  json j = json::object();
  for (const auto& [k, v] : instance) j[k] = v;
  return j;
}

/// delta = sum of delta_i, epsilon(k) with lambda = k^(min e_i), and delta - 2 epsilon(k).
json reference_line(const ConstructionParams& p) {
  Rational delta(0);
  for (const auto& d : p.delta) delta += d;
  Rational e_min = p.rho.exponents.front();
  for (const auto& e : p.rho.exponents) e_min = min(e_min, e);
  const Rational lambda = bound_power_product({{Rational(p.k), e_min}}).lower;
  json j;
  j["delta"] = delta.to_double();
  j["kappa"] = p.kappa().str();
  j["lambda"] = lambda.to_double();
  const double eps = epsilon_k(p.kappa(), lambda);
  j["epsilon_k"] = eps;
  j["delta_minus_2_epsilon"] = delta.to_double() - 2 * eps;
  j["vacuous"] = 2 * eps >= delta.to_double();
  if (j["vacuous"].get<bool>()) j["note"] = "epsilon(k) >= delta/2: the theoretical bound is vacuous at this k";
  return j;
}

std::string label_json(const std::vector<Integer>& label) {
  std::string s = "[";
  for (std::size_t i = 0; i < label.size(); ++i) s += (i ? "," : "") + label[i].get_str();
  return s + "]";
}

// ---------------------------------------------------------------------------

int cmd_construct(ExperimentConfig cfg) {
  const InstanceSpec spec = instance_from_config(cfg.instance);
  const ConstructionParams params = spec.params(cfg.depth, cfg.mode);
  const auto t0 = std::chrono::steady_clock::now();
  CantorTree tree;
  try {
    tree = build_tree(params, *spec.provider, *spec.ground, spec.root_center, cfg.workers);
  } catch (const ConstructionError& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return kConstruction;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  tree.instance = spec.config;

  const std::filesystem::path out(cfg.out);
  write_file(out / "tree.json", tree_to_json(tree));

  json report;
  report["schema"] = "badapprox.report/1";
  report["command"] = "construct";
  report["config"] = config_echo(spec.config);
  report["config"]["depth"] = cfg.depth;
  report["config"]["mode"] = to_string(cfg.mode);
  report["config"]["seed"] = cfg.seed;
  report["theta"] = params.theta.str();
  report["theta_formula"] = spec.theta_formula;
  report["c_k"] = tree.c_k.str();
  report["ground"] = spec.ground->descriptor();
  if (cfg.mode == Mode::theorem) report["theorem_target"] = ScaleLadder(params, spec.spaces).theorem_target().get_str();
  json excluded = json::array();
  for (const auto& l : tree.excluded) excluded.push_back(json::parse(label_json(l)));
  report["excluded"] = excluded;
  json levels = json::array();
  std::string csv = "# badapprox.construct/1\nlevel,nodes,candidates,pruned,kept\n";
  for (std::size_t n = 0; n < tree.levels.size(); ++n) {
    NodeAudit total;
    for (const auto& node : tree.levels[n].nodes) {
      total.candidates += node.audit.candidates;
      total.pruned += node.audit.pruned;
      total.kept += node.audit.kept;
    }
    levels.push_back({{"level", n + 1},
                      {"nodes", tree.levels[n].nodes.size()},
                      {"candidates", total.candidates},
                      {"pruned", total.pruned},
                      {"kept", total.kept}});
    csv += std::to_string(n + 1) + "," + std::to_string(tree.levels[n].nodes.size()) + "," +
           std::to_string(total.candidates) + "," + std::to_string(total.pruned) + "," + std::to_string(total.kept) +
           "\n";
  }
  report["levels"] = levels;
  report["reference"] = reference_line(params);
  if (want_json(cfg.format)) write_file(out / "construct_report.json", report.dump(2) + "\n");
  if (want_csv(cfg.format)) write_file(out / "construct_report.csv", csv);
  write_file(out / "timings.json", json{{"construct_seconds", seconds}}.dump(2) + "\n");

  std::cout << "constructed " << spec.name << " depth " << cfg.depth << " (" << tree.node_count() << " nodes) -> "
            << (out / "tree.json").string() << "\n";
  return kOk;
}

int cmd_certify(const std::string& tree_path, std::optional<long> height_bound, const std::string& out_dir,
                const std::string& format, unsigned workers) {
  CantorTree tree;
  try {
    tree = tree_from_json(read_file(tree_path));
  } catch (const FormatError& e) {
    std::cerr << e.what() << "\n";
    return kCorrupt;
  }
  const InstanceSpec spec = instance_from_config(tree.instance);
  const long bound = height_bound.value_or(tree.depth());
  const auto& deep = tree.levels.back().nodes;
  std::vector<CertifyResult> results(deep.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i; (i = next++) < deep.size();)
          results[i] = certify_separation(deep[i].center, *spec.provider, tree.params.k, tree.c_k, tree.params.rho, bound);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  json witnesses = json::array();
  std::string csv = "# badapprox.certify/1\nnode,center,witness,coincidence\n";
  std::size_t failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].ok) continue;
    ++failures;
    const std::string w = spec.provider->label_string(*results[i].witness);
    witnesses.push_back({{"node", i},
                         {"center", point_str(deep[i].center)},
                         {"witness", w},
                         {"coincidence", results[i].coincidence}});
    csv += std::to_string(i) + ",\"" + point_str(deep[i].center) + "\",\"" + w + "\"," +
           (results[i].coincidence ? "true" : "false") + "\n";
  }
  const bool beyond = bound > tree.depth();
  json report;
  report["schema"] = "badapprox.report/1";
  report["command"] = "certify";
  report["config"] = config_echo(tree.instance);
  report["height_bound"] = bound;
  report["certified_range"] = tree.depth();
  report["centers"] = deep.size();
  report["failures"] = failures;
  report["pass"] = failures == 0;
  if (failures && beyond) report["note"] = "beyond-certified-range failure";
  report["witnesses"] = witnesses;
  const std::filesystem::path out(out_dir);
  if (want_json(format)) write_file(out / "certify_report.json", report.dump(2) + "\n");
  if (want_csv(format)) write_file(out / "certify_report.csv", csv);

  if (failures == 0) {
    std::cout << "certified " << deep.size() << " centers for heights below k^" << bound << "\n";
    return kOk;
  }
  std::cout << failures << " of " << deep.size() << " centers fail"
            << (beyond ? " (beyond-certified-range failure)" : "") << "\n";
  return beyond ? kBeyondRange : kCertify;
}

int cmd_dimension(const std::string& tree_path, std::uint64_t seed, std::size_t samples, const std::string& out_dir,
                  const std::string& format) {
  CantorTree tree;
  try {
    tree = tree_from_json(read_file(tree_path));
  } catch (const FormatError& e) {
    std::cerr << e.what() << "\n";
    return kCorrupt;
  }
  if (tree.depth() < 3) throw UsageError("dimension needs at least 3 scales: tree depth is " + std::to_string(tree.depth()));
  bool ultrametric = false;
  for (const auto& s : tree.spaces) ultrametric |= s.ultrametric();

  json report;
  report["schema"] = "badapprox.report/1";
  report["command"] = "dimension";
  report["config"] = config_echo(tree.instance);
  report["seed"] = seed;
  std::string csv = "# badapprox.dimension/1\nmethod,scale,value\n";
  auto add = [&](const DimensionReport& r) {
    report[r.method] = json::parse(report_to_json(r));
    for (std::size_t i = 0; i < r.scales.size(); ++i)
      csv += r.method + "," + format_double(r.scales[i]) + "," + format_double(r.values[i]) + "\n";
    csv += "# " + r.method + " exponent=" + format_double(r.exponent) + " residual=" + format_double(r.residual) + "\n";
  };
  if (ultrametric) {
    report["box-count"] = "unavailable for ultrametric coordinates";
  } else {
    add(box_dimension(tree_points(tree), box_scales(tree)));
  }
  std::vector<double> radii;
  for (double s : box_scales(tree)) radii.push_back(s / 2);
  add(holder_exponent(tree, radii, samples, seed));
  report["reference"] = reference_line(tree.params);
  const auto& ref = report["reference"];
  csv += "# reference delta=" + format_double(ref["delta"].get<double>()) +
         " delta_minus_2_epsilon=" + format_double(ref["delta_minus_2_epsilon"].get<double>()) + "\n";

  const std::filesystem::path out(out_dir);
  if (want_json(format)) write_file(out / "dimension.json", report.dump(2) + "\n");
  if (want_csv(format)) write_file(out / "dimension.csv", csv);
  if (report.contains("box-count") && report["box-count"].is_object())
    std::cout << "box-count exponent " << format_double(report["box-count"]["exponent"].get<double>()) << "\n";
  std::cout << "mu-holder exponent " << format_double(report["mu-holder"]["exponent"].get<double>()) << "\n";
  return kOk;
}

int cmd_audit(const ExperimentConfig& cfg) {
  const InstanceSpec spec = instance_from_config(cfg.instance);
  ConstructionParams params = spec.params(cfg.depth, Mode::greedy);
  ScaleLadder ladder(params, spec.spaces);
  std::mt19937_64 rng(cfg.seed);

  // Each sample descends a random greedy path to a uniformly chosen level.
  std::map<long, std::vector<Rect>> by_level;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    const long target = std::uniform_int_distribution<long>(1, cfg.depth)(rng);
    Rect rect{spec.root_center, ladder.half_widths(1)};
    bool dead = false;
    for (long n = 1; n < target && !dead; ++n) {
      Candidates c = spec.ground->candidates(rect, ladder.candidate_half_widths(n));
      PruneResult pr = prune_level(rect, c.rects, *spec.provider, n, params);
      if (pr.kept.empty()) {
        dead = true;
        break;
      }
      rect = c.rects[pr.kept[std::uniform_int_distribution<std::size_t>(0, pr.kept.size() - 1)(rng)]];
      rect.half_widths = ladder.half_widths(n + 1);
    }
    if (!dead) by_level[target].push_back(rect);
  }

  json rows = json::array();
  std::string csv =
      "# badapprox.audit/1\nlevel,candidates,pruned,resonant_pairs,resonant_values,kappa1_threshold,kappa2_threshold,"
      "candidates_pass,pruned_pass\n";
  bool all = true;
  for (const auto& [level, rects] : by_level) {
    CountingReport rep = check_counting_hypotheses(*spec.provider, params, *spec.ground, rects, level);
    all = all && rep.all_pass;
    for (const auto& r : rep.rows) {
      rows.push_back({{"level", level},
                      {"candidates", r.candidates},
                      {"pruned", r.pruned},
                      {"resonant_pairs", r.resonant_pairs},
                      {"resonant_values", r.resonant_values},
                      {"kappa1_threshold", r.kappa1_threshold},
                      {"kappa2_threshold", r.kappa2_threshold},
                      {"candidates_pass", r.candidates_pass},
                      {"pruned_pass", r.pruned_pass}});
      csv += std::to_string(level) + "," + std::to_string(r.candidates) + "," + std::to_string(r.pruned) + "," +
             std::to_string(r.resonant_pairs) + "," + std::to_string(r.resonant_values) + "," +
             format_double(r.kappa1_threshold) + "," + format_double(r.kappa2_threshold) + "," +
             (r.candidates_pass ? "true" : "false") + "," + (r.pruned_pass ? "true" : "false") + "\n";
    }
  }
  json report;
  report["schema"] = "badapprox.report/1";
  report["command"] = "audit";
  report["config"] = config_echo(spec.config);
  report["config"]["depth"] = cfg.depth;
  report["config"]["seed"] = cfg.seed;
  report["samples"] = rows.size();
  report["all_pass"] = all;
  report["rows"] = rows;
  const std::filesystem::path out(cfg.out);
  if (want_json(cfg.format)) write_file(out / "audit.json", report.dump(2) + "\n");
  if (want_csv(cfg.format)) write_file(out / "audit.csv", csv);
  std::cout << "audit: " << rows.size() << " samples, " << (all ? "all pass" : "failures reported") << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cantor-tree constructions for badly approximable sets"};
  app.require_subcommand(1);

  std::string config_path, tree_path, out_dir, format;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::size_t> samples;
  std::optional<long> height_bound;
  const std::vector<std::string> formats{"csv", "json", "both"};

  auto* construct = app.add_subcommand("construct", "build a tree and write tree.json plus a run report");
  auto* certify = app.add_subcommand("certify", "check separation for every deepest-level center");
  auto* dimension = app.add_subcommand("dimension", "box-count and mu-Holder estimates for a tree");
  auto* audit = app.add_subcommand("audit", "candidate and prune counts against the kappa thresholds");
  for (auto* sub : {construct, audit}) sub->add_option("--config", config_path, "config file")->required();
  for (auto* sub : {certify, dimension}) sub->add_option("--tree", tree_path, "tree file")->required();
  for (auto* sub : {construct, certify, dimension, audit}) {
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember(formats));
    sub->add_option("--workers", workers, "worker threads (0 = available parallelism)");
  }
  for (auto* sub : {construct, dimension, audit}) sub->add_option("--seed", seed, "sample seed");
  for (auto* sub : {dimension, audit}) sub->add_option("--samples", samples, "number of samples");
  certify->add_option("--height-bound", height_bound, "check heights below k^N (default: tree depth)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  auto fill = [&](ExperimentConfig& cfg) {
    if (!out_dir.empty()) apply_setting(cfg, "out", out_dir);
    if (!format.empty()) apply_setting(cfg, "format", format);
    if (seed) cfg.seed = *seed;
    if (workers) cfg.workers = *workers;
    if (samples) cfg.samples = *samples;
  };
  try {
    if (construct->parsed() || audit->parsed()) {
      ExperimentConfig cfg = load_config(config_path);
      fill(cfg);
      return construct->parsed() ? cmd_construct(cfg) : cmd_audit(cfg);
    }
    ExperimentConfig defaults;
    fill(defaults);
    if (certify->parsed())
      return cmd_certify(tree_path, height_bound, defaults.out, defaults.format, defaults.workers);
    return cmd_dimension(tree_path, defaults.seed, defaults.samples, defaults.out, defaults.format);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const FormatError& e) {
    std::cerr << e.what() << "\n";
    return kCorrupt;
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
