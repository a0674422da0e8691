#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "badapprox/config.hpp"

using namespace badapprox;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("badapprox_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(BADAPPROX_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Builds a bad_interval tree and returns the directory holding tree.json.
fs::path construct(const std::string& name, long k, long depth) {
  fs::path dir = scratch(name);
  write_file(dir / "run.conf", "instance = bad_interval\nk = " + std::to_string(k) + "\ndepth = " +
                                   std::to_string(depth) + "\n");
  EXPECT_EQ(run("construct --config " + (dir / "run.conf").string() + " --out " + dir.string()), 0);
  return dir;
}

void set_deepest_center(const fs::path& tree, const std::string& value) {
  auto j = nlohmann::json::parse(read_file(tree));
  j["levels"].back()["nodes"][0][1][0] = value;
  write_file(tree, j.dump());
}

}  // namespace

TEST(Config, ParsesCommentsAndRunSettings) {
  ExperimentConfig c = parse_config(
      "# comment line\n"
      "instance = bad_ij   # trailing comment\n"
      "k = 10\n"
      "exponents = 1/3, 2/3\n"
      "depth = 4\n"
      "mode = theorem\n"
      "seed = 77\n"
      "height_bound = 5\n"
      "\n");
  EXPECT_EQ(c.instance.at("instance"), "bad_ij");
  EXPECT_EQ(c.depth, 4);
  EXPECT_EQ(c.mode, Mode::theorem);
  EXPECT_EQ(c.seed, 77u);
  ASSERT_TRUE(c.height_bound.has_value());
  EXPECT_EQ(*c.height_bound, 5);
  EXPECT_EQ(c.format, "both");
}

TEST(Config, RejectsMalformedInput) {
  const char* bad[] = {
      "k = 10\n",
      "instance = bad_interval\nk = 10\nk = 11\n",
      "instance = bad_interval\nk = 10\ncolour = red\n",
      "instance = bad_interval\nk = 10\nexponents = 1/2, 1/2\n",
      "instance = bad_interval\nk = 10\nmode = fast\n",
      "instance = bad_interval\nk = 10\ndepth = 0\n",
      "instance = bad_interval\nk = 10\nformat = xml\n",
      "instance = bad_interval\nk = ten\n",
      "instance = bad_interval\nk = 10\nkappa1 = 1/8\nkappa2 = 1/4\n",
      "instance = bad_interval\nk = 10\ntheta_override = -1\n",
      "instance = nowhere\nk = 10\n",
      "instance = bad_ij\nk = 10\nexponents = 1/2, 1/3\n",
      "instance = padic\np = 2\ns = 2\nk = 8\n",
      "instance = power_series\nh = 2\nk = 6\n",
      "instance = fm_product\nk = 10\nM = 1\n",
      "instance bad_interval\n",
  };
  for (const char* text : bad) EXPECT_THROW(parse_config(text), ConfigError) << text;
}

TEST(Config, EchoRebuildsEveryInstance) {
  const std::vector<std::map<std::string, std::string>> cases{
      {{"instance", "bad_interval"}, {"k", "10"}},
      {{"instance", "bad_ij"}, {"k", "10"}, {"exponents", "1/3,2/3"}},
      {{"instance", "bad_N"}, {"k", "5"}, {"exponents", "1/3,1/3,1/3"}},
      {{"instance", "fm_product"}, {"k", "10"}, {"M", "2"}, {"delta", "1/2"}},
      {{"instance", "cantor_interval"}, {"k", "4"}},
      {{"instance", "gaussian"}, {"k", "4"}},
      {{"instance", "padic"}, {"p", "2"}, {"s", "2"}},
      {{"instance", "power_series"}, {"h", "2"}, {"k", "4"}, {"kappa1", "1/2"}},
  };
  for (const auto& keys : cases) {
    InstanceSpec a = instance_from_config(keys);
    InstanceSpec b = instance_from_config(a.config);
    EXPECT_EQ(a.config, b.config) << keys.at("instance");
    EXPECT_EQ(a.theta, b.theta);
    EXPECT_EQ(a.k, b.k);
    EXPECT_EQ(a.root_center.size(), b.root_center.size());
  }
  InstanceSpec o = instance_from_config({{"instance", "bad_interval"}, {"k", "10"}, {"theta_override", "1/300"}});
  EXPECT_EQ(o.theta, Rational(Integer(1), Integer(300)));
  EXPECT_EQ(o.config.at("theta_override"), "1/300");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("construct"), 1);
  EXPECT_EQ(run("certify --tree x.json --format xml"), 1);

  fs::path dir = scratch("codes");
  write_file(dir / "bad.conf", "instance = bad_interval\nk = 10\nmode = fast\n");
  EXPECT_EQ(run("construct --config " + (dir / "bad.conf").string()), 2);
  EXPECT_EQ(run("construct --config " + (dir / "missing.conf").string()), 2);

  write_file(dir / "unreachable.conf",
             "instance = bad_interval\nk = 10\nkappa1 = 2\nkappa2 = 1/100\nmode = theorem\ndepth = 2\n");
  EXPECT_EQ(run("construct --config " + (dir / "unreachable.conf").string() + " --out " + dir.string()), 3);

  fs::path tree_dir = construct("certify", 10, 2);
  const fs::path tree = tree_dir / "tree.json";
  EXPECT_EQ(run("certify --tree " + tree.string() + " --out " + tree_dir.string()), 0);
  const std::string original = read_file(tree);

  set_deepest_center(tree, "1/2");
  EXPECT_EQ(run("certify --tree " + tree.string() + " --out " + tree_dir.string()), 4);
  auto report = nlohmann::json::parse(read_file(tree_dir / "certify_report.json"));
  EXPECT_FALSE(report.dump().find("1/2") == std::string::npos);

  write_file(tree, original);
  set_deepest_center(tree, "1/997");
  EXPECT_EQ(run("certify --tree " + tree.string() + " --out " + tree_dir.string()), 0);
  EXPECT_EQ(run("certify --tree " + tree.string() + " --height-bound 3 --out " + tree_dir.string()), 5);

  write_file(tree, "{\"schema\": \"badapprox.tree/1\", \"levels\": [");
  EXPECT_EQ(run("certify --tree " + tree.string() + " --out " + tree_dir.string()), 6);
  write_file(tree, "not json at all");
  EXPECT_EQ(run("dimension --tree " + tree.string() + " --out " + tree_dir.string()), 6);
}

TEST(Cli, DimensionNeedsDepthThree) {
  fs::path dir = construct("shallow", 10, 2);
  EXPECT_EQ(run("dimension --tree " + (dir / "tree.json").string() + " --out " + dir.string()), 1);
}

TEST(Cli, OutputsAreDeterministic) {
  fs::path dir = construct("det", 4, 3);
  fs::path a = dir / "a", b = dir / "b";
  const std::string tree = (dir / "tree.json").string();
  ASSERT_EQ(run("dimension --tree " + tree + " --seed 9 --out " + a.string()), 0);
  ASSERT_EQ(run("dimension --tree " + tree + " --seed 9 --workers 3 --out " + b.string()), 0);
  EXPECT_EQ(read_file(a / "dimension.json"), read_file(b / "dimension.json"));
  EXPECT_EQ(read_file(a / "dimension.csv"), read_file(b / "dimension.csv"));

  fs::path again = construct("det_again", 4, 3);
  EXPECT_EQ(read_file(dir / "tree.json"), read_file(again / "tree.json"));
  EXPECT_EQ(read_file(dir / "construct_report.json"), read_file(again / "construct_report.json"));

  ASSERT_EQ(run("audit --config " + (dir / "run.conf").string() + " --samples 20 --out " + a.string()), 0);
  ASSERT_EQ(run("audit --config " + (dir / "run.conf").string() + " --samples 20 --out " + b.string()), 0);
  EXPECT_EQ(read_file(a / "audit.json"), read_file(b / "audit.json"));
}

TEST(Cli, FormatSelectsReportFiles) {
  fs::path dir = scratch("format");
  write_file(dir / "run.conf", "instance = bad_interval\nk = 4\ndepth = 2\nformat = csv\n");
  ASSERT_EQ(run("construct --config " + (dir / "run.conf").string() + " --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "tree.json"));
  EXPECT_TRUE(fs::exists(dir / "construct_report.csv"));
  EXPECT_FALSE(fs::exists(dir / "construct_report.json"));
  ASSERT_EQ(run("certify --tree " + (dir / "tree.json").string() + " --format json --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "certify_report.json"));
  EXPECT_FALSE(fs::exists(dir / "certify_report.csv"));
}
