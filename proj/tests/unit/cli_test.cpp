#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "slowvary_cli/commands.hpp"
#include "slowvary_cli/config.hpp"
#include "slowvary_cli/registry.hpp"

namespace fs = std::filesystem;
namespace cli = slowvary::cli;
using nlohmann::json;

namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / ("slowvary_cli_" + std::string(info->test_suite_name()) + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path write_json(const fs::path& p, const json& doc) {
  std::ofstream(p) << doc.dump(2);
  return p;
}

json generator_config(const fs::path& out, json params = {{"delta", 1e-3}}) {
  return {{"instance", {{"family", "well_separated"}, {"params", std::move(params)}}},
          {"policies", json::array({{{"name", "oracle"}}})},
          {"T", 500},
          {"output_dir", out.string()}};
}

void expect_config_error(const std::string& text, const std::string& path) {
  try {
    cli::parse_config_text(text);
    FAIL() << "expected ConfigError at " << path;
  } catch (const cli::ConfigError& e) {
    EXPECT_EQ(e.path(), path) << e.what();
  }
}

}  // namespace

TEST(Config, MinimalDocumentGetsDefaults) {
  const auto c = cli::parse_config_text(R"({"instance": "inst.json", "policies": [{"name": "snoozeit"}], "T": 1000})");
  EXPECT_EQ(std::get<std::string>(c.instance), "inst.json");
  EXPECT_EQ(c.n_runs, 10);
  EXPECT_EQ(c.decimation, 1);
  EXPECT_EQ(c.base_seed, 0u);
  EXPECT_FALSE(c.bound_overlays);
  ASSERT_EQ(c.policies.size(), 1u);
  EXPECT_EQ(c.policies[0].label, "snoozeit");
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    cli::parse_config_text(R"({"instance": "i.json", "polcies": [], "T": 10})");
    FAIL();
  } catch (const cli::ConfigError& e) {
    EXPECT_EQ(e.path(), "$.polcies");
    EXPECT_NE(std::string(e.what()).find("polcies"), std::string::npos);
  }
}

TEST(Config, StructuralErrorsNamePaths) {
  expect_config_error(R"({"instance": "i.json", "policies": [{"name": "snoozeit"}]})", "$.T");
  expect_config_error(R"({"instance": "i.json", "policies": [{"name": "snoozeit"}], "T": "ten"})", "$.T");
  expect_config_error(R"({"instance": "i.json", "policies": [{"name": "snooze"}], "T": 10})", "$.policies[0].name");
  expect_config_error(R"({"instance": "i.json", "policies": [{"name": "rexp3", "params": {"gama": 0.1}}], "T": 10})",
                      "$.policies[0].params.gama");
  expect_config_error(R"({"instance": "i.json", "policies": [{"name": "snoozeit"}], "T": 10, "n_runs": 0})",
                      "$.n_runs");
}

TEST(Config, RoundTrip) {
  const auto c = cli::parse_config_text(R"({
    "instance": {"family": "oscillating", "params": {"delta": 0.001, "amplitude": 0.2},
                 "noise": {"kind": "bernoulli"}},
    "policies": [{"name": "rexp3", "params": {"gamma": 0.1}, "label": "r"}, {"name": "fixed", "params": {"arm": 2}}],
    "T": 800, "n_runs": 3, "base_seed": 9, "output_dir": "o", "decimation": 4, "bound_overlays": true,
    "sweep": {"deltas": [0.001, 0.002]}
  })");
  const auto again = cli::parse_config(cli::to_json(c));
  EXPECT_EQ(again, c);
  EXPECT_EQ(cli::to_json(again), cli::to_json(c));
}

TEST(Config, FileInstanceMustMatchT) {
  TempDir tmp;
  cli::Options gen;
  gen.spec = R"({"family": "stationary", "params": {"mu1": 0.6, "mu2": 0.4}})";
  gen.T = 100;
  gen.out = (tmp.path() / "inst.json").string();
  std::ostringstream sink;
  ASSERT_EQ(cli::cmd_gen(gen, sink), cli::kOk);
  auto c = cli::parse_config_text(R"({"instance": "inst.json", "policies": [{"name": "oracle"}], "T": 100})");
  EXPECT_EQ(cli::materialize(c, tmp.path()).horizon(), 100);
  c.T = 99;
  EXPECT_THROW(cli::materialize(c, tmp.path()), cli::ConfigError);
}

TEST(Registry, KnowsCanonicalNames) {
  const std::vector<std::string> expected{"snoozeit", "snoozeit_m", "rexp3", "exps", "swucb_sharp", "oracle", "fixed", "round_robin"};
  for (const auto& name : expected) {
    EXPECT_NE(std::find(cli::policy_names().begin(), cli::policy_names().end(), name), cli::policy_names().end()) << name;
  }
  EXPECT_THROW(cli::validate_policy({"fixed", json::object(), "fixed"}, "$"), cli::ConfigError);
}

TEST(Run, OracleSummaryIsZero) {
  TempDir tmp;
  const auto cfg = write_json(tmp.path() / "c.json", generator_config(tmp.path() / "out"));
  cli::Options opt;
  opt.config = cfg.string();
  std::ostringstream sink;
  ASSERT_EQ(cli::cmd_run(opt, sink), cli::kOk);
  const auto rows = read_csv(tmp.path() / "out" / "oracle_summary.csv");
  ASSERT_EQ(rows.size(), 501u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "mean_regret", "std_regret"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(std::stod(rows[i][1]), 0.0);
    EXPECT_EQ(std::stod(rows[i][2]), 0.0);
  }
}

TEST(Run, RowCountsFollowDecimation) {
  TempDir tmp;
  auto doc = generator_config(tmp.path() / "out");
  doc["policies"] = json::array({{{"name", "snoozeit_m"}}, {{"name", "rexp3"}}});
  doc["n_runs"] = 3;
  doc["decimation"] = 7;
  doc["bound_overlays"] = true;
  cli::Options opt;
  opt.config = write_json(tmp.path() / "c.json", doc).string();
  std::ostringstream sink;
  ASSERT_EQ(cli::cmd_run(opt, sink), cli::kOk);
  const fs::path out = tmp.path() / "out";
  const std::size_t per_run = 500 / 7;
  EXPECT_EQ(read_csv(out / "rexp3_summary.csv").size(), per_run + 1);
  EXPECT_EQ(read_csv(out / "snoozeit_m_summary.csv").size(), per_run + 1);
  EXPECT_EQ(read_csv(out / "gap_profile.csv").size(), per_run + 1);
  EXPECT_EQ(read_csv(out / "rexp3_runs.csv").size(), 3 * per_run + 1);
  const auto last = read_csv(out / "rexp3_summary.csv").back();
  EXPECT_EQ(last[0], std::to_string(per_run * 7));
  EXPECT_TRUE(fs::exists(out / "snoozeit_m_episodes_0.csv"));
  EXPECT_FALSE(fs::exists(out / "rexp3_episodes_0.csv"));
  EXPECT_TRUE(fs::exists(out / "bounds.csv"));
}

TEST(Run, FlagsOverrideConfig) {
  TempDir tmp;
  cli::Options opt;
  opt.config = write_json(tmp.path() / "c.json", generator_config(tmp.path() / "unused")).string();
  opt.out = (tmp.path() / "flag_out").string();
  opt.runs = 2;
  opt.decimate = 100;
  opt.seed = 5;
  std::ostringstream sink;
  ASSERT_EQ(cli::cmd_run(opt, sink), cli::kOk);
  EXPECT_FALSE(fs::exists(tmp.path() / "unused"));
  EXPECT_EQ(read_csv(tmp.path() / "flag_out" / "oracle_runs.csv").size(), 2u * 5u + 1u);
}

TEST(Run, ByteIdenticalAcrossThreadCounts) {
  TempDir tmp;
  auto doc = generator_config(tmp.path() / "o");
  doc["policies"] = json::array({{{"name", "snoozeit_m"}}, {{"name", "exps"}}, {{"name", "swucb_sharp"}}});
  doc["n_runs"] = 6;
  doc["base_seed"] = 77;
  const auto cfg = write_json(tmp.path() / "c.json", doc);
  std::vector<std::string> outputs;
  for (const char* threads : {"1", "3", "32"}) {
    ::setenv("SLOWVARY_THREADS", threads, 1);
    cli::Options opt;
    opt.config = cfg.string();
    opt.out = (tmp.path() / ("o" + std::string(threads))).string();
    std::ostringstream sink;
    ASSERT_EQ(cli::cmd_run(opt, sink), cli::kOk);
    std::string all;
    for (const char* f : {"snoozeit_m_summary.csv", "snoozeit_m_runs.csv", "exps_runs.csv", "swucb_sharp_runs.csv",
                          "snoozeit_m_episodes_5.csv"}) {
      all += slurp(fs::path(*opt.out) / f);
    }
    outputs.push_back(all);
  }
  ::unsetenv("SLOWVARY_THREADS");
  EXPECT_FALSE(outputs[0].empty());
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_EQ(outputs[0], outputs[2]);
}

TEST(Sweep, EqualCumulativeRegretGrowsWithDelta) {
  TempDir tmp;
  const double a = 2.5e-4;
  json doc = {{"instance", {{"family", "multi_delta_equal_cumulative"}, {"params", {{"delta", a}}}}},
              {"policies", json::array({{{"name", "snoozeit_m"}}})},
              {"T", 8000},
              {"n_runs", 3},
              {"output_dir", (tmp.path() / "sweep").string()},
              {"sweep", {{"deltas", {a, 2 * a, 3 * a, 4 * a}}}}};
  cli::Options opt;
  opt.config = write_json(tmp.path() / "c.json", doc).string();
  std::ostringstream sink;
  ASSERT_EQ(cli::cmd_sweep(opt, sink), cli::kOk);
  const auto rows = read_csv(tmp.path() / "sweep" / "sweep_final.csv");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0][0], "delta");
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_GE(std::stod(rows[i][2]), std::stod(rows[i - 1][2]));
  EXPECT_EQ(read_csv(tmp.path() / "sweep" / "delta_5e-04" / "snoozeit_m_summary.csv").size(), 8001u);
}

TEST(Sweep, RequiresGeneratorInstance) {
  TempDir tmp;
  cli::Options opt;
  opt.config = write_json(tmp.path() / "c.json",
                          {{"instance", "x.json"}, {"policies", json::array({{{"name", "oracle"}}})}, {"T", 10},
                           {"sweep", {{"deltas", {0.1}}}}})
                   .string();
  std::ostringstream sink;
  EXPECT_THROW(cli::cmd_sweep(opt, sink), cli::ConfigError);
}

TEST(Bounds, MinEpisodeLengthMatchesHandValue) {
  cli::Options opt;
  opt.T = 1000;
  opt.delta = 0.01;
  std::ostringstream out;
  ASSERT_EQ(cli::cmd_bounds(opt, out), cli::kOk);
  std::map<std::string, double> table;
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "name,value");
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    table[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  const double hand = std::pow(2.0, 2.0 / 3.0) * std::pow(0.01, -2.0 / 3.0) * std::cbrt(std::log(1000.0));
  EXPECT_NEAR(table.at("min_episode_length"), hand, 1e-9 * hand);
  EXPECT_EQ(table.at("good_event_violation_bound"), 0.002);
  EXPECT_FALSE(table.contains("instance_dependent_bound"));
}

TEST(Validate, ExitCodeReflectsDrift) {
  TempDir tmp;
  const auto ok = write_json(tmp.path() / "ok.json", {{"T", 3},
                                                      {"delta", 0.1},
                                                      {"noise", {{"kind", "gaussian"}, {"variance", 0.25}}},
                                                      {"means", {{0.5, 0.55, 0.6}, {0.5, 0.5, 0.5}}}});
  const auto bad = write_json(tmp.path() / "bad.json", {{"T", 3},
                                                        {"delta", 0.01},
                                                        {"noise", {{"kind", "gaussian"}, {"variance", 0.25}}},
                                                        {"means", {{0.5, 0.55, 0.6}, {0.5, 0.5, 0.5}}}});
  cli::Options opt;
  std::ostringstream out;
  opt.instance = ok.string();
  EXPECT_EQ(cli::cmd_validate(opt, out), cli::kOk);
  EXPECT_NE(out.str().find("drift check: ok"), std::string::npos);

  out.str("");
  opt.instance = bad.string();
  EXPECT_EQ(cli::cmd_validate(opt, out), cli::kCheckFailed);
  EXPECT_NE(out.str().find("2 violation(s)"), std::string::npos);

  out.str("");
  opt.delta = 0.06;
  EXPECT_EQ(cli::cmd_validate(opt, out), cli::kOk);

  opt.instance = (tmp.path() / "missing.json").string();
  EXPECT_ANY_THROW(cli::cmd_validate(opt, out));
}

TEST(GapProfile, WritesDecimatedCsv) {
  TempDir tmp;
  cli::Options opt;
  opt.spec = R"({"family": "stationary", "params": {"mu1": 0.8, "mu2": 0.5}})";
  opt.T = 1000;
  opt.decimate = 10;
  std::ostringstream out;
  ASSERT_EQ(cli::cmd_gap_profile(opt, out), cli::kOk);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,gap,detectable_gap");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NEAR(std::stod(line.substr(line.find(',') + 1)), 0.3, 1e-12);
  }
  EXPECT_EQ(rows, 100);
}

TEST(LbVerify, HoldsForDefaultPolicies) {
  TempDir tmp;
  cli::Options opt;
  opt.runs = 500;
  opt.out = (tmp.path() / "lb.csv").string();
  std::ostringstream out;
  EXPECT_EQ(cli::cmd_lb_verify(opt, out), cli::kOk);
  const auto rows = read_csv(*opt.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][0], "policy");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][7], "1") << rows[i][0];
    EXPECT_EQ(rows[i][13], "1") << rows[i][0];
  }
}
