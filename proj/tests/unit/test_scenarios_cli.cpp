#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "adjsound/config.hpp"
#include "adjsound/errors.hpp"
#include "adjsound/io.hpp"
#include "adjsound/scenarios.hpp"

using namespace adjsound;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kSource = ADJSOUND_SOURCE_DIR;
const std::string kCli = ADJSOUND_CLI;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("adjsound_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json tiny_json() {
  std::ifstream in(kSource / "tests/data/tiny_twin.json");
  return json::parse(in);
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

struct CliResult {
  int status = -1;
  std::string err;
};

CliResult cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = kCli + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Scenarios, TwinHygieneInversionWithoutReferenceSignals) {
  const fs::path root = scratch("hygiene");
  ScenarioConfig c = load_config(kSource / "tests/data/tiny_twin.json");
  c.optimizer.max_loops = 2;
  synthesize(c, root);
  ASSERT_TRUE(fs::exists(RunPaths{root}.reference() / "signals" / "s0.csv"));
  fs::remove_all(RunPaths{root}.reference());
  const OptimizeOutcome r = optimize_scenario(c, root, false);
  ASSERT_GE(r.run.history.size(), 2u);
  EXPECT_LT(r.run.history.back().J, r.run.J0);
  EXPECT_TRUE(fs::exists(RunPaths{root}.inverse() / "signals" / "s0.csv"));
  EXPECT_FALSE(fs::exists(RunPaths{root}.reference()));
}

TEST(Scenarios, ResumeContinuesTheIterationLog) {
  const fs::path root = scratch("resume");
  ScenarioConfig c = load_config(kSource / "tests/data/tiny_twin.json");
  c.optimizer.max_loops = 1;
  synthesize(c, root);
  optimize_scenario(c, root, false);
  c.optimizer.max_loops = 2;
  optimize_scenario(c, root, true);
  const std::vector<IterationRecord> rows = read_iteration_csv(RunPaths{root}.inverse() / "iterations.csv");
  ASSERT_EQ(rows.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(rows[k].iter, k);
  EXPECT_LT(rows[2].J, rows[1].J);
}

TEST(Scenarios, MisalignedMeasurementsAreRejected) {
  const fs::path root = scratch("misaligned");
  ScenarioConfig c = load_config(kSource / "tests/data/tiny_twin.json");
  synthesize(c, root);
  c.time.steps += 10;
  EXPECT_THROW(load_measurements(c, root), ShapeError);
}

TEST(Cli, UnknownSubcommandPrintsUsage) {
  const fs::path dir = scratch("cli_usage");
  const CliResult r = cli("invert --config x.json", dir);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("unknown subcommand"), std::string::npos);
  EXPECT_NE(r.err.find("forward"), std::string::npos);
  EXPECT_NE(cli("", dir).status, 0);
}

TEST(Cli, UnknownFlagPrintsUsage) {
  const fs::path dir = scratch("cli_flag");
  const CliResult r = cli("forward --config x.json --colour", dir);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("--colour"), std::string::npos);
  EXPECT_NE(r.err.find("--threads"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitTwoWithKeyPath) {
  const fs::path dir = scratch("cli_config");
  json j = tiny_json();
  j["sources"][0]["signal"]["f1_hz"] = -5.0;
  const CliResult r = cli("forward --config " + write_config(dir, j).string(), dir);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("sources[0].signal.f1_hz"), std::string::npos) << r.err;
  EXPECT_EQ(cli("forward --config " + (dir / "missing.json").string(), dir).status, 2);
}

TEST(Cli, NumericalAbortExitsThree) {
  const fs::path dir = scratch("cli_numerical");
  json j = tiny_json();
  j["sources"][0]["signal"]["amplitude_pa_per_s"] = 1e14;
  const CliResult r = cli("forward --config " + write_config(dir, j).string() + " --output " + (dir / "out").string(), dir);
  EXPECT_EQ(r.status, 3) << r.err;
}

TEST(Cli, ForwardIsReproducibleAcrossThreadCounts) {
  const fs::path dir = scratch("cli_forward");
  json j = tiny_json();
  j["output"]["snapshot_every_steps"] = 60;
  const std::string cfg = write_config(dir, j).string();
  ASSERT_EQ(cli("forward --config " + cfg + " --threads 1 --output " + (dir / "a").string(), dir).status, 0);
  ASSERT_EQ(cli("forward --config " + cfg + " --threads 3 --output " + (dir / "b").string(), dir).status, 0);
  const std::string a = slurp(dir / "a" / "recording.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir / "b" / "recording.csv"));
  EXPECT_EQ(slurp(dir / "a" / "snapshots" / "p_000120.f64"), slurp(dir / "b" / "snapshots" / "p_000120.f64"));

  ASSERT_EQ(cli("render " + (dir / "a" / "snapshots").string(), dir).status, 0);
  EXPECT_TRUE(fs::exists(dir / "a" / "snapshots" / "p_000060.pgm"));
}

TEST(Cli, VerifyPassesOnCleanBuild) {
  const fs::path dir = scratch("cli_verify");
  const CliResult r = cli("verify --seed 1", dir);
  EXPECT_EQ(r.status, 0) << slurp(dir / "stdout.txt");
  EXPECT_NE(slurp(dir / "stdout.txt").find("duality"), std::string::npos);
}
