#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "adjsound/config.hpp"
#include "adjsound/errors.hpp"
#include "adjsound/io.hpp"

using namespace adjsound;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kSource = ADJSOUND_SOURCE_DIR;

json tiny() {
  std::ifstream in(kSource / "tests/data/tiny_twin.json");
  return json::parse(in);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("adjsound_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string error_of(const json& j) {
  try {
    parse_config(j.dump());
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, EveryPresetParsesAndRoundTrips) {
  int count = 0;
  for (const auto& e : fs::directory_iterator(kSource / "configs")) {
    if (e.path().extension() != ".json") continue;
    SCOPED_TRACE(e.path().filename().string());
    const ScenarioConfig a = load_config(e.path());
    const ScenarioConfig b = parse_config(serialize_config(a));
    EXPECT_TRUE(a == b);
    EXPECT_EQ(serialize_config(a), serialize_config(b));
    ++count;
  }
  EXPECT_GE(count, 6);
}

TEST(Config, DurationBecomesSteps) {
  json j = tiny();
  j["time"].erase("steps");
  j["time"]["duration_s"] = 0.001;
  EXPECT_EQ(parse_config(j.dump()).time.steps, 69u);
  j["time"]["steps"] = 10;
  EXPECT_NE(error_of(j).find("time"), std::string::npos);
}

TEST(Config, ErrorsNameTheKeyPath) {
  json j = tiny();
  j["sources"][0]["signal"]["f2_hz"] = 40000.0;
  EXPECT_EQ(error_of(j).rfind("sources[0].signal.f2_hz", 0), 0u) << error_of(j);

  j = tiny();
  j["grid"]["counts"] = json::array({40, 4});
  EXPECT_NE(error_of(j).find("grid"), std::string::npos);

  j = tiny();
  j["microphones"]["positions_m"][2] = json::array({0.25, 0.5});
  EXPECT_EQ(error_of(j).rfind("microphones", 0), 0u) << error_of(j);

  j = tiny();
  j["sponge"]["widht_nodes"] = 3;
  EXPECT_EQ(error_of(j), "sponge.widht_nodes: unknown key");

  j = tiny();
  j["mode"] = "invert";
  EXPECT_EQ(error_of(j).rfind("mode", 0), 0u) << error_of(j);

  j = tiny();
  j["sources"][0]["center_m"] = json::array({0.12, 0.6});
  EXPECT_EQ(error_of(j), "sources[0].center_m: outside the domain");
}

TEST(Config, CflViolationReportsAdmissibleStep) {
  json j = tiny();
  j["time"]["sample_rate_hz"] = 20000.0;
  const std::string msg = error_of(j);
  EXPECT_EQ(msg.rfind("time", 0), 0u) << msg;
  EXPECT_NE(msg.find("dt"), std::string::npos) << msg;
}

TEST(Config, MalformedJsonIsAConfigError) {
  EXPECT_THROW(parse_config("{\"name\": "), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, SourceSeedsDiffer) {
  EXPECT_NE(source_seed(5, 0, 0), source_seed(5, 1, 0));
  EXPECT_NE(source_seed(5, 0, 0), source_seed(6, 0, 0));
  EXPECT_EQ(source_seed(5, 2, 9), source_seed(5, 2, 9));
}

TEST(Config, BuildSourcesGeneratesSignals) {
  const ScenarioConfig c = parse_config(tiny().dump());
  const SourceSet s = build_sources(c);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].signal.size(), c.time.steps + 1);
  EXPECT_EQ(s[0].name, "s0");
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Io, RecordingCsvRoundTripIsExact) {
  const fs::path dir = scratch("rec");
  Recording r;
  r.sample_rate = 53330.0;
  r.names = {"mic_000", "mic_001"};
  r.channels = {{0.0, 1.0 / 3.0, -1e-7}, {2.0, std::sqrt(2.0), 5e-20}};
  write_recording_csv(dir / "r.csv", r);
  const Recording back = read_recording_csv(dir / "r.csv");
  EXPECT_EQ(back.names, r.names);
  EXPECT_EQ(back.channels, r.channels);
  EXPECT_NEAR(back.sample_rate, r.sample_rate, 1e-9);
}

TEST(Io, SignalAndIterationCsv) {
  const fs::path dir = scratch("sig");
  write_signal_csv(dir / "s.csv", 0.5, {1.0, -2.0, 3.5});
  const SignalTrace t = read_signal_csv(dir / "s.csv");
  EXPECT_EQ(t.values, (std::vector<double>{1.0, -2.0, 3.5}));
  EXPECT_EQ(t.time_s, (std::vector<double>{0.0, 0.5, 1.0}));

  write_iteration_csv(dir / "it.csv", {{0, 2.0, 0.0, 0.0, 0.1}});
  write_iteration_csv(dir / "it.csv", {{1, 1.0, 0.25, 3.0, 0.2}}, true);
  const std::vector<IterationRecord> rows = read_iteration_csv(dir / "it.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].iter, 1);
  EXPECT_EQ(rows[1].alpha, 0.25);
  std::ifstream in(dir / "it.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "iter,J,alpha,grad_norm,wall_s");
}

TEST(Io, SnapshotRoundTrip) {
  const fs::path dir = scratch("snap");
  const Grid g = build_grid({1.0, 2.0, 0.5}, {9, 10, 8}, {0.1, 0.2, 0.3});
  ScalarField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::sin(0.1 * static_cast<double>(i));
  write_snapshot(dir / "p_000010", f, 0.25, "p");
  SnapshotMeta meta;
  const ScalarField back = read_snapshot(dir / "p_000010", &meta);
  EXPECT_TRUE(back == f);
  EXPECT_EQ(meta.dims, (Index3{9, 10, 8}));
  EXPECT_EQ(meta.component, "p");
  EXPECT_EQ(meta.time_s, 0.25);
  EXPECT_EQ(fs::file_size(dir / "p_000010.f64"), g.size() * 8);
}

TEST(Io, StateSnapshotNaming) {
  const fs::path dir = scratch("state");
  const Grid g = build_grid({1.0, 1.0}, {8, 8});
  write_state_snapshot(dir, StateField(g), 7, 0.0);
  write_state_snapshot(dir, AdjointStateField(g), 7, 0.0);
  EXPECT_TRUE(fs::exists(dir / "u2_000007.f64"));
  EXPECT_TRUE(fs::exists(dir / "adj_p_000007.json"));
}

TEST(Io, PgmHeaderAndOrientation) {
  const fs::path dir = scratch("pgm");
  const Grid g = build_grid({1.0, 1.0}, {8, 9});
  ScalarField f(g);
  f.at(0, 8) = -4.0;  // top-left pixel once rows run top-down
  write_pgm(dir / "f.pgm", extract_plane(f, 2, 0));
  std::ifstream in(dir / "f.pgm", std::ios::binary);
  std::string magic;
  int w = 0, h = 0, maxv = 0;
  in >> magic >> w >> h >> maxv;
  in.get();
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(w, 8);
  EXPECT_EQ(h, 9);
  EXPECT_EQ(maxv, 255);
  EXPECT_EQ(in.get(), 255);
  EXPECT_EQ(in.get(), 0);
}

TEST(Io, PlaneOfVolume) {
  const Grid g = build_grid({1.0, 1.0, 1.0}, {8, 9, 10});
  ScalarField f(g);
  f.at(3, 4, 5) = 1.0;
  const Plane p = extract_plane(f, 2, 5);
  EXPECT_EQ(p.width, 8);
  EXPECT_EQ(p.height, 9);
  EXPECT_EQ(p.values[4 * 8 + 3], 1.0);
  const Plane q = extract_plane(f, 0, 3);
  EXPECT_EQ(q.width, 9);
  EXPECT_EQ(q.values[5 * 9 + 4], 1.0);
}
