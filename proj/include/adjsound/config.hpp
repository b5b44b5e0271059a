#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adjsound/arrays.hpp"
#include "adjsound/boundary.hpp"
#include "adjsound/euler.hpp"
#include "adjsound/grid.hpp"
#include "adjsound/localizer.hpp"
#include "adjsound/optimizer.hpp"
#include "adjsound/signals.hpp"
#include "adjsound/sources.hpp"

namespace adjsound {

enum class Mode { Forward, Optimize, Localize, Track, Verify };
enum class ObjectiveKind { Microphones, Region };

struct GridConfig {
  int dim = 2;
  std::vector<int> counts;
  std::vector<double> extent_m;
  std::vector<double> origin_m;

  Grid build() const;
  bool operator==(const GridConfig&) const = default;
};

struct GasConfig {
  double speed_of_sound_m_s = 343.0;
  double gamma = 1.4;
  double density_kg_m3 = 1.2;

  GasModel model() const { return GasModel::from_sound_speed(speed_of_sound_m_s, gamma, density_kg_m3); }
  bool operator==(const GasConfig&) const = default;
};

struct TimeConfig {
  double sample_rate_hz = 48000.0;
  std::size_t steps = 0;

  bool operator==(const TimeConfig&) const = default;
};

struct NumericsConfig {
  bool filter = true;
  double filter_alpha = CompactFilter::kDefaultAlpha;
  bool characteristic_bcs = true;
  StoragePolicy storage = StoragePolicy::Auto;
  std::size_t checkpoint_stride = 0;
  double memory_budget_mb = 1500.0;

  bool operator==(const NumericsConfig&) const = default;
};

struct SourceConfig {
  std::string name;
  Vec3 center_m{0.0, 0.0, 0.0};
  double half_width_m = 0.0;
  SignalSpec signal;
  std::optional<SourcePath> path;

  bool operator==(const SourceConfig&) const = default;
};

struct ObjectiveConfig {
  ObjectiveKind kind = ObjectiveKind::Microphones;
  /// Blob half-width at each microphone; 0 selects two cells.
  double half_width_m = 0.0;
  /// Axis-aligned box where sigma = 1 (region objective).
  Vec3 region_min_m{0.0, 0.0, 0.0};
  Vec3 region_max_m{0.0, 0.0, 0.0};
  std::size_t window_begin_step = 0;
  std::optional<std::size_t> window_end_step;
  double regularization = 0.0;

  bool operator==(const ObjectiveConfig&) const = default;
};

/// Field points and band used to compare recovered and reference spectra.
struct AnalysisConfig {
  std::vector<Vec3> probes_m;
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;

  bool operator==(const AnalysisConfig&) const = default;
};

struct OptimizerConfig {
  int max_loops = 20;
  double relative_tolerance = 1e-3;
  int consecutive_below = 2;
  double initial_factor = 2.0;
  int max_halvings = 8;
  bool quadratic_refinement = true;

  OptimizationSettings settings() const;
  bool operator==(const OptimizerConfig&) const = default;
};

struct LocalizerConfig {
  int count = 1;
  double exclusion_radius_cells = 6.0;
  std::optional<Restriction> restriction;
  std::size_t window_begin_step = 0;
  std::optional<std::size_t> window_end_step;
  /// Tracking window; 0 selects one period of expected_frequency_hz.
  std::size_t track_window_steps = 0;
  double expected_frequency_hz = 0.0;

  bool operator==(const LocalizerConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  /// Forward (and, where run, adjoint) snapshots every N steps; 0 disables.
  std::size_t snapshot_every_steps = 0;

  bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  Mode mode = Mode::Forward;
  std::uint64_t seed = 0;
  GridConfig grid;
  GasConfig gas;
  TimeConfig time;
  NumericsConfig numerics;
  SpongeLayer sponge;
  std::vector<SourceConfig> sources;
  std::optional<ArraySpec> microphones;
  ObjectiveConfig objective;
  AnalysisConfig analysis;
  OptimizerConfig optimizer;
  LocalizerConfig localizer;
  OutputConfig output;
  /// Directory relative file references are resolved against (not serialized).
  std::filesystem::path base_dir;

  SolverSettings solver_settings() const;
  bool operator==(const ScenarioConfig& o) const;
};

/// Parses a JSON document. Schema violations raise ConfigError prefixed with the key path
/// (e.g. "sources[2].signal.f2_hz: ...").
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& config);

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

/// Seed for band noise of source k: mixes the scenario seed, the index and the signal seed.
std::uint64_t source_seed(std::uint64_t scenario_seed, std::size_t k, std::uint64_t signal_seed);

/// Sources with generated signals of steps + 1 samples.
SourceSet build_sources(const ScenarioConfig& config);

}  // namespace adjsound
