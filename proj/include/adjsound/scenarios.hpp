#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adjsound/adjoint.hpp"
#include "adjsound/config.hpp"
#include "adjsound/forward.hpp"
#include "adjsound/localizer.hpp"
#include "adjsound/objective.hpp"
#include "adjsound/optimizer.hpp"

namespace adjsound {

namespace fs = std::filesystem;

/**
 * Output tree of one scenario:
 *   reference/     reference signals and analysis traces (synthesize only)
 *   measurements/  what an inverse run may read
 *   inverse/       results of optimize, localize and track
 */
struct RunPaths {
  fs::path root;

  fs::path reference() const { return root / "reference"; }
  fs::path measurements() const { return root / "measurements"; }
  fs::path inverse() const { return root / "inverse"; }
};

std::shared_ptr<const Discretization> make_discretization(const ScenarioConfig& config);
std::optional<MicrophoneArray> make_microphones(const ScenarioConfig& config, const Grid& grid);
/// Configured microphone blob half-width, or two cells when unset.
double objective_half_width(const ScenarioConfig& config, const Grid& grid);
/// sigma = 1 on the nodes of the configured box.
ScalarField region_sigma(const ScenarioConfig& config, const Grid& grid);

/// Forward run with the configured sources; writes recording.csv, snapshots and final_p.pgm under `out`.
ForwardResult run_forward_scenario(const ScenarioConfig& config, const fs::path& out);

/**
 * Reference run of a twin experiment. Writes reference/signals/<source>.csv,
 * reference/analysis_probes.csv (when analysis probes are configured) and
 * the measurements: measurements/recording.csv for microphone objectives,
 * measurements/region_targets.{f64,json} for region objectives.
 */
void synthesize(const ScenarioConfig& config, const fs::path& root);

struct Measurements {
  std::optional<Recording> recording;
  std::vector<std::size_t> region_nodes;
  /// [probe][level]
  std::vector<std::vector<double>> region_targets;
};

/// Reads measurements/ only, checking sample rate and length against the config.
Measurements load_measurements(const ScenarioConfig& config, const fs::path& root);

ObjectiveSpec build_objective(const ScenarioConfig& config, const Grid& grid,
                              const Measurements& measurements);

/// First adjoint about the quiescent state (all source signals zero).
AdjointTrajectory first_adjoint(const ScenarioConfig& config,
                                const std::shared_ptr<const Discretization>& disc,
                                const ObjectiveSpec& objective, const fs::path& snapshot_dir = {});

struct SpectrumRow {
  std::string probe;
  double frequency_hz = 0.0;
  double level_db = 0.0;
  double phase_cycles = 0.0;
};

struct SpectrumReport {
  std::vector<SpectrumRow> rows;
  double max_abs_level_db = 0.0;
  double max_abs_phase_cycles = 0.0;
};

/// Per channel and DFT bin in [lo, hi]: recovered relative to reference level and phase.
SpectrumReport compare_spectra(const Recording& recovered, const Recording& reference, double lo_hz,
                               double hi_hz);

struct OptimizeOutcome {
  OptimizationRun run;
  std::optional<SpectrumReport> spectra;
};

/**
 * Steepest descent on the configured source signals from zero (or from
 * inverse/signals when resuming). Writes inverse/iterations.csv and
 * inverse/signals/<source>.csv after every accepted iteration, and
 * inverse/spectra.csv when analysis probes and their reference traces exist.
 */
OptimizeOutcome optimize_scenario(const ScenarioConfig& config, const fs::path& root, bool resume);

/// First-gradient sensitivity map and peaks; writes inverse/peaks.csv, sensitivity snapshot and PGM.
PeakSet localize_scenario(const ScenarioConfig& config, const fs::path& root);

/// Track window in steps: configured, else one period of the expected frequency.
std::size_t track_window(const ScenarioConfig& config);

/// Per-step tracking of a moving source; writes inverse/track.csv.
Track track_scenario(const ScenarioConfig& config, const fs::path& root);

/// Writes a PGM next to (or into `out_dir` for) every snapshot under `path`; returns the count.
std::size_t render_snapshots(const fs::path& path, const fs::path& out_dir = {});

}  // namespace adjsound
