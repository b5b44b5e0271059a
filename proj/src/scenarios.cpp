#include "adjsound/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "adjsound/errors.hpp"
#include "adjsound/io.hpp"
#include "adjsound/spectral.hpp"

namespace adjsound {

namespace {

using json = nlohmann::json;

void check_alignment(const ScenarioConfig& config, double sample_rate, std::size_t samples,
                     const fs::path& file) {
  const std::size_t levels = config.time.steps + 1;
  if (samples != levels) {
    throw ShapeError(file.string() + ": holds " + std::to_string(samples) + " samples, the run has " +
                     std::to_string(levels) + " levels");
  }
  if (std::abs(sample_rate / config.time.sample_rate_hz - 1.0) > 1e-9) {
    throw ShapeError(file.string() + ": sample rate " + format_double(sample_rate) +
                     " Hz differs from the configured " + format_double(config.time.sample_rate_hz) + " Hz");
  }
}

Recording probe_recording(const std::vector<std::vector<double>>& traces, double sample_rate) {
  Recording r;
  r.sample_rate = sample_rate;
  for (std::size_t m = 0; m < traces.size(); ++m) r.names.push_back("probe_" + std::to_string(m));
  r.channels = traces;
  return r;
}

/// Forward run sampling the analysis probes (pressure fluctuation at the nearest nodes).
Recording analysis_traces(const ScenarioConfig& config, const std::shared_ptr<const Discretization>& disc,
                          const SourceSet& sources) {
  const MicrophoneArray probes = MicrophoneArray::create(disc->grid, config.analysis.probes_m);
  ForwardOptions o;
  o.microphones = &probes;
  o.keep_trajectory = false;
  Recording r = run_forward(disc, sources, o).recording;
  for (std::size_t m = 0; m < r.names.size(); ++m) r.names[m] = "probe_" + std::to_string(m);
  return r;
}

void write_json(const fs::path& path, const json& j) {
  ensure_directory(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

std::shared_ptr<const Discretization> make_discretization(const ScenarioConfig& config) {
  return std::make_shared<const Discretization>(config.grid.build(), config.solver_settings());
}

std::optional<MicrophoneArray> make_microphones(const ScenarioConfig& config, const Grid& grid) {
  if (!config.microphones) return std::nullopt;
  return build_array(*config.microphones, grid);
}

double objective_half_width(const ScenarioConfig& config, const Grid& grid) {
  return config.objective.half_width_m > 0.0 ? config.objective.half_width_m : 2.0 * grid.min_spacing();
}

ScalarField region_sigma(const ScenarioConfig& config, const Grid& grid) {
  ScalarField sigma(grid);
  const double tol = 1e-9 * grid.min_spacing();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 x = grid.position(i);
    bool inside = true;
    for (int a = 0; a < grid.dim(); ++a) {
      inside = inside && x[a] >= config.objective.region_min_m[a] - tol &&
               x[a] <= config.objective.region_max_m[a] + tol;
    }
    if (inside) sigma[i] = 1.0;
  }
  if (sigma.max_abs() == 0.0) throw ConfigError("objective: region contains no grid nodes");
  return sigma;
}

ForwardResult run_forward_scenario(const ScenarioConfig& config, const fs::path& out) {
  auto disc = make_discretization(config);
  const SourceSet sources = build_sources(config);
  const std::optional<MicrophoneArray> mics = make_microphones(config, disc->grid);
  ForwardOptions o;
  o.microphones = mics ? &*mics : nullptr;
  o.keep_trajectory = false;
  const std::size_t every = config.output.snapshot_every_steps;
  if (every > 0) {
    o.observer = [&](std::size_t n, const StateField& q) {
      if (n % every == 0) write_state_snapshot(out / "snapshots", q, n, n * disc->dt());
    };
  }
  ForwardResult r = run_forward(disc, sources, o);
  if (mics) write_recording_csv(out / "recording.csv", r.recording);
  ScalarField dp = r.final_state.p();
  for (double& v : dp.values()) v -= disc->gas().p_ref;
  const int mid = disc->grid.dim() == 3 ? disc->grid.count(2) / 2 : 0;
  write_pgm(out / "final_p.pgm", extract_plane(dp, 2, mid));
  return r;
}

void synthesize(const ScenarioConfig& config, const fs::path& root) {
  const RunPaths paths{root};
  auto disc = make_discretization(config);
  const Grid& grid = disc->grid;
  const SourceSet sources = build_sources(config);
  const std::optional<MicrophoneArray> mics = make_microphones(config, grid);
  if (config.objective.kind == ObjectiveKind::Microphones && !mics) {
    throw ConfigError("objective: a microphone objective needs a microphones section");
  }
  for (const MonopoleSource& s : sources) {
    write_signal_csv(paths.reference() / "signals" / (s.name + ".csv"), disc->dt(), s.signal);
  }

  std::vector<Probe> region;
  if (config.objective.kind == ObjectiveKind::Region) region = region_probes(region_sigma(config, grid));
  const MicrophoneArray probes = MicrophoneArray::create(grid, config.analysis.probes_m);
  std::vector<std::vector<double>> probe_traces(probes.size());
  const double p_ref = disc->gas().p_ref;

  ForwardOptions o;
  o.microphones = mics ? &*mics : nullptr;
  o.keep_trajectory = false;
  o.observer = [&](std::size_t n, const StateField& q) {
    if (!region.empty()) record_probe_targets(region, q.p(), p_ref);
    const std::vector<double> v = sample_microphones(q.p(), probes, p_ref);
    for (std::size_t m = 0; m < v.size(); ++m) probe_traces[m].push_back(v[m]);
    const std::size_t every = config.output.snapshot_every_steps;
    if (every > 0 && n % every == 0) write_state_snapshot(paths.reference() / "snapshots", q, n, n * disc->dt());
  };
  const ForwardResult r = run_forward(disc, sources, o);

  if (!probe_traces.empty()) {
    write_recording_csv(paths.reference() / "analysis_probes.csv",
                        probe_recording(probe_traces, config.time.sample_rate_hz));
  }
  if (mics) write_recording_csv(paths.measurements() / "recording.csv", r.recording);
  if (!region.empty()) {
    // Level-major so a row is one time level across all region nodes.
    const std::size_t levels = config.time.steps + 1;
    ScalarField packed(Grid(2, {static_cast<int>(region.size()), static_cast<int>(levels), 1},
                            {1.0, disc->dt(), 1.0}, {0.0, 0.0, 0.0}));
    json nodes = json::array();
    for (std::size_t m = 0; m < region.size(); ++m) {
      nodes.push_back(region[m].support.nodes.front());
      for (std::size_t n = 0; n < levels; ++n) packed[n * region.size() + m] = region[m].target[n];
    }
    write_snapshot(paths.measurements() / "region_targets", packed, 0.0, "region_targets");
    write_json(paths.measurements() / "region_nodes.json",
               {{"sample_rate_hz", config.time.sample_rate_hz}, {"nodes", nodes}});
  }
}

Measurements load_measurements(const ScenarioConfig& config, const fs::path& root) {
  const RunPaths paths{root};
  Measurements m;
  if (config.objective.kind == ObjectiveKind::Microphones) {
    const fs::path file = paths.measurements() / "recording.csv";
    m.recording = read_recording_csv(file);
    check_alignment(config, m.recording->sample_rate, m.recording->num_samples(), file);
    return m;
  }
  const fs::path meta_file = paths.measurements() / "region_nodes.json";
  std::ifstream in(meta_file);
  if (!in) throw ConfigError("cannot read " + meta_file.string());
  json meta;
  try {
    in >> meta;
    m.region_nodes = meta.at("nodes").get<std::vector<std::size_t>>();
    SnapshotMeta sm;
    const ScalarField packed = read_snapshot(paths.measurements() / "region_targets", &sm);
    const std::size_t count = static_cast<std::size_t>(sm.dims[0]);
    const std::size_t levels = static_cast<std::size_t>(sm.dims[1]);
    if (count != m.region_nodes.size()) throw ShapeError("region target count differs from the node list");
    check_alignment(config, meta.at("sample_rate_hz").get<double>(), levels, meta_file);
    m.region_targets.assign(count, std::vector<double>(levels));
    for (std::size_t n = 0; n < levels; ++n) {
      for (std::size_t k = 0; k < count; ++k) m.region_targets[k][n] = packed[n * count + k];
    }
  } catch (const json::exception& e) {
    throw ConfigError(meta_file.string() + ": " + e.what());
  }
  return m;
}

ObjectiveSpec build_objective(const ScenarioConfig& config, const Grid& grid, const Measurements& meas) {
  ObjectiveSpec obj;
  if (config.objective.kind == ObjectiveKind::Microphones) {
    const std::optional<MicrophoneArray> mics = make_microphones(config, grid);
    if (!mics) throw ConfigError("objective: a microphone objective needs a microphones section");
    if (!meas.recording) throw ConfigError("objective: no microphone recording loaded");
    if (meas.recording->num_channels() != mics->size()) {
      throw ShapeError("recording has " + std::to_string(meas.recording->num_channels()) +
                       " channels, the array has " + std::to_string(mics->size()) + " microphones");
    }
    obj = microphone_objective(grid, *mics, *meas.recording, objective_half_width(config, grid));
  } else {
    obj.probes = region_probes(region_sigma(config, grid));
    if (obj.probes.size() != meas.region_nodes.size()) {
      throw ShapeError("stored region targets do not match the configured region");
    }
    for (std::size_t k = 0; k < obj.probes.size(); ++k) {
      if (obj.probes[k].support.nodes.front() != meas.region_nodes[k]) {
        throw ShapeError("stored region targets do not match the configured region");
      }
      obj.probes[k].target = meas.region_targets[k];
    }
  }
  obj.window_begin = config.objective.window_begin_step;
  if (config.objective.window_end_step) obj.window_end = *config.objective.window_end_step;
  obj.regularization = config.objective.regularization;
  return obj;
}

AdjointTrajectory first_adjoint(const ScenarioConfig& config,
                                const std::shared_ptr<const Discretization>& disc,
                                const ObjectiveSpec& objective, const fs::path& snapshot_dir) {
  const StateField& base = disc->reference;
  const double p_ref = disc->gas().p_ref;
  AdjointOptions o;
  const std::size_t every = config.output.snapshot_every_steps;
  if (every > 0 && !snapshot_dir.empty()) {
    o.observer = [&](std::size_t n, const AdjointStateField& qs) {
      if (n % every == 0) write_state_snapshot(snapshot_dir, qs, n, n * disc->dt());
    };
  }
  return run_adjoint(
      disc, [&](std::size_t) -> const StateField& { return base; },
      [&](std::size_t n, const StateField& q, double* g) { add_adjoint_forcing(q.p(), objective, n, p_ref, g); },
      o);
}

SpectrumReport compare_spectra(const Recording& recovered, const Recording& reference, double lo, double hi) {
  if (recovered.num_channels() != reference.num_channels() ||
      recovered.num_samples() != reference.num_samples()) {
    throw ShapeError("spectra compared on recordings of different shape");
  }
  SpectrumReport rep;
  for (std::size_t m = 0; m < reference.num_channels(); ++m) {
    const auto a = band_spectrum(recovered.channels[m], recovered.sample_rate, lo, hi);
    const auto b = band_spectrum(reference.channels[m], reference.sample_rate, lo, hi);
    for (std::size_t k = 0; k < a.size(); ++k) {
      SpectrumRow row{reference.names[m], a[k].frequency_hz, level_difference_db(a[k].value, b[k].value),
                      phase_difference_cycles(a[k].value, b[k].value)};
      rep.max_abs_level_db = std::max(rep.max_abs_level_db, std::abs(row.level_db));
      rep.max_abs_phase_cycles = std::max(rep.max_abs_phase_cycles, std::abs(row.phase_cycles));
      rep.rows.push_back(row);
    }
  }
  return rep;
}

OptimizeOutcome optimize_scenario(const ScenarioConfig& config, const fs::path& root, bool resume) {
  const RunPaths paths{root};
  auto disc = make_discretization(config);
  const Grid& grid = disc->grid;
  const std::size_t levels = config.time.steps + 1;
  const Measurements meas = load_measurements(config, root);

  InverseProblem problem;
  problem.disc = disc;
  problem.objective = build_objective(config, grid, meas);
  // Supports come from the config; signals start from zero, never from the reference.
  for (const SourceConfig& sc : config.sources) {
    MonopoleSource s;
    s.name = sc.name;
    s.center = sc.center_m;
    s.half_width = sc.half_width_m;
    if (sc.path) throw ConfigError("optimize: moving sources cannot be optimized");
    s.signal.assign(levels, 0.0);
    problem.sources.push_back(std::move(s));
  }
  if (problem.sources.empty()) throw ConfigError("optimize: no sources configured");

  const fs::path iter_file = paths.inverse() / "iterations.csv";
  int first_iter = 0;
  OptimizationSettings settings = config.optimizer.settings();
  if (resume && fs::exists(iter_file)) {
    const std::vector<IterationRecord> done = read_iteration_csv(iter_file);
    if (!done.empty()) first_iter = done.back().iter;
    for (MonopoleSource& s : problem.sources) {
      const SignalTrace t = read_signal_csv(paths.inverse() / "signals" / (s.name + ".csv"));
      if (t.values.size() != levels) throw ShapeError("persisted signal of " + s.name + " has the wrong length");
      s.signal = t.values;
    }
    settings.max_loops = std::max(0, settings.max_loops - first_iter);
  } else {
    std::error_code ec;
    fs::remove(iter_file, ec);
  }

  const bool resumed = first_iter > 0;
  auto callback = [&](const IterationRecord& rec, const SourceSet& sources) {
    // A resumed run re-evaluates its starting point; that row already exists.
    if (resumed && rec.iter == first_iter) return;
    write_iteration_csv(iter_file, {rec}, true);
    for (const MonopoleSource& s : sources) {
      write_signal_csv(paths.inverse() / "signals" / (s.name + ".csv"), disc->dt(), s.signal);
    }
  };
  OptimizeOutcome out;
  out.run = optimize(problem, settings, callback, first_iter);

  const fs::path ref_probes = paths.reference() / "analysis_probes.csv";
  if (!config.analysis.probes_m.empty() && config.analysis.band_hi_hz > 0.0 && fs::exists(ref_probes)) {
    const Recording reference = read_recording_csv(ref_probes);
    const Recording recovered = analysis_traces(config, disc, out.run.sources);
    out.spectra = compare_spectra(recovered, reference, config.analysis.band_lo_hz, config.analysis.band_hi_hz);
    std::ofstream csv(paths.inverse() / "spectra.csv");
    csv << "probe,frequency_hz,level_db,phase_cycles\n";
    for (const SpectrumRow& r : out.spectra->rows) {
      csv << r.probe << ',' << format_double(r.frequency_hz) << ',' << format_double(r.level_db) << ','
          << format_double(r.phase_cycles) << '\n';
    }
  }
  json summary = {{"stop_reason", out.run.stop_reason},
                  {"J0", out.run.J0},
                  {"J_final", out.run.history.back().J},
                  {"iterations", out.run.history.back().iter}};
  if (out.spectra) {
    summary["max_abs_level_db"] = out.spectra->max_abs_level_db;
    summary["max_abs_phase_cycles"] = out.spectra->max_abs_phase_cycles;
  }
  write_json(paths.inverse() / "summary.json", summary);
  return out;
}

PeakSet localize_scenario(const ScenarioConfig& config, const fs::path& root) {
  const RunPaths paths{root};
  auto disc = make_discretization(config);
  const Grid& grid = disc->grid;
  const ObjectiveSpec objective = build_objective(config, grid, load_measurements(config, root));
  const AdjointTrajectory adj = first_adjoint(config, disc, objective, paths.inverse() / "snapshots");

  LevelWindow window;
  window.begin = config.localizer.window_begin_step;
  if (config.localizer.window_end_step) window.end = *config.localizer.window_end_step;
  const SensitivityMap map = accumulate_abs_sensitivity(adj, window);
  const PeakSet peaks = detect_peaks(map, static_cast<std::size_t>(config.localizer.count),
                                     config.localizer.exclusion_radius_cells * grid.min_spacing(),
                                     config.localizer.restriction);
  write_peak_csv(paths.inverse() / "peaks.csv", peaks);
  write_snapshot(paths.inverse() / "sensitivity", map.values, map.end * disc->dt(), "adj_p_abs_sum");
  const int mid = grid.dim() == 3 ? grid.count(2) / 2 : 0;
  write_pgm(paths.inverse() / "sensitivity.pgm", extract_plane(map.values, 2, mid));
  return peaks;
}

std::size_t track_window(const ScenarioConfig& config) {
  if (config.localizer.track_window_steps > 0) return config.localizer.track_window_steps;
  if (!(config.localizer.expected_frequency_hz > 0.0)) {
    throw ConfigError("localizer: set track_window_steps or expected_frequency_hz");
  }
  return static_cast<std::size_t>(
      std::max(1L, std::lround(config.time.sample_rate_hz / config.localizer.expected_frequency_hz)));
}

Track track_scenario(const ScenarioConfig& config, const fs::path& root) {
  const RunPaths paths{root};
  auto disc = make_discretization(config);
  const ObjectiveSpec objective = build_objective(config, disc->grid, load_measurements(config, root));
  const AdjointTrajectory adj = first_adjoint(config, disc, objective, paths.inverse() / "snapshots");
  const Track track = track_moving(adj, config.localizer.restriction, track_window(config));
  write_track_csv(paths.inverse() / "track.csv", track);
  return track;
}

std::size_t render_snapshots(const fs::path& path, const fs::path& out_dir) {
  std::vector<fs::path> stems;
  auto consider = [&](const fs::path& p) {
    if (p.extension() == ".json" && fs::exists(fs::path(p).replace_extension(".f64"))) {
      stems.push_back(fs::path(p).replace_extension());
    }
  };
  if (fs::is_directory(path)) {
    for (const auto& e : fs::recursive_directory_iterator(path)) consider(e.path());
  } else if (fs::exists(fs::path(path.string() + ".json"))) {
    stems.push_back(path);
  } else {
    consider(path);
  }
  if (stems.empty()) throw ConfigError("no snapshots found at " + path.string());
  std::sort(stems.begin(), stems.end());
  for (const fs::path& stem : stems) {
    SnapshotMeta meta;
    const ScalarField f = read_snapshot(stem, &meta);
    const int mid = meta.dim == 3 ? meta.dims[2] / 2 : 0;
    const fs::path target = out_dir.empty() ? fs::path(stem.string() + ".pgm")
                                            : out_dir / (stem.filename().string() + ".pgm");
    write_pgm(target, extract_plane(f, 2, mid));
  }
  return stems.size();
}

}  // namespace adjsound
