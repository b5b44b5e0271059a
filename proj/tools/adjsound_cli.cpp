#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adjsound/config.hpp"
#include "adjsound/errors.hpp"
#include "adjsound/io.hpp"
#include "adjsound/parallel.hpp"
#include "adjsound/scenarios.hpp"
#include "adjsound/verification.hpp"

namespace fs = std::filesystem;
using namespace adjsound;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kVerification = 4 };

struct Common {
  std::string config;
  std::string output;
  int threads = 0;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
  auto* opt = cmd->add_option("--config", c.config, "Scenario config (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--output", c.output, "Output directory (overrides output.directory)");
  cmd->add_option("--threads", c.threads, "Worker threads (0: all)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", c.seed, "RNG seed (overrides the config seed)");
}

ScenarioConfig load(const Common& c) {
  ScenarioConfig cfg = load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.output.empty()) cfg.output.directory = c.output;
  return cfg;
}

int run_verify(const Common& c) {
  std::uint64_t seed = c.seed.value_or(0);
  if (!c.config.empty()) seed = load(c).seed;
  bool ok = true;
  for (const CheckResult& r : run_verification_suite(seed)) {
    std::printf("%-20s %s  value=%.4g threshold=%.4g  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.value,
                r.threshold, r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? kOk : kVerification;
}

int run_render(const Common& c, const std::vector<std::string>& inputs) {
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  fs::path out_dir = c.output;
  if (paths.empty()) {
    // Without explicit inputs, render everything under the run directory in place.
    if (c.config.empty() && c.output.empty()) throw ConfigError("render needs snapshot paths, --config or --output");
    paths.push_back(c.output.empty() ? fs::path(load_config(c.config).output.directory) : fs::path(c.output));
    out_dir.clear();
  }
  std::size_t n = 0;
  for (const fs::path& p : paths) n += render_snapshots(p, out_dir);
  std::printf("rendered %zu snapshot(s)\n", n);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler / adjoint acoustics solver: forward runs, source optimization, localization"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for all subcommands");

  Common common;
  bool resume = false;
  std::vector<std::string> render_inputs;

  auto* forward = app.add_subcommand("forward", "Forward run with the configured sources");
  add_common(forward, common, true);
  auto* synth = app.add_subcommand("synthesize", "Reference run writing measurements for a twin experiment");
  add_common(synth, common, true);
  auto* optimize = app.add_subcommand("optimize", "Optimize source signals against the measurements");
  add_common(optimize, common, true);
  optimize->add_flag("--resume", resume, "Continue from persisted signals and iteration log");
  auto* localize = app.add_subcommand("localize", "Static source localization from the first adjoint");
  add_common(localize, common, true);
  auto* track = app.add_subcommand("track", "Moving source tracking from the first adjoint");
  add_common(track, common, true);
  auto* verify = app.add_subcommand("verify", "Built-in verification checks");
  add_common(verify, common, false);
  auto* render = app.add_subcommand("render", "Convert snapshots to PGM images");
  add_common(render, common, false);
  render->add_option("inputs", render_inputs, "Snapshot stems or directories");

  if (argc > 1 && argv[1][0] != '-') {
    const std::string sub = argv[1];
    bool known = false;
    for (const CLI::App* s : app.get_subcommands({})) known = known || s->get_name() == sub;
    if (!known) {
      std::cerr << "error: unknown subcommand '" << sub << "'\n\n" << app.help();
      return kUsage;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    set_worker_count(common.threads);
    if (*verify) return run_verify(common);
    if (*render) return run_render(common, render_inputs);

    const ScenarioConfig cfg = load(common);
    const fs::path out = cfg.output.directory;
    if (*forward) {
      const ForwardResult r = run_forward_scenario(cfg, out);
      std::printf("forward: %zu steps, %zu microphone channel(s) -> %s\n", cfg.time.steps,
                  r.recording.num_channels(), out.string().c_str());
    } else if (*synth) {
      synthesize(cfg, out);
      std::printf("synthesize: measurements written to %s\n", RunPaths{out}.measurements().string().c_str());
    } else if (*optimize) {
      const OptimizeOutcome r = optimize_scenario(cfg, out, resume);
      for (const IterationRecord& rec : r.run.history) {
        std::printf("iter %3d  J=%.6e  alpha=%.4e  |grad|=%.4e  %.1fs\n", rec.iter, rec.J, rec.alpha,
                    rec.grad_norm, rec.wall_s);
      }
      std::printf("stop: %s, J/J0 = %.4e\n", r.run.stop_reason.c_str(),
                  r.run.J0 > 0.0 ? r.run.history.back().J / r.run.J0 : 0.0);
      if (r.spectra) {
        std::printf("spectra: max |level| %.3f dB, max |phase| %.4f cycles\n", r.spectra->max_abs_level_db,
                    r.spectra->max_abs_phase_cycles);
      }
    } else if (*localize) {
      const PeakSet peaks = localize_scenario(cfg, out);
      for (std::size_t i = 0; i < peaks.peaks.size(); ++i) {
        const Peak& p = peaks.peaks[i];
        std::printf("peak %zu  x=(%.4f, %.4f, %.4f) m  value=%.4e\n", i, p.position[0], p.position[1],
                    p.position[2], p.value);
      }
    } else if (*track) {
      const Track t = track_scenario(cfg, out);
      std::printf("track: %zu points, window %zu steps -> %s\n", t.points.size(), t.window_steps,
                  (RunPaths{out}.inverse() / "track.csv").string().c_str());
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ShapeError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
