// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--work DIR] [--only 1,7,...]
//
// Twin runs write under DIR (default ./acceptance_runs). Exit status is 0
// only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adjsound/config.hpp"
#include "adjsound/io.hpp"
#include "adjsound/parallel.hpp"
#include "adjsound/scenarios.hpp"
#include "adjsound/spectral.hpp"
#include "adjsound/verification.hpp"

using namespace adjsound;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(ADJSOUND_SOURCE_DIR) / "configs";

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh(const fs::path& p) {
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome from_check(const CheckResult& r, double seconds, double budget_s) {
  Outcome o;
  o.passed = r.passed && seconds < budget_s;
  o.detail = r.detail + fmt(" [value %.4g, threshold %.4g; %.1f s of %.0f s]", r.value, r.threshold, seconds, budget_s);
  return o;
}

template <class F>
Outcome timed_check(F&& f, double budget_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const CheckResult r = f();
  return from_check(r, seconds_since(t0), budget_s);
}

// ---------------------------------------------------------------- twins

double cell(const ScenarioConfig& c) { return c.grid.build().min_spacing(); }

Outcome reinforcement(const fs::path& root, double budget_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig c = load_config(kConfigs / "reinf_desk.json");
  fresh(root);
  synthesize(c, root);
  fs::remove_all(RunPaths{root}.reference() / "signals");
  const OptimizeOutcome r = optimize_scenario(c, root, false);
  const double s = seconds_since(t0);
  const double ratio = r.run.history.back().J / r.run.J0;
  const int iters = r.run.history.back().iter;
  Outcome o;
  if (!r.spectra) {
    o.detail = "no analysis spectra";
    return o;
  }
  const SpectrumReport& sp = *r.spectra;
  o.passed = ratio <= 0.05 && iters <= 20 && sp.max_abs_level_db <= 1.0 && sp.max_abs_phase_cycles <= 0.07 &&
             s < budget_s;
  o.detail = fmt("J/J0 = %.4f after %.0f iterations; max |level| %.3f dB, max |phase| %.4f cycles", ratio, iters,
                 sp.max_abs_level_db, sp.max_abs_phase_cycles) +
             fmt(" [%.0f s of %.0f s]", s, budget_s);
  return o;
}

Outcome localization(const fs::path& root, double budget_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig c = load_config(kConfigs / "loc4_desk.json");
  fresh(root);
  synthesize(c, root);
  fs::remove_all(RunPaths{root}.reference());
  const PeakSet peaks = localize_scenario(c, root);
  const double s = seconds_since(t0);
  const double h = cell(c);
  // Each true source against its nearest peak; peaks may not be shared.
  std::set<std::size_t> used;
  double worst = 0.0;
  bool all = peaks.peaks.size() == c.sources.size();
  for (const SourceConfig& src : c.sources) {
    double best = 1e300;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < peaks.peaks.size(); ++k) {
      if (used.count(k)) continue;
      const Vec3& x = peaks.peaks[k].position;
      const double d = std::hypot(x[0] - src.center_m[0], x[1] - src.center_m[1], x[2] - src.center_m[2]);
      if (d < best) {
        best = d;
        arg = k;
      }
    }
    if (best > 1e299) {
      all = false;
      continue;
    }
    used.insert(arg);
    worst = std::max(worst, best / h);
  }
  Outcome o;
  o.passed = all && worst <= 2.0 && s < budget_s;
  o.detail = fmt("%.0f peaks for %.0f sources, worst position error %.2f cells (limit 2)",
                 static_cast<double>(peaks.peaks.size()), static_cast<double>(c.sources.size()), worst) +
             fmt(" [%.0f s of %.0f s]", s, budget_s);
  return o;
}

Outcome tracking(const fs::path& root, double budget_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig c = load_config(kConfigs / "track_desk.json");
  fresh(root);
  synthesize(c, root);
  const SignalTrace reference = read_signal_csv(RunPaths{root}.reference() / "signals" / (c.sources[0].name + ".csv"));
  fs::remove_all(RunPaths{root}.reference());
  const Track track = track_scenario(c, root);

  // Adjoint pressure along the true path, for the signal comparison only.
  auto disc = make_discretization(c);
  const ObjectiveSpec objective = build_objective(c, disc->grid, load_measurements(c, root));
  const AdjointTrajectory adj = first_adjoint(c, disc, objective);
  const SourcePath& path = *c.sources[0].path;
  const std::vector<double> along = adjoint_along_path(adj, path);
  const double s = seconds_since(t0);

  const std::size_t levels = track.points.size();
  const std::size_t lo = levels / 10, hi = levels - levels / 10;
  const double h = cell(c);
  const int axis = 0;
  const double direction = path.end[axis] >= path.start[axis] ? 1.0 : -1.0;

  double sq = 0.0;
  for (std::size_t n = lo; n < hi; ++n) {
    const double e = (track.points[n].position[axis] - path.position(track.points[n].time_s)[axis]) / h;
    sq += e * e;
  }
  const double rms = std::sqrt(sq / static_cast<double>(hi - lo));

  // Independent estimates are one window apart; overlapping windows share data.
  double worst_step = 1e300;
  for (std::size_t n = lo; n + track.window_steps < hi; n += track.window_steps) {
    const double step = direction * (track.points[n + track.window_steps].position[axis] - track.points[n].position[axis]);
    worst_step = std::min(worst_step, step / h);
  }
  const bool monotone = worst_step > 0.0;

  std::vector<double> a, b;
  for (std::size_t n = lo; n < hi; ++n) {
    a.push_back(-along[n]);
    b.push_back(reference.values[n]);
  }
  const double corr = normalized_correlation(a, b);

  Outcome o;
  o.passed = monotone && rms <= 3.0 && corr >= 0.9 && s < budget_s;
  o.detail = fmt("mid-run RMS %.2f cells (limit 3), smallest advance per window %.2f cells, correlation %.3f (limit 0.9)",
                 rms, worst_step, corr) +
             fmt(" [%.0f s of %.0f s]", s, budget_s);
  return o;
}

// ---------------------------------------------------------------- determinism

std::string without_wall_time(const fs::path& iterations_csv) {
  std::istringstream in(slurp(iterations_csv));
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

// Numerical outputs of criteria 3-9 (the reinforcement twin shortened to one
// descent loop) as one byte string per criterion.
std::vector<std::string> fingerprints(const fs::path& root) {
  std::vector<std::string> fp;
  auto bits = [](const CheckResult& r) {
    std::string s(sizeof r.value, '\0');
    std::memcpy(s.data(), &r.value, sizeof r.value);
    return s + r.detail;
  };
  fp.push_back(bits(check_propagation_speed(128)));
  fp.push_back(bits(check_boundary_reflection(128)));
  fp.push_back(bits(check_duality(1, 32)));
  fp.push_back(bits(check_gradient(1, {48, 300, 10})));

  ScenarioConfig reinf = load_config(kConfigs / "reinf_desk.json");
  reinf.optimizer.max_loops = 1;
  const fs::path r7 = fresh(root / "reinf");
  synthesize(reinf, r7);
  optimize_scenario(reinf, r7, false);
  std::string s7 = slurp(r7 / "measurements" / "region_targets.f64") + without_wall_time(r7 / "inverse" / "iterations.csv");
  for (const SourceConfig& src : reinf.sources) s7 += slurp(r7 / "inverse" / "signals" / (src.name + ".csv"));
  fp.push_back(s7);

  const ScenarioConfig loc = load_config(kConfigs / "loc4_desk.json");
  const fs::path r8 = fresh(root / "loc4");
  synthesize(loc, r8);
  localize_scenario(loc, r8);
  fp.push_back(slurp(r8 / "measurements" / "recording.csv") + slurp(r8 / "inverse" / "peaks.csv") +
               slurp(r8 / "inverse" / "sensitivity.f64"));

  const ScenarioConfig trk = load_config(kConfigs / "track_desk.json");
  const fs::path r9 = fresh(root / "track");
  synthesize(trk, r9);
  track_scenario(trk, r9);
  fp.push_back(slurp(r9 / "measurements" / "recording.csv") + slurp(r9 / "inverse" / "track.csv"));
  return fp;
}

Outcome determinism(const fs::path& root) {
  std::vector<int> counts{1, 4, max_worker_count()};
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<std::string>> runs;
  for (int n : counts) {
    set_worker_count(n);
    runs.push_back(fingerprints(root / ("workers_" + std::to_string(n))));
  }
  set_worker_count(0);
  std::string mismatches;
  for (std::size_t k = 0; k < runs.front().size(); ++k) {
    for (std::size_t r = 1; r < runs.size(); ++r) {
      if (runs[r][k] != runs.front()[k]) {
        mismatches += " criterion " + std::to_string(k + 3) + " differs at " + std::to_string(counts[r]) + " workers;";
      }
    }
  }
  std::string list;
  for (int n : counts) list += (list.empty() ? "" : ", ") + std::to_string(n);
  Outcome o;
  o.passed = mismatches.empty();
  o.detail = "criteria 3-9 outputs at worker counts {" + list + "}: " +
             (mismatches.empty() ? std::string("byte-identical") : mismatches) + fmt(" [%.0f s]", seconds_since(t0));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string work = "acceptance_runs";
  std::vector<int> only;
  app.add_option("--work", work, "Directory for twin runs");
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  const fs::path root = fs::absolute(work);
  fs::create_directories(root);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"scheme order", [] { return timed_check([] { return check_scheme_order(); }, 1.0); }},
      {"integrator order", [] { return timed_check([] { return check_rk4_order(); }, 1.0); }},
      {"propagation speed", [] { return timed_check([] { return check_propagation_speed(128); }, 10.0); }},
      {"boundary quality", [] { return timed_check([] { return check_boundary_reflection(128); }, 10.0); }},
      {"duality",
       [] {
         const auto t0 = std::chrono::steady_clock::now();
         const CheckResult coarse = check_duality(1, 32);
         const CheckResult fine = check_duality(1, 63);
         Outcome o = from_check(coarse, seconds_since(t0), 30.0);
         o.passed = o.passed && fine.value < coarse.value;
         o.detail += fmt(" refined: %.3e ", fine.value) + (fine.value < coarse.value ? "(decreased)" : "(did not decrease)");
         return o;
       }},
      {"gradient oracle", [] { return timed_check([] { return check_gradient(1, {48, 300, 10}); }, 300.0); }},
      {"reinforcement twin", [&] { return reinforcement(root / "reinforcement", 1800.0); }},
      {"static localization twin", [&] { return localization(root / "localization", 600.0); }},
      {"moving-source twin", [&] { return tracking(root / "tracking", 600.0); }},
      {"determinism", [&] { return determinism(root / "determinism"); }},
  };

  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.passed;
    std::printf("%s criterion %d (%s): %s\n", o.passed ? "PASS" : "FAIL", id, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
