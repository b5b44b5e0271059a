#include "adjsound/objective.hpp"

#include <algorithm>

#include "adjsound/errors.hpp"

namespace adjsound {

namespace {

double target_at(const Probe& probe, std::size_t n) {
  if (n >= probe.target.size()) {
    throw ShapeError("probe '" + probe.name + "' has no target sample at level " +
                     std::to_string(n));
  }
  return probe.target[n];
}

}  // namespace

double ObjectiveSpec::time_weight(std::size_t n, std::size_t levels) const {
  if (levels == 0) return 0.0;
  const std::size_t last = std::min(window_end, levels - 1);
  if (n < window_begin || n > last) return 0.0;
  if (last == window_begin) return 1.0;
  return (n == window_begin || n == last) ? 0.5 : 1.0;
}

ScalarField ObjectiveSpec::sigma(const Grid& grid) const {
  ScalarField s(grid);
  for (const Probe& p : probes) {
    for (std::size_t i = 0; i < p.support.nodes.size(); ++i) s[p.support.nodes[i]] += p.support.weights[i];
  }
  return s;
}

ObjectiveSpec microphone_objective(const Grid& grid, const MicrophoneArray& array,
                                   const Recording& targets, double half_width) {
  if (targets.num_channels() != array.size()) {
    throw ShapeError("target recording has " + std::to_string(targets.num_channels()) +
                     " channels for " + std::to_string(array.size()) + " microphones");
  }
  ObjectiveSpec spec;
  for (std::size_t m = 0; m < array.size(); ++m) {
    Probe p;
    p.name = array.names[m];
    p.support = blob_stencil(grid, grid.position(array.nodes[m]), half_width);
    p.target = targets.channels[m];
    spec.probes.push_back(std::move(p));
  }
  return spec;
}

std::vector<Probe> region_probes(const ScalarField& sigma) {
  std::vector<Probe> probes;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] <= 0.0) continue;
    Probe p;
    p.name = "node_" + std::to_string(i);
    p.support.nodes = {i};
    p.support.weights = {sigma[i]};
    probes.push_back(std::move(p));
  }
  return probes;
}

void record_probe_targets(std::vector<Probe>& probes, const ScalarField& pressure, double p_ref) {
  for (Probe& p : probes) p.target.push_back(pressure[p.support.nodes.front()] - p_ref);
}

void add_adjoint_forcing(const ScalarField& pressure, const ObjectiveSpec& objective,
                         std::size_t level, double p_ref, double* g_out) {
  if (!objective.in_window(level)) return;
  for (const Probe& probe : objective.probes) {
    const double t = target_at(probe, level);
    const BlobStencil& s = probe.support;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      g_out[s.nodes[i]] += s.weights[i] * (pressure[s.nodes[i]] - p_ref - t);
    }
  }
}

ScalarField adjoint_forcing_g(const ScalarField& pressure, const ObjectiveSpec& objective,
                              std::size_t level, double p_ref) {
  ScalarField g(pressure.grid());
  add_adjoint_forcing(pressure, objective, level, p_ref, g.data());
  return g;
}

double objective_increment(const ScalarField& pressure, const ObjectiveSpec& objective,
                           std::size_t level, std::size_t levels, double p_ref, double dt) {
  const double c = objective.time_weight(level, levels);
  if (c == 0.0) return 0.0;
  CompensatedSum sum;
  for (const Probe& probe : objective.probes) {
    const double t = target_at(probe, level);
    const BlobStencil& s = probe.support;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      const double r = pressure[s.nodes[i]] - p_ref - t;
      sum.add(s.weights[i] * r * r);
    }
  }
  return 0.5 * c * sum.value() * pressure.grid().cell_measure() * dt;
}

double regularization_value(const SourceSet& sources, double lambda, double dt) {
  if (lambda == 0.0) return 0.0;
  CompensatedSum sum;
  for (const MonopoleSource& s : sources) {
    for (double v : s.signal) sum.add(v * v);
  }
  return lambda * sum.value() * dt;
}

double evaluate_objective(const Recording& recording, const ObjectiveSpec& objective,
                          const Grid& grid, double dt) {
  if (recording.num_channels() != objective.probes.size()) {
    throw ShapeError("recording has " + std::to_string(recording.num_channels()) +
                     " channels, objective has " + std::to_string(objective.probes.size()) +
                     " probes");
  }
  const std::size_t levels = recording.num_samples();
  CompensatedSum sum;
  for (std::size_t m = 0; m < objective.probes.size(); ++m) {
    const Probe& probe = objective.probes[m];
    const auto& ch = recording.channels[m];
    if (ch.size() != levels) throw ShapeError("recording channels differ in length");
    if (probe.target.size() != levels) {
      throw ShapeError("probe " + probe.name + ": " + std::to_string(probe.target.size()) +
                       " target samples for " + std::to_string(levels) + " recorded levels");
    }
    const double mass = probe.support.mass();
    for (std::size_t n = 0; n < levels; ++n) {
      const double c = objective.time_weight(n, levels);
      if (c == 0.0) continue;
      const double r = ch[n] - target_at(probe, n);
      sum.add(c * r * r * mass);
    }
  }
  return 0.5 * sum.value() * grid.cell_measure() * dt;
}

}  // namespace adjsound
