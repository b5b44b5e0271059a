#include "adjsound/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "adjsound/errors.hpp"

namespace adjsound {

namespace {

using json = nlohmann::json;

/// A JSON object being consumed; remembers its key path and which keys were read.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError((path_.empty() ? std::string("<root>") : path_) + ": " + msg);
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  /// True when the key is present and not null; either way it counts as seen.
  bool has(const std::string& key) const {
    used_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const std::string& key) const {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(key_path(key) + ": required key is missing");
    return j_.at(key);
  }

  double number(const std::string& key) const { return as_number(raw(key), key_path(key)); }
  double number(const std::string& key, double def) const { return has(key) ? number(key) : def; }

  long long integer(const std::string& key) const { return as_integer(raw(key), key_path(key)); }
  long long integer(const std::string& key, long long def) const {
    return has(key) ? integer(key) : def;
  }
  std::size_t count(const std::string& key, std::size_t def) const {
    if (!has(key)) return def;
    const long long v = integer(key);
    if (v < 0) throw ConfigError(key_path(key) + ": must be >= 0");
    return static_cast<std::size_t>(v);
  }

  bool boolean(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(key_path(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& def) const {
    return has(key) ? string(key) : def;
  }

  std::uint64_t u64(const std::string& key, std::uint64_t def) const {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError(key_path(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::vector<double> numbers(const std::string& key, std::size_t expected) const {
    const json& v = raw(key);
    const std::string p = key_path(key);
    if (!v.is_array()) throw ConfigError(p + ": expected an array");
    if (expected && v.size() != expected) {
      throw ConfigError(p + ": expected " + std::to_string(expected) + " values, got " +
                        std::to_string(v.size()));
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], p + "[" + std::to_string(i) + "]"));
    return out;
  }

  Vec3 vec(const std::string& key, int dim) const {
    const std::vector<double> v = numbers(key, static_cast<std::size_t>(dim));
    Vec3 out{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) out[a] = v[a];
    return out;
  }

  Reader child(const std::string& key) const { return Reader(raw(key), key_path(key)); }

  std::vector<Reader> children(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(key_path(key) + ": expected an array");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], key_path(key) + "[" + std::to_string(i) + "]");
    return out;
  }

  /// Rejects keys that were never read.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(key_path(it.key()) + ": unknown key");
    }
  }

 private:
  static double as_number(const json& v, const std::string& p) {
    if (!v.is_number()) throw ConfigError(p + ": expected a number");
    return v.get<double>();
  }
  static long long as_integer(const json& v, const std::string& p) {
    if (!v.is_number_integer()) throw ConfigError(p + ": expected an integer");
    return v.get<long long>();
  }

  const json& j_;
  std::string path_;
  mutable std::set<std::string> used_;
};

template <class E>
E pick(const Reader& r, const std::string& key, const std::vector<std::pair<std::string, E>>& options,
       std::optional<E> def = std::nullopt) {
  if (!r.has(key) && def) return *def;
  const std::string s = r.string(key);
  std::string allowed;
  for (const auto& [name, value] : options) {
    if (name == s) return value;
    allowed += (allowed.empty() ? "" : ", ") + name;
  }
  throw ConfigError(r.key_path(key) + ": '" + s + "' is not one of " + allowed);
}

const std::vector<std::pair<std::string, Mode>> kModes = {
    {"forward", Mode::Forward}, {"optimize", Mode::Optimize}, {"localize", Mode::Localize},
    {"track", Mode::Track},     {"verify", Mode::Verify}};
const std::vector<std::pair<std::string, SignalKind>> kSignalKinds = {
    {"log_sweep", SignalKind::LogSweep},
    {"band_noise", SignalKind::BandNoise},
    {"harmonic", SignalKind::Harmonic},
    {"samples_from_file", SignalKind::SamplesFromFile},
    {"zero", SignalKind::Zero}};
const std::vector<std::pair<std::string, StoragePolicy>> kStorage = {
    {"auto", StoragePolicy::Auto}, {"full", StoragePolicy::Full}, {"checkpointed", StoragePolicy::Checkpointed}};
const std::vector<std::pair<std::string, ObjectiveKind>> kObjectives = {
    {"microphones", ObjectiveKind::Microphones}, {"region", ObjectiveKind::Region}};
const std::vector<std::pair<std::string, ArrayKind>> kArrays = {
    {"spiral", ArrayKind::Spiral}, {"line", ArrayKind::Line}, {"explicit", ArrayKind::Explicit}};

template <class E>
std::string name_of(E value, const std::vector<std::pair<std::string, E>>& options) {
  for (const auto& [name, v] : options) {
    if (v == value) return name;
  }
  throw ConfigError("unnamed enumerator");
}

json vec_json(const Vec3& v, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(v[i]);
  return a;
}

GridConfig parse_grid(const Reader& r) {
  GridConfig g;
  g.dim = static_cast<int>(r.integer("dim"));
  if (g.dim != 2 && g.dim != 3) r.fail("dim must be 2 or 3");
  const std::size_t d = static_cast<std::size_t>(g.dim);
  for (double c : r.numbers("counts", d)) {
    if (c != std::floor(c)) throw ConfigError(r.key_path("counts") + ": expected integers");
    g.counts.push_back(static_cast<int>(c));
  }
  g.extent_m = r.numbers("extent_m", d);
  g.origin_m = r.has("origin_m") ? r.numbers("origin_m", d) : std::vector<double>(d, 0.0);
  r.finish();
  try {
    (void)g.build();
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
  return g;
}

SignalSpec parse_signal(const Reader& r) {
  SignalSpec s;
  s.kind = pick(r, "kind", kSignalKinds);
  s.amplitude = r.number("amplitude_pa_per_s", 1.0);
  s.f1_hz = r.number("f1_hz", 0.0);
  s.f2_hz = r.number("f2_hz", 0.0);
  s.frequency_hz = r.number("frequency_hz", 0.0);
  s.phase_rad = r.number("phase_rad", 0.0);
  s.delay_s = r.number("delay_s", 0.0);
  s.duration_s = r.number("duration_s", 0.0);
  s.ramp_fraction = r.number("ramp_fraction", 0.05);
  s.seed = r.u64("seed", 0);
  s.path = r.string("path", "");
  if (s.delay_s < 0.0) throw ConfigError(r.key_path("delay_s") + ": must be >= 0");
  if (s.duration_s < 0.0) throw ConfigError(r.key_path("duration_s") + ": must be >= 0");
  r.finish();
  return s;
}

json signal_json(const SignalSpec& s) {
  json j;
  j["kind"] = name_of(s.kind, kSignalKinds);
  j["amplitude_pa_per_s"] = s.amplitude;
  j["f1_hz"] = s.f1_hz;
  j["f2_hz"] = s.f2_hz;
  j["frequency_hz"] = s.frequency_hz;
  j["phase_rad"] = s.phase_rad;
  j["delay_s"] = s.delay_s;
  j["duration_s"] = s.duration_s;
  j["ramp_fraction"] = s.ramp_fraction;
  j["seed"] = s.seed;
  if (!s.path.empty()) j["path"] = s.path;
  return j;
}

ArraySpec parse_array(const Reader& r, int dim) {
  ArraySpec a;
  a.kind = pick(r, "kind", kArrays);
  if (a.kind == ArrayKind::Explicit) {
    const json& list = r.raw("positions_m");
    if (!list.is_array() || list.empty()) throw ConfigError(r.key_path("positions_m") + ": expected a non-empty array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = r.key_path("positions_m") + "[" + std::to_string(i) + "]";
      if (!list[i].is_array() || list[i].size() != static_cast<std::size_t>(dim)) {
        throw ConfigError(p + ": expected " + std::to_string(dim) + " coordinates");
      }
      Vec3 x{0.0, 0.0, 0.0};
      for (int k = 0; k < dim; ++k) {
        if (!list[i][k].is_number()) throw ConfigError(p + ": expected numbers");
        x[k] = list[i][k].get<double>();
      }
      a.positions.push_back(x);
    }
    a.count = static_cast<int>(a.positions.size());
  } else if (a.kind == ArrayKind::Line) {
    a.count = static_cast<int>(r.integer("count", 64));
    a.start_m = r.vec("start_m", dim);
    a.end_m = r.vec("end_m", dim);
  } else {
    a.count = static_cast<int>(r.integer("count", 64));
    a.r_min_m = r.number("r_min_m", 0.03);
    a.r_max_m = r.number("r_max_m", 0.5);
    a.turns = r.number("turns", 3.0);
    a.scale = r.number("scale", 1.0);
    a.normal_axis = static_cast<int>(r.integer("normal_axis", dim == 3 ? 2 : 1));
    a.offset_m = r.number("offset_m", 0.0);
    a.center_m = r.has("center_m") ? r.vec("center_m", dim) : Vec3{0.0, 0.0, 0.0};
  }
  if (r.has("names")) {
    const json& names = r.raw("names");
    if (!names.is_array()) throw ConfigError(r.key_path("names") + ": expected an array of strings");
    for (const auto& n : names) {
      if (!n.is_string()) throw ConfigError(r.key_path("names") + ": expected an array of strings");
      a.names.push_back(n.get<std::string>());
    }
  }
  r.finish();
  try {
    (void)array_positions(a, dim);
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
  return a;
}

json array_json(const ArraySpec& a, int dim) {
  json j;
  j["kind"] = name_of(a.kind, kArrays);
  if (a.kind == ArrayKind::Explicit) {
    j["positions_m"] = json::array();
    for (const auto& p : a.positions) j["positions_m"].push_back(vec_json(p, dim));
  } else if (a.kind == ArrayKind::Line) {
    j["count"] = a.count;
    j["start_m"] = vec_json(a.start_m, dim);
    j["end_m"] = vec_json(a.end_m, dim);
  } else {
    j["count"] = a.count;
    j["r_min_m"] = a.r_min_m;
    j["r_max_m"] = a.r_max_m;
    j["turns"] = a.turns;
    j["scale"] = a.scale;
    j["normal_axis"] = a.normal_axis;
    j["offset_m"] = a.offset_m;
    j["center_m"] = vec_json(a.center_m, dim);
  }
  if (!a.names.empty()) j["names"] = a.names;
  return j;
}

std::optional<std::size_t> optional_count(const Reader& r, const std::string& key) {
  if (!r.has(key)) return std::nullopt;
  return r.count(key, 0);
}

}  // namespace

Grid GridConfig::build() const { return build_grid(extent_m, counts, origin_m); }

OptimizationSettings OptimizerConfig::settings() const {
  OptimizationSettings s;
  s.max_loops = max_loops;
  s.relative_tolerance = relative_tolerance;
  s.consecutive_below = consecutive_below;
  s.step.initial_factor = initial_factor;
  s.step.max_halvings = max_halvings;
  s.step.quadratic_refinement = quadratic_refinement;
  return s;
}

SolverSettings ScenarioConfig::solver_settings() const {
  SolverSettings s;
  s.gas = gas.model();
  s.sample_rate_hz = time.sample_rate_hz;
  s.steps = time.steps;
  s.filter_enabled = numerics.filter;
  s.filter_alpha = numerics.filter_alpha;
  s.characteristic_bcs = numerics.characteristic_bcs;
  s.sponge = sponge;
  s.storage = numerics.storage;
  s.checkpoint_stride = numerics.checkpoint_stride;
  s.memory_budget_bytes = numerics.memory_budget_mb * 1e6;
  return s;
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  return name == o.name && description == o.description && mode == o.mode && seed == o.seed &&
         grid == o.grid && gas == o.gas && time == o.time && numerics == o.numerics &&
         sponge == o.sponge && sources == o.sources && microphones == o.microphones &&
         objective == o.objective && analysis == o.analysis && optimizer == o.optimizer &&
         localizer == o.localizer && output == o.output;
}

std::string to_string(Mode mode) { return name_of(mode, kModes); }

Mode mode_from_string(const std::string& s) {
  for (const auto& [name, m] : kModes) {
    if (name == s) return m;
  }
  throw ConfigError("unknown mode '" + s + "'");
}

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const Reader root(doc, "");
  ScenarioConfig c;
  c.base_dir = base_dir;
  c.name = root.string("name");
  c.description = root.string("description", "");
  c.mode = pick(root, "mode", kModes, std::optional<Mode>(Mode::Forward));
  c.seed = root.u64("seed", 0);
  c.grid = parse_grid(root.child("grid"));
  const int dim = c.grid.dim;
  const Grid grid = c.grid.build();

  if (root.has("gas")) {
    const Reader r = root.child("gas");
    c.gas.speed_of_sound_m_s = r.number("speed_of_sound_m_s", 343.0);
    c.gas.gamma = r.number("gamma", 1.4);
    c.gas.density_kg_m3 = r.number("density_kg_m3", 1.2);
    r.finish();
    try {
      c.gas.model().validate();
    } catch (const ConfigError& e) {
      r.fail(e.what());
    }
  }

  {
    const Reader r = root.child("time");
    c.time.sample_rate_hz = r.number("sample_rate_hz");
    if (!(c.time.sample_rate_hz > 0.0)) throw ConfigError(r.key_path("sample_rate_hz") + ": must be positive");
    if (r.has("steps") == r.has("duration_s")) r.fail("give exactly one of steps and duration_s");
    if (r.has("steps")) {
      c.time.steps = r.count("steps", 0);
    } else {
      c.time.steps = step_count(r.number("duration_s"), c.time.sample_rate_hz);
    }
    if (c.time.steps == 0) r.fail("run needs at least one step");
    r.finish();
    try {
      check_cfl(grid, c.gas.model(), 1.0 / c.time.sample_rate_hz);
    } catch (const ConfigError& e) {
      r.fail(e.what());
    }
  }

  if (root.has("numerics")) {
    const Reader r = root.child("numerics");
    c.numerics.filter = r.boolean("filter", true);
    c.numerics.filter_alpha = r.number("filter_alpha", CompactFilter::kDefaultAlpha);
    c.numerics.characteristic_bcs = r.boolean("characteristic_bcs", true);
    c.numerics.storage = pick(r, "storage", kStorage, std::optional<StoragePolicy>(StoragePolicy::Auto));
    c.numerics.checkpoint_stride = r.count("checkpoint_stride", 0);
    c.numerics.memory_budget_mb = r.number("memory_budget_mb", 1500.0);
    if (!(c.numerics.filter_alpha > -0.5 && c.numerics.filter_alpha <= 0.5)) {
      throw ConfigError(r.key_path("filter_alpha") + ": must lie in (-0.5, 0.5]");
    }
    r.finish();
  }

  if (root.has("sponge")) {
    const Reader r = root.child("sponge");
    c.sponge.enabled = r.boolean("enabled", true);
    c.sponge.width_nodes = static_cast<int>(r.integer("width_nodes", 16));
    c.sponge.strength_per_s = r.number("strength_per_s", 0.0);
    c.sponge.degree = static_cast<int>(r.integer("degree", 3));
    r.finish();
    try {
      c.sponge.validate();
    } catch (const ConfigError& e) {
      r.fail(e.what());
    }
  }

  if (root.has("sources")) {
    std::set<std::string> names;
    for (const Reader& r : root.children("sources")) {
      SourceConfig s;
      s.name = r.string("name", "source_" + std::to_string(c.sources.size()));
      if (!names.insert(s.name).second) throw ConfigError(r.key_path("name") + ": duplicate source name");
      s.center_m = r.vec("center_m", dim);
      s.half_width_m = r.number("half_width_m");
      if (!(s.half_width_m > 0.0)) throw ConfigError(r.key_path("half_width_m") + ": must be positive");
      if (!grid.contains(s.center_m)) throw ConfigError(r.key_path("center_m") + ": outside the domain");
      const Reader sig = r.child("signal");
      s.signal = parse_signal(sig);
      try {
        validate_signal(s.signal, c.time.sample_rate_hz);
      } catch (const ConfigError& e) {
        throw ConfigError(r.key_path("signal") + "." + e.what());
      }
      if (r.has("path")) {
        const Reader p = r.child("path");
        SourcePath path;
        path.start = p.vec("start_m", dim);
        path.end = p.vec("end_m", dim);
        path.t_start = p.number("t_start_s");
        path.t_end = p.number("t_end_s");
        if (!(path.t_end > path.t_start)) p.fail("t_end_s must exceed t_start_s");
        if (!grid.contains(path.start) || !grid.contains(path.end)) p.fail("path leaves the domain");
        p.finish();
        s.path = path;
      }
      r.finish();
      c.sources.push_back(std::move(s));
    }
  }

  if (root.has("microphones")) {
    const Reader r = root.child("microphones");
    c.microphones = parse_array(r, dim);
    try {
      (void)build_array(*c.microphones, grid);
    } catch (const ConfigError& e) {
      r.fail(e.what());
    }
  }

  if (root.has("objective")) {
    const Reader r = root.child("objective");
    c.objective.kind = pick(r, "kind", kObjectives, std::optional<ObjectiveKind>(ObjectiveKind::Microphones));
    c.objective.half_width_m = r.number("half_width_m", 0.0);
    if (c.objective.half_width_m < 0.0) throw ConfigError(r.key_path("half_width_m") + ": must be >= 0");
    if (c.objective.kind == ObjectiveKind::Region) {
      c.objective.region_min_m = r.vec("region_min_m", dim);
      c.objective.region_max_m = r.vec("region_max_m", dim);
      for (int a = 0; a < dim; ++a) {
        if (!(c.objective.region_max_m[a] > c.objective.region_min_m[a])) {
          r.fail("region_max_m must exceed region_min_m on every axis");
        }
      }
    } else {
      if (!c.microphones) r.fail("a microphone objective needs a microphones section");
    }
    c.objective.window_begin_step = r.count("window_begin_step", 0);
    c.objective.window_end_step = optional_count(r, "window_end_step");
    c.objective.regularization = r.number("regularization", 0.0);
    if (c.objective.regularization < 0.0) throw ConfigError(r.key_path("regularization") + ": must be >= 0");
    r.finish();
  }

  if (root.has("analysis")) {
    const Reader r = root.child("analysis");
    const json& list = r.raw("probes_m");
    if (!list.is_array()) throw ConfigError(r.key_path("probes_m") + ": expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = r.key_path("probes_m") + "[" + std::to_string(i) + "]";
      if (!list[i].is_array() || list[i].size() != static_cast<std::size_t>(dim)) {
        throw ConfigError(p + ": expected " + std::to_string(dim) + " coordinates");
      }
      Vec3 x{0.0, 0.0, 0.0};
      for (int k = 0; k < dim; ++k) x[k] = list[i][k].get<double>();
      if (!grid.contains(x)) throw ConfigError(p + ": outside the domain");
      c.analysis.probes_m.push_back(x);
    }
    const std::vector<double> band = r.numbers("band_hz", 2);
    c.analysis.band_lo_hz = band[0];
    c.analysis.band_hi_hz = band[1];
    if (!(band[1] > band[0] && band[0] >= 0.0)) throw ConfigError(r.key_path("band_hz") + ": expected [lo, hi] with lo < hi");
    r.finish();
  }

  if (root.has("optimizer")) {
    const Reader r = root.child("optimizer");
    c.optimizer.max_loops = static_cast<int>(r.integer("max_loops", 20));
    c.optimizer.relative_tolerance = r.number("relative_tolerance", 1e-3);
    c.optimizer.consecutive_below = static_cast<int>(r.integer("consecutive_below", 2));
    c.optimizer.initial_factor = r.number("initial_factor", 2.0);
    c.optimizer.max_halvings = static_cast<int>(r.integer("max_halvings", 8));
    c.optimizer.quadratic_refinement = r.boolean("quadratic_refinement", true);
    if (c.optimizer.max_loops < 0) throw ConfigError(r.key_path("max_loops") + ": must be >= 0");
    if (!(c.optimizer.initial_factor > 0.0)) throw ConfigError(r.key_path("initial_factor") + ": must be positive");
    r.finish();
  }

  if (root.has("localizer")) {
    const Reader r = root.child("localizer");
    c.localizer.count = static_cast<int>(r.integer("count", 1));
    if (c.localizer.count < 1) throw ConfigError(r.key_path("count") + ": must be >= 1");
    c.localizer.exclusion_radius_cells = r.number("exclusion_radius_cells", 6.0);
    if (!(c.localizer.exclusion_radius_cells > 0.0)) {
      throw ConfigError(r.key_path("exclusion_radius_cells") + ": must be positive");
    }
    if (r.has("restriction")) {
      const Reader q = r.child("restriction");
      Restriction res;
      res.axis = static_cast<int>(q.integer("axis"));
      if (res.axis < 0 || res.axis >= dim) q.fail("axis must be < " + std::to_string(dim));
      res.coordinate_m = q.number("coordinate_m");
      if (res.coordinate_m < grid.origin(res.axis) || res.coordinate_m > grid.upper(res.axis)) {
        throw ConfigError(q.key_path("coordinate_m") + ": outside the domain");
      }
      q.finish();
      c.localizer.restriction = res;
    }
    c.localizer.window_begin_step = r.count("window_begin_step", 0);
    c.localizer.window_end_step = optional_count(r, "window_end_step");
    c.localizer.track_window_steps = r.count("track_window_steps", 0);
    c.localizer.expected_frequency_hz = r.number("expected_frequency_hz", 0.0);
    r.finish();
  }

  if (root.has("output")) {
    const Reader r = root.child("output");
    c.output.directory = r.string("directory", "out");
    c.output.snapshot_every_steps = r.count("snapshot_every_steps", 0);
    r.finish();
  }

  root.finish();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string serialize_config(const ScenarioConfig& c) {
  const int dim = c.grid.dim;
  json j;
  j["name"] = c.name;
  if (!c.description.empty()) j["description"] = c.description;
  j["mode"] = to_string(c.mode);
  j["seed"] = c.seed;
  j["grid"] = {{"dim", dim}, {"counts", c.grid.counts}, {"extent_m", c.grid.extent_m}, {"origin_m", c.grid.origin_m}};
  j["gas"] = {{"speed_of_sound_m_s", c.gas.speed_of_sound_m_s}, {"gamma", c.gas.gamma}, {"density_kg_m3", c.gas.density_kg_m3}};
  j["time"] = {{"sample_rate_hz", c.time.sample_rate_hz}, {"steps", c.time.steps}};
  j["numerics"] = {{"filter", c.numerics.filter},
                   {"filter_alpha", c.numerics.filter_alpha},
                   {"characteristic_bcs", c.numerics.characteristic_bcs},
                   {"storage", name_of(c.numerics.storage, kStorage)},
                   {"checkpoint_stride", c.numerics.checkpoint_stride},
                   {"memory_budget_mb", c.numerics.memory_budget_mb}};
  j["sponge"] = {{"enabled", c.sponge.enabled},
                 {"width_nodes", c.sponge.width_nodes},
                 {"strength_per_s", c.sponge.strength_per_s},
                 {"degree", c.sponge.degree}};
  j["sources"] = json::array();
  for (const SourceConfig& s : c.sources) {
    json sj;
    sj["name"] = s.name;
    sj["center_m"] = vec_json(s.center_m, dim);
    sj["half_width_m"] = s.half_width_m;
    sj["signal"] = signal_json(s.signal);
    if (s.path) {
      sj["path"] = {{"start_m", vec_json(s.path->start, dim)},
                    {"end_m", vec_json(s.path->end, dim)},
                    {"t_start_s", s.path->t_start},
                    {"t_end_s", s.path->t_end}};
    }
    j["sources"].push_back(sj);
  }
  if (c.microphones) j["microphones"] = array_json(*c.microphones, dim);
  json obj;
  obj["kind"] = name_of(c.objective.kind, kObjectives);
  obj["half_width_m"] = c.objective.half_width_m;
  if (c.objective.kind == ObjectiveKind::Region) {
    obj["region_min_m"] = vec_json(c.objective.region_min_m, dim);
    obj["region_max_m"] = vec_json(c.objective.region_max_m, dim);
  }
  obj["window_begin_step"] = c.objective.window_begin_step;
  if (c.objective.window_end_step) obj["window_end_step"] = *c.objective.window_end_step;
  obj["regularization"] = c.objective.regularization;
  if (c.objective.kind == ObjectiveKind::Region || c.microphones) j["objective"] = obj;
  if (!c.analysis.probes_m.empty() || c.analysis.band_hi_hz > 0.0) {
    json a;
    a["probes_m"] = json::array();
    for (const auto& p : c.analysis.probes_m) a["probes_m"].push_back(vec_json(p, dim));
    a["band_hz"] = {c.analysis.band_lo_hz, c.analysis.band_hi_hz};
    j["analysis"] = a;
  }
  j["optimizer"] = {{"max_loops", c.optimizer.max_loops},
                    {"relative_tolerance", c.optimizer.relative_tolerance},
                    {"consecutive_below", c.optimizer.consecutive_below},
                    {"initial_factor", c.optimizer.initial_factor},
                    {"max_halvings", c.optimizer.max_halvings},
                    {"quadratic_refinement", c.optimizer.quadratic_refinement}};
  json loc;
  loc["count"] = c.localizer.count;
  loc["exclusion_radius_cells"] = c.localizer.exclusion_radius_cells;
  if (c.localizer.restriction) {
    loc["restriction"] = {{"axis", c.localizer.restriction->axis},
                          {"coordinate_m", c.localizer.restriction->coordinate_m}};
  }
  loc["window_begin_step"] = c.localizer.window_begin_step;
  if (c.localizer.window_end_step) loc["window_end_step"] = *c.localizer.window_end_step;
  loc["track_window_steps"] = c.localizer.track_window_steps;
  loc["expected_frequency_hz"] = c.localizer.expected_frequency_hz;
  j["localizer"] = loc;
  j["output"] = {{"directory", c.output.directory}, {"snapshot_every_steps", c.output.snapshot_every_steps}};
  return j.dump(2) + "\n";
}

std::uint64_t source_seed(std::uint64_t scenario_seed, std::size_t k, std::uint64_t signal_seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(scenario_seed), static_cast<std::uint32_t>(scenario_seed >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(signal_seed),
                    static_cast<std::uint32_t>(signal_seed >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

SourceSet build_sources(const ScenarioConfig& config) {
  const double dt = 1.0 / config.time.sample_rate_hz;
  SourceSet out;
  for (std::size_t k = 0; k < config.sources.size(); ++k) {
    const SourceConfig& sc = config.sources[k];
    SignalSpec spec = sc.signal;
    spec.seed = source_seed(config.seed, k, spec.seed);
    if (spec.kind == SignalKind::SamplesFromFile && !config.base_dir.empty() &&
        std::filesystem::path(spec.path).is_relative()) {
      spec.path = (config.base_dir / spec.path).string();
    }
    MonopoleSource s;
    s.name = sc.name;
    s.center = sc.center_m;
    s.half_width = sc.half_width_m;
    s.path = sc.path;
    try {
      s.signal = generate_signal(spec, config.time.steps, dt);
    } catch (const ConfigError& e) {
      throw ConfigError("sources[" + std::to_string(k) + "].signal." + e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace adjsound
