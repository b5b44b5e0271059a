#include "adjsound/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "adjsound/errors.hpp"

namespace adjsound {

namespace {

using json = nlohmann::json;

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) ensure_directory(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw ConfigError("cannot read " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const fs::path& path, std::size_t row) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || (*end != '\0' && *end != '\r')) {
    throw ConfigError(path.string() + ": row " + std::to_string(row) + ": bad number '" + s + "'");
  }
  return v;
}

/// Reads a CSV, checking the header against `expected` when given.
std::vector<std::vector<double>> read_table(const fs::path& path, std::vector<std::string>* header,
                                            const std::vector<std::string>& expected = {}) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> names = split(line);
  if (!expected.empty() && names != expected) {
    throw ConfigError(path.string() + ": unexpected header '" + line + "'");
  }
  if (header) *header = names;
  std::vector<std::vector<double>> rows;
  std::size_t r = 1;
  while (std::getline(in, line)) {
    ++r;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != names.size()) {
      throw ConfigError(path.string() + ": row " + std::to_string(r) + " has " +
                        std::to_string(cells.size()) + " fields, expected " +
                        std::to_string(names.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c, path, r));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_f64_le(std::ostream& out, const double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t bits = std::bit_cast<std::uint64_t>(data[i]);
      char bytes[8];
      for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
      out.write(bytes, 8);
    }
  }
}

void read_f64_le(std::istream& in, double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      unsigned char bytes[8];
      in.read(reinterpret_cast<char*>(bytes), 8);
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
      data[i] = std::bit_cast<double>(bits);
    }
  }
}

fs::path with_suffix(const fs::path& stem, const char* ext) {
  return fs::path(stem.string() + ext);
}

template <class Tag>
void write_components(const fs::path& dir, const FieldSet<Tag>& q, std::size_t level, double time_s,
                      const std::string& prefix) {
  char lv[16];
  std::snprintf(lv, sizeof lv, "%06zu", level);
  for (int c = 0; c < q.num_components(); ++c) {
    const std::string name = prefix + FieldSet<Tag>::component_name(c, q.num_components());
    write_snapshot(dir / (name + "_" + lv), q.component(c), time_s, name);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void ensure_directory(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_recording_csv(const fs::path& path, const Recording& rec) {
  std::ofstream out = open_out(path);
  out << "time_s";
  for (const auto& n : rec.names) out << ',' << n;
  out << '\n';
  for (std::size_t n = 0; n < rec.num_samples(); ++n) {
    out << format_double(static_cast<double>(n) / rec.sample_rate);
    for (const auto& ch : rec.channels) out << ',' << format_double(ch[n]);
    out << '\n';
  }
  if (!out) throw ConfigError("write failed: " + path.string());
}

Recording read_recording_csv(const fs::path& path) {
  std::vector<std::string> header;
  const auto rows = read_table(path, &header);
  if (header.empty() || header.front() != "time_s") {
    throw ConfigError(path.string() + ": first column must be time_s");
  }
  if (rows.size() < 2) throw ConfigError(path.string() + ": need at least two samples");
  Recording rec;
  rec.sample_rate = 1.0 / (rows[1][0] - rows[0][0]);
  rec.names.assign(header.begin() + 1, header.end());
  rec.channels.assign(rec.names.size(), std::vector<double>(rows.size()));
  for (std::size_t n = 0; n < rows.size(); ++n) {
    for (std::size_t m = 0; m < rec.names.size(); ++m) rec.channels[m][n] = rows[n][m + 1];
  }
  return rec;
}

void write_signal_csv(const fs::path& path, double dt, const std::vector<double>& values) {
  std::ofstream out = open_out(path);
  out << "time_s,s_value\n";
  for (std::size_t n = 0; n < values.size(); ++n) {
    out << format_double(static_cast<double>(n) * dt) << ',' << format_double(values[n]) << '\n';
  }
  if (!out) throw ConfigError("write failed: " + path.string());
}

SignalTrace read_signal_csv(const fs::path& path) {
  const auto rows = read_table(path, nullptr, {"time_s", "s_value"});
  SignalTrace t;
  for (const auto& r : rows) {
    t.time_s.push_back(r[0]);
    t.values.push_back(r[1]);
  }
  return t;
}

void write_iteration_csv(const fs::path& path, const std::vector<IterationRecord>& rows,
                         bool append) {
  const bool header = !append || !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out = open_out(path, append ? std::ios::app : std::ios::out);
  if (header) out << "iter,J,alpha,grad_norm,wall_s\n";
  for (const auto& r : rows) {
    out << r.iter << ',' << format_double(r.J) << ',' << format_double(r.alpha) << ','
        << format_double(r.grad_norm) << ',' << format_double(r.wall_s) << '\n';
  }
  if (!out) throw ConfigError("write failed: " + path.string());
}

std::vector<IterationRecord> read_iteration_csv(const fs::path& path) {
  const auto rows = read_table(path, nullptr, {"iter", "J", "alpha", "grad_norm", "wall_s"});
  std::vector<IterationRecord> out;
  for (const auto& r : rows) {
    out.push_back({static_cast<int>(std::lround(r[0])), r[1], r[2], r[3], r[4]});
  }
  return out;
}

void write_track_csv(const fs::path& path, const Track& track) {
  std::ofstream out = open_out(path);
  out << "time_s,x1_m,x2_m,x3_m,confidence\n";
  for (const auto& p : track.points) {
    out << format_double(p.time_s) << ',' << format_double(p.position[0]) << ','
        << format_double(p.position[1]) << ',' << format_double(p.position[2]) << ','
        << format_double(p.confidence) << '\n';
  }
  if (!out) throw ConfigError("write failed: " + path.string());
}

void write_peak_csv(const fs::path& path, const PeakSet& peaks) {
  std::ofstream out = open_out(path);
  out << "rank,x1_m,x2_m,x3_m,value\n";
  for (std::size_t i = 0; i < peaks.peaks.size(); ++i) {
    const Peak& p = peaks.peaks[i];
    out << i << ',' << format_double(p.position[0]) << ',' << format_double(p.position[1]) << ','
        << format_double(p.position[2]) << ',' << format_double(p.value) << '\n';
  }
  if (!out) throw ConfigError("write failed: " + path.string());
}

void write_snapshot(const fs::path& stem, const ScalarField& field, double time_s,
                    const std::string& component) {
  const Grid& g = field.grid();
  {
    std::ofstream out = open_out(with_suffix(stem, ".f64"), std::ios::out | std::ios::binary);
    write_f64_le(out, field.data(), field.size());
    if (!out) throw ConfigError("write failed: " + stem.string() + ".f64");
  }
  json meta;
  meta["dim"] = g.dim();
  meta["dims"] = {g.count(0), g.count(1), g.count(2)};
  meta["spacing_m"] = {g.spacing(0), g.spacing(1), g.spacing(2)};
  meta["origin_m"] = {g.origin(0), g.origin(1), g.origin(2)};
  meta["time_s"] = time_s;
  meta["component"] = component;
  meta["dtype"] = "float64";
  meta["byte_order"] = "little";
  meta["layout"] = "x1_fastest";
  std::ofstream out = open_out(with_suffix(stem, ".json"));
  out << meta.dump(2) << '\n';
}

SnapshotMeta read_snapshot_meta(const fs::path& stem) {
  std::ifstream in = open_in(with_suffix(stem, ".json"));
  json j;
  try {
    in >> j;
    SnapshotMeta m;
    m.dim = j.at("dim").get<int>();
    for (int a = 0; a < 3; ++a) {
      m.dims[a] = j.at("dims").at(a).get<int>();
      m.spacing[a] = j.at("spacing_m").at(a).get<double>();
      m.origin[a] = j.at("origin_m").at(a).get<double>();
    }
    m.time_s = j.at("time_s").get<double>();
    m.component = j.at("component").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(stem.string() + ".json: " + e.what());
  }
}

ScalarField read_snapshot(const fs::path& stem, SnapshotMeta* meta_out) {
  const SnapshotMeta m = read_snapshot_meta(stem);
  ScalarField f(Grid(m.dim, m.dims, m.spacing, m.origin));
  const fs::path raw = with_suffix(stem, ".f64");
  if (fs::file_size(raw) != f.size() * sizeof(double)) {
    throw ConfigError(raw.string() + ": size does not match the sidecar dimensions");
  }
  std::ifstream in = open_in(raw, std::ios::in | std::ios::binary);
  read_f64_le(in, f.data(), f.size());
  if (!in) throw ConfigError("read failed: " + raw.string());
  if (meta_out) *meta_out = m;
  return f;
}

void write_state_snapshot(const fs::path& dir, const StateField& q, std::size_t level,
                          double time_s) {
  write_components(dir, q, level, time_s, "");
}

void write_state_snapshot(const fs::path& dir, const AdjointStateField& q, std::size_t level,
                          double time_s) {
  write_components(dir, q, level, time_s, "adj_");
}

Plane extract_plane(const ScalarField& field, int normal_axis, int index) {
  const Grid& g = field.grid();
  Plane p;
  if (g.dim() == 2) {
    p.width = g.count(0);
    p.height = g.count(1);
    p.values.assign(field.values().begin(), field.values().end());
    return p;
  }
  if (normal_axis < 0 || normal_axis > 2) throw ConfigError("plane normal axis must be 0, 1 or 2");
  if (index < 0 || index >= g.count(normal_axis)) {
    throw ConfigError("plane index " + std::to_string(index) + " outside the grid");
  }
  const int a0 = normal_axis == 0 ? 1 : 0;
  const int a1 = normal_axis == 2 ? 1 : 2;
  p.width = g.count(a0);
  p.height = g.count(a1);
  p.values.resize(static_cast<std::size_t>(p.width) * p.height);
  for (int j = 0; j < p.height; ++j) {
    for (int i = 0; i < p.width; ++i) {
      Index3 ijk{};
      ijk[normal_axis] = index;
      ijk[a0] = i;
      ijk[a1] = j;
      p.values[static_cast<std::size_t>(j) * p.width + i] = field[g.index(ijk[0], ijk[1], ijk[2])];
    }
  }
  return p;
}

void write_pgm(const fs::path& path, const Plane& plane) {
  double peak = 0.0;
  for (double v : plane.values) peak = std::max(peak, std::abs(v));
  std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << plane.width << ' ' << plane.height << "\n255\n";
  std::vector<unsigned char> row(plane.width);
  for (int j = plane.height - 1; j >= 0; --j) {
    for (int i = 0; i < plane.width; ++i) {
      const double v = plane.values[static_cast<std::size_t>(j) * plane.width + i];
      row[i] = peak > 0.0 ? static_cast<unsigned char>(std::lround(255.0 * std::abs(v) / peak)) : 0;
    }
    out.write(reinterpret_cast<const char*>(row.data()), plane.width);
  }
  if (!out) throw ConfigError("write failed: " + path.string());
}

}  // namespace adjsound
