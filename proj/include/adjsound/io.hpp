#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "adjsound/field.hpp"
#include "adjsound/localizer.hpp"
#include "adjsound/microphones.hpp"
#include "adjsound/optimizer.hpp"

namespace adjsound {

namespace fs = std::filesystem;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Header `time_s,<name>,...`, one row per level. Throws ConfigError on I/O failure.
void write_recording_csv(const fs::path& path, const Recording& recording);
/// Sample rate is recovered from the first two time stamps.
Recording read_recording_csv(const fs::path& path);

struct SignalTrace {
  std::vector<double> time_s;
  std::vector<double> values;
};

/// `time_s,s_value`.
void write_signal_csv(const fs::path& path, double dt, const std::vector<double>& values);
SignalTrace read_signal_csv(const fs::path& path);

/// `iter,J,alpha,grad_norm,wall_s`; `append` keeps existing rows.
void write_iteration_csv(const fs::path& path, const std::vector<IterationRecord>& rows,
                         bool append = false);
std::vector<IterationRecord> read_iteration_csv(const fs::path& path);

/// `time_s,x1_m,x2_m,x3_m,confidence`.
void write_track_csv(const fs::path& path, const Track& track);
/// `rank,x1_m,x2_m,x3_m,value`, one row per peak.
void write_peak_csv(const fs::path& path, const PeakSet& peaks);

struct SnapshotMeta {
  Index3 dims{1, 1, 1};
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin{0.0, 0.0, 0.0};
  int dim = 2;
  double time_s = 0.0;
  std::string component;
};

/**
 * Raw little-endian float64 values, x1 fastest, in `<stem>.f64` with a JSON
 * sidecar `<stem>.json` holding dims, spacing, origin, time and component name.
 */
void write_snapshot(const fs::path& stem, const ScalarField& field, double time_s,
                    const std::string& component);
ScalarField read_snapshot(const fs::path& stem, SnapshotMeta* meta = nullptr);
SnapshotMeta read_snapshot_meta(const fs::path& stem);

/// One snapshot per component: `<dir>/<prefix><name>_<level>`; adjoint names carry `adj_`.
void write_state_snapshot(const fs::path& dir, const StateField& q, std::size_t level, double time_s);
void write_state_snapshot(const fs::path& dir, const AdjointStateField& q, std::size_t level,
                          double time_s);

/// Row-major plane (width = first in-plane axis), rows bottom-up in storage order.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> values;
};

/// Plane normal to `normal_axis` at node `index`; a 2D field is its own plane.
Plane extract_plane(const ScalarField& field, int normal_axis, int index);

/// 8-bit binary PGM of |values| / max|values| (top row = largest second coordinate).
void write_pgm(const fs::path& path, const Plane& plane);

/// Creates the directory (and parents); ConfigError on failure.
void ensure_directory(const fs::path& dir);

}  // namespace adjsound
