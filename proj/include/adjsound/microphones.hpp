#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "adjsound/field.hpp"
#include "adjsound/grid.hpp"

namespace adjsound {

/// Probe positions, each snapped to its nearest grid node.
struct MicrophoneArray {
  std::vector<Vec3> positions;
  std::vector<std::string> names;
  std::vector<std::size_t> nodes;

  std::size_t size() const { return positions.size(); }

  /// Validates positions against the grid (ConfigError listing offending
  /// indices) and snaps each one. Empty names get "mic_NNN".
  static MicrophoneArray create(const Grid& grid, std::vector<Vec3> positions,
                                std::vector<std::string> names = {});
};

/// Pressure fluctuation p - p_ref per microphone per time level.
struct Recording {
  double sample_rate = 0.0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> channels;  // [mic][level]

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_samples() const { return channels.empty() ? 0 : channels.front().size(); }
  double dt() const { return 1.0 / sample_rate; }

  /// Index of a channel by name; throws ConfigError when missing.
  std::size_t channel_index(const std::string& name) const;
};

/// p(node) - p_ref per microphone, no interpolation.
std::vector<double> sample_microphones(const ScalarField& pressure, const MicrophoneArray& array,
                                       double p_ref);

/// Name of microphone i in generated arrays ("mic_007").
std::string default_mic_name(std::size_t i);

}  // namespace adjsound
