#include "adjsound/microphones.hpp"

#include <cstdio>

#include "adjsound/errors.hpp"

namespace adjsound {

std::string default_mic_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "mic_%03zu", i);
  return buf;
}

MicrophoneArray MicrophoneArray::create(const Grid& grid, std::vector<Vec3> positions,
                                        std::vector<std::string> names) {
  std::string bad;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!grid.contains(positions[i])) bad += (bad.empty() ? "" : ", ") + std::to_string(i);
  }
  if (!bad.empty()) throw ConfigError("microphones outside the domain: indices " + bad);
  if (!names.empty() && names.size() != positions.size()) {
    throw ConfigError("microphones: name count does not match position count");
  }
  MicrophoneArray array;
  array.positions = std::move(positions);
  array.names = std::move(names);
  if (array.names.empty()) {
    for (std::size_t i = 0; i < array.positions.size(); ++i) array.names.push_back(default_mic_name(i));
  }
  for (const Vec3& x : array.positions) {
    const Index3 ijk = grid.nearest_node(x);
    array.nodes.push_back(grid.index(ijk[0], ijk[1], ijk[2]));
  }
  return array;
}

std::size_t Recording::channel_index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw ConfigError("recording has no channel named '" + name + "'");
}

std::vector<double> sample_microphones(const ScalarField& pressure, const MicrophoneArray& array,
                                       double p_ref) {
  std::vector<double> out(array.size());
  for (std::size_t i = 0; i < array.size(); ++i) out[i] = pressure[array.nodes[i]] - p_ref;
  return out;
}

}  // namespace adjsound
