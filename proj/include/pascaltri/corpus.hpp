#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pascaltri/cloud.hpp"

namespace pascaltri {

struct CorpusEntry {
  std::string name;
  PixelCloud cloud;
  bool symmetric = false;
  std::optional<double> axis;  // mirror axis through the centroid, radians
};

// horizontal: every mirror axis is the x direction (what the horizontal
// criterion tests). random: axis angle uniform in [0, pi).
enum class AxisMode { horizontal, random };

AxisMode axis_mode_from_string(const std::string& name);

// count/2 mirror-symmetric clouds followed by count/2 asymmetric ones. Base
// points lie in the unit disk; every coordinate then gets gaussian noise of
// standard deviation jitter * extent and the cloud is shifted by a random
// offset. Asymmetric draws that come within reach of a mirror symmetry (see
// mirror_distance) are redrawn. Deterministic in the seed.
std::vector<CorpusEntry> synth_corpus(std::uint64_t seed, int count, double jitter,
                                      AxisMode mode = AxisMode::random);

// Smallest horizontal symmetry score of the cloud over 180 rotations; zero
// for a mirror-symmetric cloud.
double mirror_distance(const PixelCloud& cloud);

}  // namespace pascaltri
