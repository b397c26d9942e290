#pragma once

#include <vector>

#include "dentvis/imageio/image.hpp"

namespace dentvis {

/// Per-pixel gradient from [-1, 0, 1] central differences with edge
/// replication. `orientation` is unsigned, in [0, pi).
struct GradientField {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<float> dx;
  std::vector<float> dy;
  std::vector<float> magnitude;
  std::vector<float> orientation;
};

GradientField gradients(const GrayImage& img);

}  // namespace dentvis
