#pragma once

#include <cstdint>
#include <vector>

#include "dentvis/imageio/image.hpp"

namespace dentvis {

struct SegmentationConfig {
  double k = 300.0;  // threshold scale; edge weights are intensity differences on a 0..255 scale
  std::size_t min_size = 50;
  double sigma = 0.8;
  int connectivity = 8;  // 4 or 8
};

void validate(const SegmentationConfig& cfg);

struct LabelMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint32_t> labels;  // row-major, ids 0..segments-1
  std::size_t segments = 0;

  std::uint32_t at(std::size_t x, std::size_t y) const { return labels[y * width + x]; }
};

/// Separable Gaussian blur with edge clamping; sigma 0 copies the input.
std::vector<double> gaussian_smooth(const GrayImage& img, double sigma);

/// Graph-based segmentation with the adaptive threshold Int(C) + k/|C|.
/// Labels are numbered by first appearance in raster order.
LabelMap fh_segment(const GrayImage& img, const SegmentationConfig& cfg = {});

/// Tight bounding box of every segment with at least min_area member pixels,
/// largest box first (ties by segment id).
std::vector<CropRect> roi_rects(const LabelMap& map, std::size_t min_area);

}  // namespace dentvis
