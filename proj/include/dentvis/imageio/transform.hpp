#pragma once

#include <cstdint>

#include "dentvis/imageio/image.hpp"

namespace dentvis {

/// Rec.601 luma: 0.299 R + 0.587 G + 0.114 B.
GrayImage to_gray(const RgbImage& img);
/// Replicates the gray channel into R, G and B.
RgbImage to_rgb(const GrayImage& img);

/// Bilinear resampling with pixel-center alignment and edge clamping.
GrayImage resize_bilinear(const GrayImage& img, std::size_t width, std::size_t height);

/// Exact copy of a window; throws OutOfBounds unless r lies inside img.
GrayImage crop(const GrayImage& img, const CropRect& r);

/// Bilinear sample at (x, y) where taps outside the image contribute 0.
float sample_zero_fill(const GrayImage& img, double x, double y);

/// Scales about the image center by `factor` (>1 magnifies); output keeps the
/// input dimensions, uncovered samples are 0.
GrayImage zoom(const GrayImage& img, double factor);

/// Horizontal shear about the center row: row y shifts right by s * (y - cy).
GrayImage shear(const GrayImage& img, double s);

enum class AugmentMode { None, Shear, Zoom };

struct AugmentConfig {
  AugmentMode mode = AugmentMode::None;
  double shear_range = 0.2;  // factor drawn from [-shear_range, shear_range]
  double zoom_lo = 0.8;
  double zoom_hi = 1.2;
  std::uint64_t seed = 0;
};

/// Random shear or zoom per `cfg`; a pure function of (img, cfg).
GrayImage augment(const GrayImage& img, const AugmentConfig& cfg);

}  // namespace dentvis
