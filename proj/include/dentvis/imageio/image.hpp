#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dentvis {

/// Single-channel raster, row-major, samples in [0, 1].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, float fill = 0.0f);
  /// Validates dimensions, length and sample range.
  GrayImage(std::size_t width, std::size_t height, std::vector<float> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float at(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }
  float& at(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }

  std::span<const float> row(std::size_t y) const { return {data_.data() + y * width_, width_}; }
  std::span<float> row(std::size_t y) { return {data_.data() + y * width_, width_}; }

  std::span<const float> pixels() const noexcept { return data_; }
  /// Writers must keep samples in [0, 1].
  std::span<float> pixels() noexcept { return data_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<float> data_;
};

/// Interleaved R,G,B raster with channels in [0, 1].
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(std::size_t width, std::size_t height);
  RgbImage(std::size_t width, std::size_t height, std::vector<float> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }

  const float* at(std::size_t x, std::size_t y) const { return data_.data() + 3 * (y * width_ + x); }
  float* at(std::size_t x, std::size_t y) { return data_.data() + 3 * (y * width_ + x); }

  std::span<const float> samples() const noexcept { return data_; }
  std::span<float> samples() noexcept { return data_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<float> data_;
};

/// Axis-aligned window; lies inside its source image.
struct CropRect {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t w = 1;
  std::size_t h = 1;

  std::size_t area() const noexcept { return w * h; }
  friend bool operator==(const CropRect&, const CropRect&) = default;
};

}  // namespace dentvis
