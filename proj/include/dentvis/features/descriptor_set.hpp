#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "dentvis/core/matrix.hpp"

namespace dentvis {

/// Square patches of side `patch` placed every `stride` pixels.
struct GridSpec {
  std::size_t patch = 16;
  std::size_t stride = 8;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws InvalidArgument unless patch >= 4 and 1 <= stride <= patch.
void validate(const GridSpec& grid);

struct PatchOrigin {
  std::size_t x0;
  std::size_t y0;
};

/// Patch origins in raster order. Count is
/// floor((w - patch) / stride + 1) * floor((h - patch) / stride + 1).
std::vector<PatchOrigin> grid_origins(std::size_t width, std::size_t height, const GridSpec& grid);

/// Normalized center of a patch, in [0, 1)^2.
std::array<float, 2> patch_center(const PatchOrigin& o, std::size_t patch, std::size_t width,
                                  std::size_t height);

/// Positioned local descriptors for one image.
class DescriptorSet {
 public:
  DescriptorSet() = default;
  explicit DescriptorSet(std::size_t dim) : dim_(dim), vectors_(0, dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return centers_.size(); }
  bool empty() const noexcept { return centers_.empty(); }

  void add(std::array<float, 2> center, std::span<const float> vec);
  /// Appends every entry of `other`; dims must match.
  void append(const DescriptorSet& other);

  std::array<float, 2> center(std::size_t i) const { return centers_[i]; }
  std::span<const float> vec(std::size_t i) const { return vectors_.row(i); }
  const MatrixF& vectors() const noexcept { return vectors_; }
  const std::vector<std::array<float, 2>>& centers() const noexcept { return centers_; }

  friend bool operator==(const DescriptorSet&, const DescriptorSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::array<float, 2>> centers_;
  MatrixF vectors_;
};

/// L2-normalize, clip each component at `clip`, renormalize. A (near) zero
/// vector is left as all zeros.
void normalize_l2_clipped(std::span<float> v, float clip = 0.2f);

}  // namespace dentvis
