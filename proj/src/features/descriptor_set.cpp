#include "dentvis/features/descriptor_set.hpp"

#include <algorithm>
#include <cmath>

#include "dentvis/core/error.hpp"

namespace dentvis {

void validate(const GridSpec& grid) {
  require(grid.patch >= 4, Errc::InvalidArgument, "grid patch must be at least 4");
  require(grid.stride >= 1 && grid.stride <= grid.patch, Errc::InvalidArgument,
          "grid stride must lie in [1, patch]");
}

std::vector<PatchOrigin> grid_origins(std::size_t width, std::size_t height, const GridSpec& grid) {
  validate(grid);
  require(grid.patch <= width && grid.patch <= height, Errc::PatchLargerThanImage,
          "patch " + std::to_string(grid.patch) + " exceeds image " + std::to_string(width) + "x" +
              std::to_string(height));
  const std::size_t nx = (width - grid.patch) / grid.stride + 1;
  const std::size_t ny = (height - grid.patch) / grid.stride + 1;
  std::vector<PatchOrigin> out;
  out.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) out.push_back({i * grid.stride, j * grid.stride});
  return out;
}

std::array<float, 2> patch_center(const PatchOrigin& o, std::size_t patch, std::size_t width,
                                  std::size_t height) {
  const double half = static_cast<double>(patch) / 2.0;
  return {static_cast<float>((static_cast<double>(o.x0) + half) / static_cast<double>(width)),
          static_cast<float>((static_cast<double>(o.y0) + half) / static_cast<double>(height))};
}

void DescriptorSet::add(std::array<float, 2> center, std::span<const float> vec) {
  require(vec.size() == dim_, Errc::DimensionMismatch, "descriptor length differs from set dim");
  require(center[0] >= 0.0f && center[0] < 1.0f && center[1] >= 0.0f && center[1] < 1.0f,
          Errc::CenterOutOfRange, "descriptor center outside [0,1)^2");
  centers_.push_back(center);
  vectors_.append_row(vec);
}

void DescriptorSet::append(const DescriptorSet& other) {
  require(other.dim_ == dim_, Errc::DimensionMismatch, "cannot append descriptor sets of different dim");
  for (std::size_t i = 0; i < other.size(); ++i) add(other.center(i), other.vec(i));
}

void normalize_l2_clipped(std::span<float> v, float clip) {
  auto norm_of = [&] {
    double s = 0.0;
    for (float x : v) s += static_cast<double>(x) * x;
    return std::sqrt(s);
  };
  double n = norm_of();
  if (n < 1e-12) {
    std::fill(v.begin(), v.end(), 0.0f);
    return;
  }
  for (float& x : v) x = std::min(static_cast<float>(x / n), clip);
  n = norm_of();
  if (n < 1e-12) {
    std::fill(v.begin(), v.end(), 0.0f);
    return;
  }
  for (float& x : v) x = static_cast<float>(x / n);
}

}  // namespace dentvis
