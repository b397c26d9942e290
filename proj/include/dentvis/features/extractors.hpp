#pragma once

#include <array>
#include <span>
#include <string_view>

#include "dentvis/features/descriptor_set.hpp"
#include "dentvis/features/gradients.hpp"
#include "dentvis/imageio/image.hpp"

namespace dentvis {

inline constexpr std::size_t kSiftDim = 128;
inline constexpr std::size_t kHogBins = 9;
inline constexpr std::size_t kColorNames = 11;

/// Dense SIFT: 4x4 spatial bins x 8 signed orientation bins per patch.
/// Requires patch >= 8 and divisible by 4.
DescriptorSet dense_sift(const GrayImage& img, const GridSpec& grid);

/// Dense HOG blocks of block_cells x block_cells cells, 9 unsigned bins per
/// cell, L2-Hys normalized. grid.patch must equal block_cells * cell.
DescriptorSet hog(const GrayImage& img, std::size_t cell, std::size_t block_cells, const GridSpec& grid);

/// Unnormalized 9-bin histograms for the non-overlapping cell grid that tiles
/// the image from the origin; row-major cells. Used for glyph rendering.
struct HogCells {
  std::size_t cells_x = 0;
  std::size_t cells_y = 0;
  std::vector<float> hist;  // cells_y * cells_x * 9
};
HogCells hog_cells(const GrayImage& img, std::size_t cell);

/// Color-name prototypes, in bin order.
struct ColorName {
  std::string_view name;
  std::array<float, 3> rgb;
};
std::span<const ColorName> color_name_table();

/// Index of the nearest color-name prototype (Euclidean in RGB, ties to the
/// lower index).
std::size_t nearest_color_name(const float* rgb);

/// 11-bin L1-normalized color-name histograms over every grid.
DescriptorSet color_names(const RgbImage& img, std::span<const GridSpec> grids);

}  // namespace dentvis
