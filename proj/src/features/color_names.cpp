#include <limits>

#include "dentvis/core/error.hpp"
#include "dentvis/features/extractors.hpp"

namespace dentvis {
namespace {

// Fixed RGB prototypes for the eleven basic color terms.
constexpr std::array<ColorName, kColorNames> kTable{{
    {"black", {0.0f, 0.0f, 0.0f}},
    {"blue", {0.0f, 0.0f, 1.0f}},
    {"brown", {0.55f, 0.35f, 0.15f}},
    {"grey", {0.5f, 0.5f, 0.5f}},
    {"green", {0.0f, 0.6f, 0.0f}},
    {"orange", {1.0f, 0.55f, 0.0f}},
    {"pink", {1.0f, 0.6f, 0.75f}},
    {"purple", {0.5f, 0.0f, 0.5f}},
    {"red", {1.0f, 0.0f, 0.0f}},
    {"white", {1.0f, 1.0f, 1.0f}},
    {"yellow", {1.0f, 1.0f, 0.0f}},
}};

}  // namespace

std::span<const ColorName> color_name_table() { return kTable; }

std::size_t nearest_color_name(const float* rgb) {
  std::size_t best = 0;
  float best_d = std::numeric_limits<float>::infinity();
  for (std::size_t k = 0; k < kTable.size(); ++k) {
    float d = 0.0f;
    for (int c = 0; c < 3; ++c) {
      const float diff = rgb[c] - kTable[k].rgb[c];
      d += diff * diff;
    }
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

DescriptorSet color_names(const RgbImage& img, std::span<const GridSpec> grids) {
  require(!grids.empty(), Errc::EmptyGridList, "color names need at least one grid");
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  std::vector<std::uint8_t> label(w * h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) label[y * w + x] = static_cast<std::uint8_t>(nearest_color_name(img.at(x, y)));

  DescriptorSet out(kColorNames);
  std::array<float, kColorNames> hist{};
  for (const auto& grid : grids) {
    const auto origins = grid_origins(w, h, grid);
    const float inv_area = 1.0f / static_cast<float>(grid.patch * grid.patch);
    for (const auto& o : origins) {
      std::array<std::size_t, kColorNames> counts{};
      for (std::size_t y = o.y0; y < o.y0 + grid.patch; ++y)
        for (std::size_t x = o.x0; x < o.x0 + grid.patch; ++x) ++counts[label[y * w + x]];
      for (std::size_t k = 0; k < kColorNames; ++k) hist[k] = static_cast<float>(counts[k]) * inv_area;
      out.add(patch_center(o, grid.patch, w, h), hist);
    }
  }
  return out;
}

}  // namespace dentvis
