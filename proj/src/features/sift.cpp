#include <cmath>
#include <numbers>

#include "dentvis/core/error.hpp"
#include "dentvis/features/extractors.hpp"

namespace dentvis {
namespace {

constexpr std::size_t kSpatial = 4;
constexpr std::size_t kOrient = 8;

}  // namespace

DescriptorSet dense_sift(const GrayImage& img, const GridSpec& grid) {
  validate(grid);
  require(grid.patch >= 8 && grid.patch % 4 == 0, Errc::InvalidArgument,
          "SIFT patch must be >= 8 and divisible by 4");
  require(grid.patch <= img.width() && grid.patch <= img.height(), Errc::PatchLargerThanImage,
          "SIFT patch exceeds image");
  const GradientField g = gradients(img);
  const auto origins = grid_origins(img.width(), img.height(), grid);

  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double bin_size = static_cast<double>(grid.patch) / kSpatial;

  // Per-pixel signed orientation split into its two neighbouring bins.
  const std::size_t npx = g.width * g.height;
  std::vector<std::uint8_t> o_lo(npx);
  std::vector<float> w_lo(npx), w_hi(npx);
  for (std::size_t i = 0; i < npx; ++i) {
    double theta = std::atan2(static_cast<double>(g.dy[i]), static_cast<double>(g.dx[i]));
    if (theta < 0.0) theta += two_pi;
    const double t = theta / two_pi * kOrient;
    const double f = std::floor(t);
    const double frac = t - f;
    o_lo[i] = static_cast<std::uint8_t>(static_cast<std::size_t>(f) % kOrient);
    w_lo[i] = static_cast<float>(g.magnitude[i] * (1.0 - frac));
    w_hi[i] = static_cast<float>(g.magnitude[i] * frac);
  }

  DescriptorSet out(kSiftDim);
  std::array<float, kSiftDim> desc{};
  for (const auto& o : origins) {
    desc.fill(0.0f);
    for (std::size_t v = 0; v < grid.patch; ++v) {
      const double by = (static_cast<double>(v) + 0.5) / bin_size - 0.5;
      const double by0 = std::floor(by);
      const double ty = by - by0;
      const long iy0 = static_cast<long>(by0);
      for (std::size_t u = 0; u < grid.patch; ++u) {
        const std::size_t pi = (o.y0 + v) * g.width + (o.x0 + u);
        if (g.magnitude[pi] == 0.0f) continue;
        const double bx = (static_cast<double>(u) + 0.5) / bin_size - 0.5;
        const double bx0 = std::floor(bx);
        const double tx = bx - bx0;
        const long ix0 = static_cast<long>(bx0);
        const std::size_t olo = o_lo[pi];
        const std::size_t ohi = (olo + 1) % kOrient;
        for (int dyb = 0; dyb < 2; ++dyb) {
          const long iy = iy0 + dyb;
          if (iy < 0 || iy >= static_cast<long>(kSpatial)) continue;
          const double wy = dyb == 0 ? 1.0 - ty : ty;
          for (int dxb = 0; dxb < 2; ++dxb) {
            const long ix = ix0 + dxb;
            if (ix < 0 || ix >= static_cast<long>(kSpatial)) continue;
            const double wxy = wy * (dxb == 0 ? 1.0 - tx : tx);
            const std::size_t base = (static_cast<std::size_t>(iy) * kSpatial + static_cast<std::size_t>(ix)) * kOrient;
            desc[base + olo] += static_cast<float>(wxy * w_lo[pi]);
            desc[base + ohi] += static_cast<float>(wxy * w_hi[pi]);
          }
        }
      }
    }
    normalize_l2_clipped(desc, 0.2f);
    out.add(patch_center(o, grid.patch, img.width(), img.height()), desc);
  }
  return out;
}

}  // namespace dentvis
