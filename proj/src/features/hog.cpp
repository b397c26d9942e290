#include <cmath>
#include <numbers>

#include "dentvis/core/error.hpp"
#include "dentvis/features/extractors.hpp"

namespace dentvis {
namespace {

// Integral images of the orientation votes, one plane per bin, so any cell
// histogram is four lookups per bin.
class IntegralHistogram {
 public:
  explicit IntegralHistogram(const GradientField& g) : w_(g.width + 1), h_(g.height + 1) {
    planes_.assign(kHogBins * w_ * h_, 0.0);
    constexpr double bin_width = std::numbers::pi / kHogBins;
    std::vector<double> votes(kHogBins * g.width * g.height, 0.0);
    for (std::size_t i = 0; i < g.width * g.height; ++i) {
      if (g.magnitude[i] == 0.0f) continue;
      // bin b is centred on b * 20 degrees
      const double t = g.orientation[i] / bin_width;
      const double f = std::floor(t);
      const double frac = t - f;
      const std::size_t lo = static_cast<std::size_t>(f) % kHogBins;
      const std::size_t hi = (lo + 1) % kHogBins;
      votes[lo * g.width * g.height + i] += g.magnitude[i] * (1.0 - frac);
      votes[hi * g.width * g.height + i] += g.magnitude[i] * frac;
    }
    for (std::size_t b = 0; b < kHogBins; ++b) {
      const double* src = votes.data() + b * g.width * g.height;
      double* plane = planes_.data() + b * w_ * h_;
      for (std::size_t y = 0; y < g.height; ++y) {
        double run = 0.0;
        for (std::size_t x = 0; x < g.width; ++x) {
          run += src[y * g.width + x];
          plane[(y + 1) * w_ + (x + 1)] = plane[y * w_ + (x + 1)] + run;
        }
      }
    }
  }

  void cell(std::size_t x0, std::size_t y0, std::size_t size, float* hist) const {
    const std::size_t x1 = x0 + size;
    const std::size_t y1 = y0 + size;
    for (std::size_t b = 0; b < kHogBins; ++b) {
      const double* p = planes_.data() + b * w_ * h_;
      const double s = p[y1 * w_ + x1] - p[y0 * w_ + x1] - p[y1 * w_ + x0] + p[y0 * w_ + x0];
      hist[b] = static_cast<float>(std::max(0.0, s));
    }
  }

 private:
  std::size_t w_;
  std::size_t h_;
  std::vector<double> planes_;
};

}  // namespace

DescriptorSet hog(const GrayImage& img, std::size_t cell, std::size_t block_cells, const GridSpec& grid) {
  require(block_cells == 2 || block_cells == 3, Errc::InvalidArgument, "HOG block must be 2x2 or 3x3 cells");
  require(cell >= 2, Errc::InvalidArgument, "HOG cell must be at least 2 pixels");
  require(grid.patch == cell * block_cells, Errc::InvalidArgument, "HOG grid patch must equal block_cells * cell");
  require(grid.patch <= img.width() && grid.patch <= img.height(), Errc::PatchLargerThanImage,
          "HOG block exceeds image");
  const GradientField g = gradients(img);
  const IntegralHistogram integral(g);
  const auto origins = grid_origins(img.width(), img.height(), grid);

  const std::size_t dim = kHogBins * block_cells * block_cells;
  DescriptorSet out(dim);
  std::vector<float> desc(dim);
  for (const auto& o : origins) {
    for (std::size_t cy = 0; cy < block_cells; ++cy)
      for (std::size_t cx = 0; cx < block_cells; ++cx)
        integral.cell(o.x0 + cx * cell, o.y0 + cy * cell, cell, desc.data() + (cy * block_cells + cx) * kHogBins);
    normalize_l2_clipped(desc, 0.2f);
    out.add(patch_center(o, grid.patch, img.width(), img.height()), desc);
  }
  return out;
}

HogCells hog_cells(const GrayImage& img, std::size_t cell) {
  require(cell >= 2, Errc::InvalidArgument, "HOG cell must be at least 2 pixels");
  require(cell <= img.width() && cell <= img.height(), Errc::PatchLargerThanImage, "HOG cell exceeds image");
  const GradientField g = gradients(img);
  const IntegralHistogram integral(g);
  HogCells out;
  out.cells_x = img.width() / cell;
  out.cells_y = img.height() / cell;
  out.hist.assign(out.cells_x * out.cells_y * kHogBins, 0.0f);
  for (std::size_t cy = 0; cy < out.cells_y; ++cy)
    for (std::size_t cx = 0; cx < out.cells_x; ++cx)
      integral.cell(cx * cell, cy * cell, cell, out.hist.data() + (cy * out.cells_x + cx) * kHogBins);
  return out;
}

}  // namespace dentvis
