#include "dentvis/imageio/transform.hpp"

#include <algorithm>
#include <cmath>

#include "dentvis/core/error.hpp"
#include "dentvis/core/rng.hpp"

namespace dentvis {
namespace {

float clamp01(float v) { return std::clamp(v, 0.0f, 1.0f); }

}  // namespace

GrayImage to_gray(const RgbImage& img) {
  GrayImage out(img.width(), img.height());
  auto dst = out.pixels();
  const auto src = img.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const float y = 0.299f * src[3 * i] + 0.587f * src[3 * i + 1] + 0.114f * src[3 * i + 2];
    dst[i] = clamp01(y);
  }
  return out;
}

RgbImage to_rgb(const GrayImage& img) {
  RgbImage out(img.width(), img.height());
  auto dst = out.samples();
  const auto src = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
  return out;
}

GrayImage resize_bilinear(const GrayImage& img, std::size_t width, std::size_t height) {
  require(width >= 1 && height >= 1, Errc::ZeroDimension, "resize target must be at least 1x1");
  if (width == img.width() && height == img.height()) return img;

  const double sx = static_cast<double>(img.width()) / static_cast<double>(width);
  const double sy = static_cast<double>(img.height()) / static_cast<double>(height);
  const double max_x = static_cast<double>(img.width() - 1);
  const double max_y = static_cast<double>(img.height() - 1);

  GrayImage out(width, height);
  for (std::size_t y = 0; y < height; ++y) {
    const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
    const double ty = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < width; ++x) {
      const double fx = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
      const double tx = fx - static_cast<double>(x0);
      const double top = img.at(x0, y0) * (1.0 - tx) + img.at(x1, y0) * tx;
      const double bot = img.at(x0, y1) * (1.0 - tx) + img.at(x1, y1) * tx;
      out.at(x, y) = clamp01(static_cast<float>(top * (1.0 - ty) + bot * ty));
    }
  }
  return out;
}

GrayImage crop(const GrayImage& img, const CropRect& r) {
  require(r.w >= 1 && r.h >= 1, Errc::OutOfBounds, "crop rectangle must be at least 1x1");
  require(r.x0 + r.w <= img.width() && r.y0 + r.h <= img.height(), Errc::OutOfBounds,
          "crop rectangle exceeds image bounds");
  GrayImage out(r.w, r.h);
  for (std::size_t y = 0; y < r.h; ++y) {
    const auto src = img.row(r.y0 + y).subspan(r.x0, r.w);
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

float sample_zero_fill(const GrayImage& img, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double tx = x - fx;
  const double ty = y - fy;
  const auto w = static_cast<long long>(img.width());
  const auto h = static_cast<long long>(img.height());
  const auto x0 = static_cast<long long>(fx);
  const auto y0 = static_cast<long long>(fy);
  auto tap = [&](long long xi, long long yi) -> double {
    if (xi < 0 || yi < 0 || xi >= w || yi >= h) return 0.0;
    return img.at(static_cast<std::size_t>(xi), static_cast<std::size_t>(yi));
  };
  double v = 0.0;
  // zero-weight taps are skipped so integer coordinates read exactly one sample
  if (tx < 1.0 && ty < 1.0) v += (1.0 - tx) * (1.0 - ty) * tap(x0, y0);
  if (tx > 0.0) v += tx * (1.0 - ty) * tap(x0 + 1, y0);
  if (ty > 0.0) v += (1.0 - tx) * ty * tap(x0, y0 + 1);
  if (tx > 0.0 && ty > 0.0) v += tx * ty * tap(x0 + 1, y0 + 1);
  return clamp01(static_cast<float>(v));
}

GrayImage zoom(const GrayImage& img, double factor) {
  require(factor > 0.0 && std::isfinite(factor), Errc::InvalidArgument, "zoom factor must be positive");
  const double cx = (static_cast<double>(img.width()) - 1.0) / 2.0;
  const double cy = (static_cast<double>(img.height()) - 1.0) / 2.0;
  GrayImage out(img.width(), img.height());
  for (std::size_t y = 0; y < img.height(); ++y)
    for (std::size_t x = 0; x < img.width(); ++x) {
      const double sx = cx + (static_cast<double>(x) - cx) / factor;
      const double sy = cy + (static_cast<double>(y) - cy) / factor;
      out.at(x, y) = sample_zero_fill(img, sx, sy);
    }
  return out;
}

GrayImage shear(const GrayImage& img, double s) {
  require(std::isfinite(s), Errc::InvalidArgument, "shear factor must be finite");
  const double cy = (static_cast<double>(img.height()) - 1.0) / 2.0;
  GrayImage out(img.width(), img.height());
  for (std::size_t y = 0; y < img.height(); ++y) {
    const double shift = s * (static_cast<double>(y) - cy);
    for (std::size_t x = 0; x < img.width(); ++x)
      out.at(x, y) = sample_zero_fill(img, static_cast<double>(x) - shift, static_cast<double>(y));
  }
  return out;
}

GrayImage augment(const GrayImage& img, const AugmentConfig& cfg) {
  switch (cfg.mode) {
    case AugmentMode::None:
      return img;
    case AugmentMode::Shear: {
      require(std::isfinite(cfg.shear_range), Errc::InvalidArgument, "shear_range must be finite");
      Rng rng(cfg.seed);
      const double r = std::abs(cfg.shear_range);
      return shear(img, rng.uniform(-r, r));
    }
    case AugmentMode::Zoom: {
      require(cfg.zoom_lo > 0.0 && cfg.zoom_hi >= cfg.zoom_lo, Errc::InvalidArgument,
              "zoom range must be positive and ordered");
      Rng rng(cfg.seed);
      return zoom(img, rng.uniform(cfg.zoom_lo, cfg.zoom_hi));
    }
  }
  return img;
}

}  // namespace dentvis
