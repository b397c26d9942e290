#include "dentvis/segment/segment.hpp"

#include <algorithm>
#include <cmath>

#include "dentvis/core/error.hpp"
#include "dentvis/segment/disjoint_set.hpp"

namespace dentvis {

namespace {

struct Edge {
  double w;
  std::uint32_t a;
  std::uint32_t b;
};

}  // namespace

void validate(const SegmentationConfig& cfg) {
  require(cfg.k > 0.0 && std::isfinite(cfg.k), Errc::InvalidArgument, "segmentation k must be positive");
  require(cfg.min_size >= 1, Errc::InvalidArgument, "min_size must be >= 1");
  require(cfg.sigma >= 0.0 && std::isfinite(cfg.sigma), Errc::InvalidArgument, "sigma must be >= 0");
  require(cfg.connectivity == 4 || cfg.connectivity == 8, Errc::InvalidArgument, "connectivity must be 4 or 8");
}

std::vector<double> gaussian_smooth(const GrayImage& img, double sigma) {
  const std::size_t w = img.width(), h = img.height();
  std::vector<double> src(img.pixels().begin(), img.pixels().end());
  if (sigma <= 0.0) return src;
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) sum += kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  for (auto& v : kernel) v /= sum;

  auto clampi = [](long v, long hi) { return static_cast<std::size_t>(std::clamp(v, 0L, hi)); };
  std::vector<double> tmp(w * h), out(w * h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * src[y * w + clampi(static_cast<long>(x) + i, static_cast<long>(w) - 1)];
      tmp[y * w + x] = acc;
    }
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * tmp[clampi(static_cast<long>(y) + i, static_cast<long>(h) - 1) * w + x];
      out[y * w + x] = acc;
    }
  return out;
}

LabelMap fh_segment(const GrayImage& img, const SegmentationConfig& cfg) {
  validate(cfg);
  const std::size_t w = img.width(), h = img.height();
  require(w >= 2 && h >= 2, Errc::ImageTooSmall, "segmentation needs at least a 2x2 image");
  std::vector<double> v = gaussian_smooth(img, cfg.sigma);
  for (auto& x : v) x *= 255.0;

  std::vector<Edge> edges;
  edges.reserve(w * h * (cfg.connectivity == 8 ? 4 : 2));
  auto add = [&](std::size_t p, std::size_t q) {
    edges.push_back({std::abs(v[p] - v[q]), static_cast<std::uint32_t>(std::min(p, q)),
                     static_cast<std::uint32_t>(std::max(p, q))});
  };
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t p = y * w + x;
      if (x + 1 < w) add(p, p + 1);
      if (y + 1 < h) add(p, p + w);
      if (cfg.connectivity == 8 && y + 1 < h) {
        if (x + 1 < w) add(p, p + w + 1);
        if (x > 0) add(p, p + w - 1);
      }
    }
  std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
    if (l.w != r.w) return l.w < r.w;
    if (l.a != r.a) return l.a < r.a;
    return l.b < r.b;
  });

  DisjointSet ds(w * h);
  for (const Edge& e : edges) {
    const std::size_t a = ds.find(e.a), b = ds.find(e.b);
    if (a == b) continue;
    const double ta = ds.internal(a) + cfg.k / static_cast<double>(ds.size(a));
    const double tb = ds.internal(b) + cfg.k / static_cast<double>(ds.size(b));
    if (e.w <= std::min(ta, tb)) ds.join(a, b, e.w);
  }
  // Absorb undersized components along the cheapest remaining edges.
  for (const Edge& e : edges) {
    const std::size_t a = ds.find(e.a), b = ds.find(e.b);
    if (a == b) continue;
    if (ds.size(a) < cfg.min_size || ds.size(b) < cfg.min_size)
      ds.join(a, b, std::max({e.w, ds.internal(a), ds.internal(b)}));
  }

  LabelMap map{w, h, std::vector<std::uint32_t>(w * h), 0};
  std::vector<std::uint32_t> id(w * h, UINT32_MAX);
  for (std::size_t p = 0; p < w * h; ++p) {
    const std::size_t r = ds.find(p);
    if (id[r] == UINT32_MAX) id[r] = static_cast<std::uint32_t>(map.segments++);
    map.labels[p] = id[r];
  }
  return map;
}

std::vector<CropRect> roi_rects(const LabelMap& map, std::size_t min_area) {
  struct Box {
    std::size_t x0 = SIZE_MAX, y0 = SIZE_MAX, x1 = 0, y1 = 0, pixels = 0;
  };
  std::vector<Box> boxes(map.segments);
  for (std::size_t y = 0; y < map.height; ++y)
    for (std::size_t x = 0; x < map.width; ++x) {
      Box& b = boxes[map.at(x, y)];
      b.x0 = std::min(b.x0, x);
      b.y0 = std::min(b.y0, y);
      b.x1 = std::max(b.x1, x);
      b.y1 = std::max(b.y1, y);
      ++b.pixels;
    }
  std::vector<CropRect> rects;
  for (const Box& b : boxes) {
    if (b.pixels == 0 || b.pixels < min_area) continue;
    rects.push_back(CropRect{b.x0, b.y0, b.x1 - b.x0 + 1, b.y1 - b.y0 + 1});
  }
  std::stable_sort(rects.begin(), rects.end(), [](const CropRect& l, const CropRect& r) { return l.area() > r.area(); });
  return rects;
}

}  // namespace dentvis
