#include "dentvis/app/viz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dentvis/core/rng.hpp"
#include "dentvis/features/extractors.hpp"

namespace dentvis::app {

GrayImage render_hog_glyphs(const GrayImage& img, std::size_t cell, std::size_t scale) {
  require(cell >= 2 && scale >= 1, Errc::InvalidArgument, "glyph cell >= 2 and scale >= 1");
  const HogCells cells = hog_cells(img, cell);
  const std::size_t tile = 8 * scale;
  GrayImage out(cells.cells_x * tile, cells.cells_y * tile, 0.0f);
  const float peak = cells.hist.empty() ? 0.0f : *std::max_element(cells.hist.begin(), cells.hist.end());
  if (peak <= 0.0f) return out;

  const double c = (static_cast<double>(tile) - 1.0) / 2.0;
  const double half_len = static_cast<double>(tile) / 2.0;
  for (std::size_t cy = 0; cy < cells.cells_y; ++cy) {
    for (std::size_t cx = 0; cx < cells.cells_x; ++cx) {
      const float* h = &cells.hist[(cy * cells.cells_x + cx) * kHogBins];
      for (std::size_t b = 0; b < kHogBins; ++b) {
        const float v = h[b] / peak;
        if (v <= 0.0f) continue;
        const double theta = static_cast<double>(b) * std::numbers::pi / kHogBins;
        const double ux = std::cos(theta), uy = std::sin(theta);
        for (std::size_t y = 0; y < tile; ++y) {
          for (std::size_t x = 0; x < tile; ++x) {
            const double dx = static_cast<double>(x) - c, dy = static_cast<double>(y) - c;
            const double along = dx * ux + dy * uy;
            const double across = std::abs(-dx * uy + dy * ux);
            if (across <= 0.5 && std::abs(along) <= half_len) {
              float& px = out.at(cx * tile + x, cy * tile + y);
              px = std::max(px, v);
            }
          }
        }
      }
    }
  }
  return out;
}

GrayImage normalize_tile(std::size_t width, std::size_t height, std::span<const float> values) {
  require(values.size() == width * height, Errc::DimensionMismatch, "tile size mismatch");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  GrayImage t(width, height, 0.5f);
  if (values.empty() || !(*hi > *lo)) return t;
  const float range = *hi - *lo;
  for (std::size_t i = 0; i < values.size(); ++i) t.pixels()[i] = std::clamp((values[i] - *lo) / range, 0.0f, 1.0f);
  return t;
}

GrayImage tile_grid(const std::vector<GrayImage>& tiles, std::size_t zoom) {
  require(!tiles.empty(), Errc::InvalidArgument, "no tiles to lay out");
  require(zoom >= 1, Errc::InvalidArgument, "zoom must be >= 1");
  const std::size_t n = tiles.size();
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-9));
  const std::size_t rows = (n + cols - 1) / cols;
  const std::size_t tw = tiles[0].width() * zoom, th = tiles[0].height() * zoom;
  GrayImage out(cols * tw + (cols - 1), rows * th + (rows - 1), 0.0f);
  for (std::size_t x = tw; x < out.width(); x += tw + 1)
    for (std::size_t y = 0; y < out.height(); ++y) out.at(x, y) = 1.0f;
  for (std::size_t y = th; y < out.height(); y += th + 1)
    for (std::size_t x = 0; x < out.width(); ++x) out.at(x, y) = 1.0f;
  for (std::size_t i = 0; i < n; ++i) {
    const GrayImage& t = tiles[i];
    require(t.width() * zoom == tw && t.height() * zoom == th, Errc::DimensionMismatch, "tiles differ in size");
    const std::size_t ox = (i % cols) * (tw + 1), oy = (i / cols) * (th + 1);
    for (std::size_t y = 0; y < th; ++y)
      for (std::size_t x = 0; x < tw; ++x) out.at(ox + x, oy + y) = t.at(x / zoom, y / zoom);
  }
  return out;
}

std::size_t conv_layer_index(const nn::Network<float>& net, std::size_t nth) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < net.layers.size(); ++i)
    if (std::holds_alternative<nn::Conv2d>(net.layers[i]) && ++seen == nth) return i;
  fail(Errc::LayerNotConvolutional, "network has no convolution layer number " + std::to_string(nth));
}

std::vector<GrayImage> filter_tiles(const nn::Network<float>& net, std::size_t layer_index) {
  require(layer_index < net.layers.size() && std::holds_alternative<nn::Conv2d>(net.layers[layer_index]),
          Errc::LayerNotConvolutional, "layer " + std::to_string(layer_index) + " is not a convolution");
  const auto& w = net.params[layer_index].weight;  // (oc, ic, kh, kw)
  const std::size_t oc = w.dim(0), ic = w.dim(1), kh = w.dim(2), kw = w.dim(3);
  std::vector<GrayImage> tiles;
  for (std::size_t o = 0; o < oc; ++o) {
    std::vector<float> avg(kh * kw, 0.0f);
    for (std::size_t c = 0; c < ic; ++c)
      for (std::size_t k = 0; k < kh * kw; ++k) avg[k] += w[(o * ic + c) * kh * kw + k] / static_cast<float>(ic);
    tiles.push_back(normalize_tile(kw, kh, avg));
  }
  return tiles;
}

std::vector<GrayImage> activation_tiles(const nn::Network<float>& net, std::size_t layer_index, const GrayImage& img) {
  require(layer_index < net.layers.size() && std::holds_alternative<nn::Conv2d>(net.layers[layer_index]),
          Errc::LayerNotConvolutional, "layer " + std::to_string(layer_index) + " is not a convolution");
  nn::Tensor<float> batch(nn::Shape{1, 1, img.height(), img.width()},
                          std::vector<float>(img.pixels().begin(), img.pixels().end()));
  const auto acts = nn::forward(net, batch);
  const auto& out = acts.values[layer_index + 1];  // (1, oc, h, w)
  const std::size_t oc = out.dim(1), h = out.dim(2), w = out.dim(3);
  std::vector<GrayImage> tiles;
  for (std::size_t o = 0; o < oc; ++o)
    tiles.push_back(normalize_tile(w, h, std::span<const float>(out.data() + o * h * w, h * w)));
  return tiles;
}

RgbImage colorize_labels(const LabelMap& map) {
  RgbImage out(map.width, map.height);
  std::vector<std::array<float, 3>> palette(map.segments);
  for (std::size_t s = 0; s < map.segments; ++s) {
    const std::uint64_t h = Rng::mix(0xC0105u, s);
    for (int c = 0; c < 3; ++c) palette[s][c] = static_cast<float>((h >> (8 * c)) & 0xFF) / 255.0f;
  }
  for (std::size_t y = 0; y < map.height; ++y)
    for (std::size_t x = 0; x < map.width; ++x) {
      const auto& p = palette[map.at(x, y)];
      std::copy(p.begin(), p.end(), out.at(x, y));
    }
  return out;
}

}  // namespace dentvis::app
