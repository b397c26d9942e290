#include "dentvis/features/gradients.hpp"

#include <cmath>
#include <numbers>

#include "dentvis/core/error.hpp"

namespace dentvis {

GradientField gradients(const GrayImage& img) {
  require(img.width() >= 3 && img.height() >= 3, Errc::ImageTooSmall, "gradients need at least 3x3");
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  GradientField g;
  g.width = w;
  g.height = h;
  g.dx.resize(w * h);
  g.dy.resize(w * h);
  g.magnitude.resize(w * h);
  g.orientation.resize(w * h);
  constexpr float pi = std::numbers::pi_v<float>;
  for (std::size_t y = 0; y < h; ++y) {
    const std::size_t ym = y == 0 ? 0 : y - 1;
    const std::size_t yp = y + 1 == h ? y : y + 1;
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t xm = x == 0 ? 0 : x - 1;
      const std::size_t xp = x + 1 == w ? x : x + 1;
      const float gx = img.at(xp, y) - img.at(xm, y);
      const float gy = img.at(x, yp) - img.at(x, ym);
      const std::size_t i = y * w + x;
      g.dx[i] = gx;
      g.dy[i] = gy;
      g.magnitude[i] = std::sqrt(gx * gx + gy * gy);
      float theta = std::atan2(gy, gx);
      if (theta < 0.0f) theta += pi;
      if (theta >= pi) theta -= pi;
      g.orientation[i] = theta;
    }
  }
  return g;
}

}  // namespace dentvis
