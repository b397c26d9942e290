#include "dentvis/imageio/image.hpp"

#include <algorithm>

#include "dentvis/core/error.hpp"

namespace dentvis {
namespace {

void check_samples(std::span<const float> data) {
  const bool ok = std::all_of(data.begin(), data.end(), [](float v) { return v >= 0.0f && v <= 1.0f; });
  require(ok, Errc::InvalidArgument, "image samples must lie in [0,1]");
}

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, float fill)
    : width_(width), height_(height), data_(width * height, fill) {
  require(width > 0 && height > 0, Errc::ZeroDimension, "gray image dimensions must be positive");
  require(fill >= 0.0f && fill <= 1.0f, Errc::InvalidArgument, "fill value must lie in [0,1]");
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  require(width > 0 && height > 0, Errc::ZeroDimension, "gray image dimensions must be positive");
  require(data_.size() == width * height, Errc::DimensionMismatch, "gray image data length");
  check_samples(data_);
}

RgbImage::RgbImage(std::size_t width, std::size_t height)
    : width_(width), height_(height), data_(3 * width * height, 0.0f) {
  require(width > 0 && height > 0, Errc::ZeroDimension, "rgb image dimensions must be positive");
}

RgbImage::RgbImage(std::size_t width, std::size_t height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  require(width > 0 && height > 0, Errc::ZeroDimension, "rgb image dimensions must be positive");
  require(data_.size() == 3 * width * height, Errc::DimensionMismatch, "rgb image data length");
  check_samples(data_);
}

}  // namespace dentvis
