#pragma once

#include <vector>

#include "dentvis/imageio/image.hpp"
#include "dentvis/nn/network.hpp"
#include "dentvis/segment/segment.hpp"

namespace dentvis::app {

/// One tile per cell of the non-overlapping HOG grid, 8 * scale pixels wide.
/// Each bin draws a line through the tile center along its gradient
/// orientation with intensity proportional to the bin weight relative to the
/// largest weight in the image; a flat image renders black.
GrayImage render_hog_glyphs(const GrayImage& img, std::size_t cell, std::size_t scale);

/// Min-max normalized copy; a constant tile becomes 0.5 everywhere.
GrayImage normalize_tile(std::size_t width, std::size_t height, std::span<const float> values);

/// ceil(sqrt(n)) columns, rows as needed, 1-pixel white separators between
/// tiles, unused cells black. Tiles are magnified by `zoom` (nearest neighbor).
GrayImage tile_grid(const std::vector<GrayImage>& tiles, std::size_t zoom);

/// Index into Network::layers of the n-th convolution (1-based); throws
/// LayerNotConvolutional when the network has fewer.
std::size_t conv_layer_index(const nn::Network<float>& net, std::size_t nth);

/// Filter weights averaged over input channels, one normalized tile per filter.
std::vector<GrayImage> filter_tiles(const nn::Network<float>& net, std::size_t layer_index);

/// Convolution outputs for a single image, one normalized tile per channel.
std::vector<GrayImage> activation_tiles(const nn::Network<float>& net, std::size_t layer_index, const GrayImage& img);

/// Deterministic false-color rendering; colors derive from a hash of the id.
RgbImage colorize_labels(const LabelMap& map);

}  // namespace dentvis::app
