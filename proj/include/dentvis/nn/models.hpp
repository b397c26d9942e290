#pragma once

#include <vector>

#include "dentvis/nn/network.hpp"

namespace dentvis::nn {

enum class Head { Sigmoid, Softmax };

/// conv(32,3x3,same) relu conv(32,3x3,same) relu maxpool(2) flatten dense(128) relu dense(n) head.
std::vector<LayerSpec> plan_4layer(std::size_t n_classes, Head head);

/// Thirteen 3x3 'same' convolutions in five pooled blocks (64,64 / 128,128 /
/// 256x3 / 512x3 / 512x3) then dense 4096, 4096, n. Channel and hidden widths
/// are multiplied by width_scale and rounded, with a floor of 1.
std::vector<LayerSpec> plan_16layer(std::size_t n_classes, double width_scale = 1.0, Head head = Head::Softmax);

/// input_shape is (channels, height, width); both spatial dims >= 8.
template <typename T>
Network<T> build_4layer(const Shape& input_shape, std::size_t n_classes, Head head, const InitSpec& init = {});

/// Spatial dims must be divisible by 32.
template <typename T>
Network<T> build_16layer(const Shape& input_shape, std::size_t n_classes, double width_scale = 1.0,
                         const InitSpec& init = {}, Head head = Head::Softmax);

}  // namespace dentvis::nn
