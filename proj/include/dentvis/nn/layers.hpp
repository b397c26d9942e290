#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dentvis/nn/tensor.hpp"

namespace dentvis::nn {

enum class Padding { Same, Valid };

/// Cross-correlation; weight layout (out_ch, in_ch, kh, kw), bias (out_ch).
struct Conv2d {
  std::size_t out_ch = 1;
  std::size_t kh = 3;
  std::size_t kw = 3;
  std::size_t stride = 1;
  Padding pad = Padding::Same;
};
struct ReLU {};
/// Non-overlapping size x size windows, floor mode.
struct MaxPool2d {
  std::size_t size = 2;
};
struct Flatten {};
/// Weight layout (in, out), bias (out).
struct Dense {
  std::size_t out = 1;
};
struct Sigmoid {};
/// Over the feature axis of a flat per-sample input.
struct Softmax {};

using LayerSpec = std::variant<Conv2d, ReLU, MaxPool2d, Flatten, Dense, Sigmoid, Softmax>;

std::string layer_name(const LayerSpec& spec);

/// Per-sample output shape (no batch axis); throws ShapeMismatch when the
/// layer cannot accept `in`.
Shape layer_output_shape(const LayerSpec& spec, const Shape& in);

/// Weight and bias shapes for a layer; empty shapes for parameter-free layers.
std::pair<Shape, Shape> layer_param_shapes(const LayerSpec& spec, const Shape& in);

template <typename T>
struct LayerParams {
  Tensor<T> weight;
  Tensor<T> bias;

  bool empty() const noexcept { return weight.size() == 0 && bias.size() == 0; }
};

// Batched layer kernels. Tensors carry a leading batch axis.

template <typename T>
void conv2d_forward(const Conv2d& spec, const LayerParams<T>& p, const Tensor<T>& in, Tensor<T>& out);
template <typename T>
void conv2d_backward(const Conv2d& spec, const LayerParams<T>& p, const Tensor<T>& in, const Tensor<T>& dout,
                     LayerParams<T>& grad, Tensor<T>& din);

template <typename T>
void dense_forward(const LayerParams<T>& p, const Tensor<T>& in, Tensor<T>& out);
template <typename T>
void dense_backward(const LayerParams<T>& p, const Tensor<T>& in, const Tensor<T>& dout, LayerParams<T>& grad,
                    Tensor<T>& din);

template <typename T>
void maxpool_forward(const MaxPool2d& spec, const Tensor<T>& in, Tensor<T>& out, std::vector<std::uint32_t>& argmax);
template <typename T>
void maxpool_backward(const Tensor<T>& in, const Tensor<T>& dout, std::span<const std::uint32_t> argmax,
                      Tensor<T>& din);

}  // namespace dentvis::nn
