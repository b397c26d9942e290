#pragma once

#include <cstdint>
#include <vector>

#include "dentvis/nn/layers.hpp"

namespace dentvis::nn {

template <typename T>
struct Network {
  Shape input_shape;                    // per sample, e.g. (channels, height, width)
  std::vector<LayerSpec> layers;
  std::vector<LayerParams<T>> params;   // one slot per layer; empty for parameter-free layers
  std::vector<Shape> shapes;            // shapes[i] feeds layer i; shapes.back() is the output

  const Shape& output_shape() const { return shapes.back(); }
  std::size_t parameter_count() const;
};

/// Per-sample shapes through `layers`; throws ShapeMismatch on the first incompatible layer.
std::vector<Shape> walk_shapes(const Shape& input, const std::vector<LayerSpec>& layers);

/// Validates the stack and allocates zero parameters.
template <typename T>
Network<T> make_network(Shape input_shape, std::vector<LayerSpec> layers);

struct InitSpec {
  double low = -0.05;
  double high = 0.05;
  std::uint64_t seed = 0;
};

/// Every weight and bias drawn uniformly from [low, high], layer by layer.
template <typename T>
void init_uniform(Network<T>& net, const InitSpec& spec);

/// Converts parameters between precisions (f32 production, f64 verification).
template <typename To, typename From>
Network<To> cast_network(const Network<From>& net) {
  Network<To> out;
  out.input_shape = net.input_shape;
  out.layers = net.layers;
  out.shapes = net.shapes;
  for (const auto& p : net.params) {
    LayerParams<To> q;
    q.weight = Tensor<To>(p.weight.shape(), std::vector<To>(p.weight.values().begin(), p.weight.values().end()));
    q.bias = Tensor<To>(p.bias.shape(), std::vector<To>(p.bias.values().begin(), p.bias.values().end()));
    out.params.push_back(std::move(q));
  }
  return out;
}

template <typename T>
struct Activations {
  std::vector<Tensor<T>> values;                  // values[0] is the batch, values[i+1] the output of layer i
  std::vector<std::vector<std::uint32_t>> argmax; // per layer; filled for max-pooling layers only

  const Tensor<T>& output() const { return values.back(); }
};

template <typename T>
struct Gradients {
  std::vector<LayerParams<T>> params;  // aligned with Network::params
  Tensor<T> input;
};

/// batch shape must be (n,) + input_shape.
template <typename T>
Activations<T> forward(const Network<T>& net, const Tensor<T>& batch);

/// Output only; intermediate activations are released as the pass proceeds.
template <typename T>
Tensor<T> infer(const Network<T>& net, const Tensor<T>& batch);

template <typename T>
Gradients<T> backward(const Network<T>& net, const Activations<T>& acts, const Tensor<T>& loss_grad);

/// Row-wise argmax of a (n, k) output; ties go to the lower index.
template <typename T>
std::vector<std::uint32_t> argmax_rows(const Tensor<T>& out);

}  // namespace dentvis::nn
