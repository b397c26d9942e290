#include "dentvis/nn/network.hpp"

#include <cmath>

#include "dentvis/core/rng.hpp"

namespace dentvis::nn {

namespace {

Shape batched(std::size_t n, const Shape& s) {
  Shape out{n};
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

template <typename T>
void relu_forward(const Tensor<T>& in, Tensor<T>& out) {
  out = Tensor<T>(in.shape());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > T{0} ? in[i] : T{0};
}

template <typename T>
void sigmoid_forward(const Tensor<T>& in, Tensor<T>& out) {
  out = Tensor<T>(in.shape());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = T{1} / (T{1} + std::exp(-in[i]));
}

template <typename T>
void softmax_forward(const Tensor<T>& in, Tensor<T>& out) {
  out = Tensor<T>(in.shape());
  const std::size_t n = in.dim(0), k = in.size() / n;
  for (std::size_t s = 0; s < n; ++s) {
    const T* x = in.data() + s * k;
    T* y = out.data() + s * k;
    T mx = x[0];
    for (std::size_t j = 1; j < k; ++j) mx = std::max(mx, x[j]);
    T sum{0};
    for (std::size_t j = 0; j < k; ++j) sum += y[j] = std::exp(x[j] - mx);
    for (std::size_t j = 0; j < k; ++j) y[j] /= sum;
  }
}

template <typename T>
void run_layer(const LayerSpec& spec, const LayerParams<T>& p, const Tensor<T>& in, Tensor<T>& out,
               std::vector<std::uint32_t>& argmax) {
  if (const auto* c = std::get_if<Conv2d>(&spec)) {
    conv2d_forward(*c, p, in, out);
  } else if (std::holds_alternative<ReLU>(spec)) {
    relu_forward(in, out);
  } else if (const auto* m = std::get_if<MaxPool2d>(&spec)) {
    maxpool_forward(*m, in, out, argmax);
  } else if (std::holds_alternative<Flatten>(spec)) {
    out = in;
    out.reshape(Shape{in.dim(0), in.size() / in.dim(0)});
  } else if (std::holds_alternative<Dense>(spec)) {
    dense_forward(p, in, out);
  } else if (std::holds_alternative<Sigmoid>(spec)) {
    sigmoid_forward(in, out);
  } else {
    softmax_forward(in, out);
  }
}

template <typename T>
void check_batch(const Network<T>& net, const Tensor<T>& batch) {
  require(batch.rank() == net.input_shape.size() + 1 && batch.dim(0) > 0 &&
              batched(batch.dim(0), net.input_shape) == batch.shape(),
          Errc::ShapeMismatch,
          "batch shape " + shape_str(batch.shape()) + " does not match (n,)+" + shape_str(net.input_shape));
}

}  // namespace

std::vector<Shape> walk_shapes(const Shape& input, const std::vector<LayerSpec>& layers) {
  std::vector<Shape> shapes{input};
  for (const auto& l : layers) shapes.push_back(layer_output_shape(l, shapes.back()));
  return shapes;
}

template <typename T>
std::size_t Network<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params) n += p.weight.size() + p.bias.size();
  return n;
}

template <typename T>
Network<T> make_network(Shape input_shape, std::vector<LayerSpec> layers) {
  Network<T> net;
  net.shapes = walk_shapes(input_shape, layers);
  net.input_shape = std::move(input_shape);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto [ws, bs] = layer_param_shapes(layers[i], net.shapes[i]);
    LayerParams<T> p;
    if (!ws.empty()) {
      p.weight = Tensor<T>(ws);
      p.bias = Tensor<T>(bs);
    }
    net.params.push_back(std::move(p));
  }
  net.layers = std::move(layers);
  return net;
}

template <typename T>
void init_uniform(Network<T>& net, const InitSpec& spec) {
  require(spec.low < spec.high, Errc::InvalidArgument, "init range requires low < high");
  Rng rng(spec.seed);
  for (auto& p : net.params) {
    for (auto& v : p.weight.values()) v = static_cast<T>(rng.uniform(spec.low, spec.high));
    for (auto& v : p.bias.values()) v = static_cast<T>(rng.uniform(spec.low, spec.high));
  }
}

template <typename T>
Activations<T> forward(const Network<T>& net, const Tensor<T>& batch) {
  check_batch(net, batch);
  Activations<T> acts;
  acts.values.reserve(net.layers.size() + 1);
  acts.values.push_back(batch);
  acts.argmax.resize(net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    Tensor<T> out;
    run_layer(net.layers[i], net.params[i], acts.values[i], out, acts.argmax[i]);
    acts.values.push_back(std::move(out));
  }
  return acts;
}

template <typename T>
Tensor<T> infer(const Network<T>& net, const Tensor<T>& batch) {
  check_batch(net, batch);
  Tensor<T> cur = batch;
  std::vector<std::uint32_t> argmax;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    Tensor<T> out;
    run_layer(net.layers[i], net.params[i], cur, out, argmax);
    cur = std::move(out);
  }
  return cur;
}

template <typename T>
Gradients<T> backward(const Network<T>& net, const Activations<T>& acts, const Tensor<T>& loss_grad) {
  require(acts.values.size() == net.layers.size() + 1, Errc::ShapeMismatch, "activations do not match network");
  require(loss_grad.shape() == acts.output().shape(), Errc::ShapeMismatch,
          "loss gradient shape " + shape_str(loss_grad.shape()) + " differs from output " +
              shape_str(acts.output().shape()));
  Gradients<T> g;
  g.params.resize(net.layers.size());
  Tensor<T> grad = loss_grad;
  for (std::size_t li = net.layers.size(); li-- > 0;) {
    const LayerSpec& spec = net.layers[li];
    const Tensor<T>& in = acts.values[li];
    const Tensor<T>& out = acts.values[li + 1];
    Tensor<T> din;
    if (const auto* c = std::get_if<Conv2d>(&spec)) {
      conv2d_backward(*c, net.params[li], in, grad, g.params[li], din);
    } else if (std::holds_alternative<ReLU>(spec)) {
      din = Tensor<T>(in.shape());
      for (std::size_t i = 0; i < in.size(); ++i) din[i] = in[i] > T{0} ? grad[i] : T{0};
    } else if (std::holds_alternative<MaxPool2d>(spec)) {
      maxpool_backward(in, grad, std::span<const std::uint32_t>(acts.argmax[li]), din);
    } else if (std::holds_alternative<Flatten>(spec)) {
      din = std::move(grad);
      din.reshape(in.shape());
    } else if (std::holds_alternative<Dense>(spec)) {
      dense_backward(net.params[li], in, grad, g.params[li], din);
    } else if (std::holds_alternative<Sigmoid>(spec)) {
      din = Tensor<T>(in.shape());
      for (std::size_t i = 0; i < in.size(); ++i) din[i] = grad[i] * out[i] * (T{1} - out[i]);
    } else {
      // softmax Jacobian-vector product: y * (g - <g, y>)
      din = Tensor<T>(in.shape());
      const std::size_t n = in.dim(0), k = in.size() / n;
      for (std::size_t s = 0; s < n; ++s) {
        T dot{0};
        for (std::size_t j = 0; j < k; ++j) dot += grad[s * k + j] * out[s * k + j];
        for (std::size_t j = 0; j < k; ++j) din[s * k + j] = out[s * k + j] * (grad[s * k + j] - dot);
      }
    }
    grad = std::move(din);
  }
  g.input = std::move(grad);
  return g;
}

template <typename T>
std::vector<std::uint32_t> argmax_rows(const Tensor<T>& out) {
  require(out.rank() == 2, Errc::ShapeMismatch, "argmax_rows expects (n, k)");
  const std::size_t n = out.dim(0), k = out.dim(1);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < k; ++j)
      if (out[s * k + j] > out[s * k + best]) best = j;
    labels[s] = static_cast<std::uint32_t>(best);
  }
  return labels;
}

#define DENTVIS_INSTANTIATE(T)                                                              \
  template struct Network<T>;                                                               \
  template Network<T> make_network<T>(Shape, std::vector<LayerSpec>);                       \
  template void init_uniform<T>(Network<T>&, const InitSpec&);                              \
  template Activations<T> forward<T>(const Network<T>&, const Tensor<T>&);                  \
  template Tensor<T> infer<T>(const Network<T>&, const Tensor<T>&);                         \
  template Gradients<T> backward<T>(const Network<T>&, const Activations<T>&, const Tensor<T>&); \
  template std::vector<std::uint32_t> argmax_rows<T>(const Tensor<T>&);

DENTVIS_INSTANTIATE(float)
DENTVIS_INSTANTIATE(double)
#undef DENTVIS_INSTANTIATE

}  // namespace dentvis::nn
