#include "dentvis/nn/models.hpp"

#include <algorithm>
#include <cmath>

namespace dentvis::nn {

namespace {

LayerSpec head_layer(Head h) { return h == Head::Sigmoid ? LayerSpec{Sigmoid{}} : LayerSpec{Softmax{}}; }

void check_classes(std::size_t n_classes) {
  require(n_classes >= 1, Errc::InvalidArgument, "network needs at least one output class");
}

void check_input(const Shape& s) {
  require(s.size() == 3 && s[0] >= 1, Errc::ShapeMismatch, "input shape must be (channels, height, width)");
}

std::size_t scaled(std::size_t width, double scale) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(width) * scale)));
}

}  // namespace

std::vector<LayerSpec> plan_4layer(std::size_t n_classes, Head head) {
  check_classes(n_classes);
  return {Conv2d{32, 3, 3, 1, Padding::Same}, ReLU{}, Conv2d{32, 3, 3, 1, Padding::Same}, ReLU{}, MaxPool2d{2},
          Flatten{}, Dense{128}, ReLU{}, Dense{n_classes}, head_layer(head)};
}

std::vector<LayerSpec> plan_16layer(std::size_t n_classes, double width_scale, Head head) {
  check_classes(n_classes);
  require(width_scale > 0.0 && std::isfinite(width_scale), Errc::InvalidArgument, "width_scale must be positive");
  const std::vector<std::vector<std::size_t>> blocks = {{64, 64}, {128, 128}, {256, 256, 256}, {512, 512, 512},
                                                        {512, 512, 512}};
  std::vector<LayerSpec> plan;
  for (const auto& block : blocks) {
    for (std::size_t ch : block) {
      plan.emplace_back(Conv2d{scaled(ch, width_scale), 3, 3, 1, Padding::Same});
      plan.emplace_back(ReLU{});
    }
    plan.emplace_back(MaxPool2d{2});
  }
  plan.emplace_back(Flatten{});
  for (int i = 0; i < 2; ++i) {
    plan.emplace_back(Dense{scaled(4096, width_scale)});
    plan.emplace_back(ReLU{});
  }
  plan.emplace_back(Dense{n_classes});
  plan.push_back(head_layer(head));
  return plan;
}

template <typename T>
Network<T> build_4layer(const Shape& input_shape, std::size_t n_classes, Head head, const InitSpec& init) {
  check_input(input_shape);
  require(input_shape[1] >= 8 && input_shape[2] >= 8, Errc::InputTooSmall,
          "4-layer network needs at least 8x8 input, got " + shape_str(input_shape));
  Network<T> net = make_network<T>(input_shape, plan_4layer(n_classes, head));
  init_uniform(net, init);
  return net;
}

template <typename T>
Network<T> build_16layer(const Shape& input_shape, std::size_t n_classes, double width_scale, const InitSpec& init,
                         Head head) {
  check_input(input_shape);
  require(input_shape[1] % 32 == 0 && input_shape[2] % 32 == 0 && input_shape[1] > 0 && input_shape[2] > 0,
          Errc::InputNotDivisible, "16-layer network needs spatial dims divisible by 32, got " + shape_str(input_shape));
  Network<T> net = make_network<T>(input_shape, plan_16layer(n_classes, width_scale, head));
  init_uniform(net, init);
  return net;
}

template Network<float> build_4layer<float>(const Shape&, std::size_t, Head, const InitSpec&);
template Network<double> build_4layer<double>(const Shape&, std::size_t, Head, const InitSpec&);
template Network<float> build_16layer<float>(const Shape&, std::size_t, double, const InitSpec&, Head);
template Network<double> build_16layer<double>(const Shape&, std::size_t, double, const InitSpec&, Head);

}  // namespace dentvis::nn
