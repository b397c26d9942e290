#include "dentvis/nn/loss.hpp"

#include <algorithm>
#include <cmath>

namespace dentvis::nn {

namespace {

template <typename T>
void check(const Tensor<T>& t, const Tensor<T>& o) {
  require(t.shape() == o.shape(), Errc::ShapeMismatch,
          "target shape " + shape_str(t.shape()) + " differs from output " + shape_str(o.shape()));
  require(o.rank() >= 1 && o.size() > 0, Errc::ShapeMismatch, "loss needs a non-empty batch");
}

double clamp_o(double o) { return std::clamp(o, kLogClamp, 1.0 - kLogClamp); }

bool clamped(double o) { return o < kLogClamp || o > 1.0 - kLogClamp; }

}  // namespace

template <typename T>
double cross_entropy(const Tensor<T>& t, const Tensor<T>& o, LossKind kind) {
  check(t, o);
  double sum = 0.0;
  if (kind == LossKind::Binary) {
    for (std::size_t i = 0; i < o.size(); ++i) {
      const double ti = t[i], oi = clamp_o(o[i]);
      sum -= ti * std::log(oi) + (1.0 - ti) * std::log(1.0 - oi);
    }
    return sum / static_cast<double>(o.size());
  }
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (t[i] != T{0}) sum -= static_cast<double>(t[i]) * std::log(clamp_o(o[i]));
  }
  return sum / static_cast<double>(o.dim(0));
}

template <typename T>
Tensor<T> cross_entropy_grad(const Tensor<T>& t, const Tensor<T>& o, LossKind kind) {
  check(t, o);
  Tensor<T> g(o.shape());
  if (kind == LossKind::Binary) {
    const double scale = 1.0 / static_cast<double>(o.size());
    for (std::size_t i = 0; i < o.size(); ++i) {
      const double oi = o[i], ti = t[i];
      if (clamped(oi)) continue;
      g[i] = static_cast<T>(scale * (-ti / oi + (1.0 - ti) / (1.0 - oi)));
    }
    return g;
  }
  const double scale = 1.0 / static_cast<double>(o.dim(0));
  for (std::size_t i = 0; i < o.size(); ++i) {
    const double oi = o[i];
    if (clamped(oi) || t[i] == T{0}) continue;
    g[i] = static_cast<T>(-scale * static_cast<double>(t[i]) / oi);
  }
  return g;
}

template double cross_entropy<float>(const Tensor<float>&, const Tensor<float>&, LossKind);
template double cross_entropy<double>(const Tensor<double>&, const Tensor<double>&, LossKind);
template Tensor<float> cross_entropy_grad<float>(const Tensor<float>&, const Tensor<float>&, LossKind);
template Tensor<double> cross_entropy_grad<double>(const Tensor<double>&, const Tensor<double>&, LossKind);

}  // namespace dentvis::nn
