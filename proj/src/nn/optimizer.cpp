#include "dentvis/nn/optimizer.hpp"

#include <cmath>

namespace dentvis::nn {

template <typename T>
typename OptimizerState<T>::Slot& OptimizerState<T>::slot_for(std::size_t slot, std::size_t n) {
  if (slots_.size() <= slot) slots_.resize(slot + 1);
  Slot& s = slots_[slot];
  if (s.eg2.empty()) {
    s.eg2.assign(n, T{0});
    if (kind_ == OptimizerKind::Adadelta) s.edx2.assign(n, T{0});
  }
  require(s.eg2.size() == n, Errc::ShapeMismatch, "optimizer slot size changed");
  return s;
}

template <typename T>
void OptimizerState<T>::step(std::size_t slot, std::span<T> param, std::span<const T> grad) {
  require(param.size() == grad.size(), Errc::ShapeMismatch, "parameter and gradient sizes differ");
  Slot& s = slot_for(slot, param.size());
  if (kind_ == OptimizerKind::Rmsprop) {
    const T rho = static_cast<T>(rms_.rho), lr = static_cast<T>(rms_.lr), eps = static_cast<T>(rms_.eps);
    for (std::size_t i = 0; i < param.size(); ++i) {
      const T g = grad[i];
      s.eg2[i] = rho * s.eg2[i] + (T{1} - rho) * g * g;
      param[i] -= lr * g / std::sqrt(s.eg2[i] + eps);
    }
    return;
  }
  const T rho = static_cast<T>(ada_.rho), eps = static_cast<T>(ada_.eps);
  for (std::size_t i = 0; i < param.size(); ++i) {
    const T g = grad[i];
    s.eg2[i] = rho * s.eg2[i] + (T{1} - rho) * g * g;
    const T dx = -std::sqrt(s.edx2[i] + eps) / std::sqrt(s.eg2[i] + eps) * g;
    s.edx2[i] = rho * s.edx2[i] + (T{1} - rho) * dx * dx;
    param[i] += dx;
  }
}

template <typename T>
void OptimizerState<T>::step(Network<T>& net, const Gradients<T>& grads) {
  require(grads.params.size() == net.params.size(), Errc::ShapeMismatch, "gradient list does not match network");
  for (std::size_t i = 0; i < net.params.size(); ++i) {
    if (net.params[i].empty()) continue;
    step(2 * i, net.params[i].weight.values(), grads.params[i].weight.values());
    step(2 * i + 1, net.params[i].bias.values(), grads.params[i].bias.values());
  }
}

template <typename T>
std::span<const T> OptimizerState<T>::mean_sq_grad(std::size_t slot) const {
  if (slot >= slots_.size()) return {};
  return slots_[slot].eg2;
}

template <typename T>
std::span<const T> OptimizerState<T>::mean_sq_update(std::size_t slot) const {
  if (slot >= slots_.size()) return {};
  return slots_[slot].edx2;
}

template class OptimizerState<float>;
template class OptimizerState<double>;

}  // namespace dentvis::nn
