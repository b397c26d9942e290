#pragma once

#include <span>
#include <vector>

#include "dentvis/nn/network.hpp"

namespace dentvis::nn {

enum class OptimizerKind { Adadelta, Rmsprop };

struct AdadeltaParams {
  double rho = 0.95;
  double eps = 1e-6;
};

struct RmspropParams {
  double lr = 0.001;
  double rho = 0.9;
  double eps = 1e-8;
};

/// Per-parameter running averages, created on first use of each slot.
template <typename T>
class OptimizerState {
 public:
  explicit OptimizerState(OptimizerKind kind, AdadeltaParams ada = {}, RmspropParams rms = {})
      : kind_(kind), ada_(ada), rms_(rms) {}

  OptimizerKind kind() const noexcept { return kind_; }

  /// Updates one parameter tensor in place. `slot` identifies its accumulators.
  void step(std::size_t slot, std::span<T> param, std::span<const T> grad);

  /// Updates every weight and bias of `net`.
  void step(Network<T>& net, const Gradients<T>& grads);

  /// E[g^2] for a slot (empty if untouched).
  std::span<const T> mean_sq_grad(std::size_t slot) const;
  /// E[dx^2] for a slot (adadelta only).
  std::span<const T> mean_sq_update(std::size_t slot) const;

 private:
  struct Slot {
    std::vector<T> eg2;
    std::vector<T> edx2;
  };
  Slot& slot_for(std::size_t slot, std::size_t n);

  OptimizerKind kind_;
  AdadeltaParams ada_;
  RmspropParams rms_;
  std::vector<Slot> slots_;
};

}  // namespace dentvis::nn
