#pragma once

#include "dentvis/nn/tensor.hpp"

namespace dentvis::nn {

enum class LossKind { Binary, Categorical };

inline constexpr double kLogClamp = 1e-7;

/// Binary: mean over all elements of -(t log o + (1-t) log(1-o)).
/// Categorical: mean over samples of -sum_k t_k log o_k.
/// o is clamped to [1e-7, 1 - 1e-7] before the logs.
template <typename T>
double cross_entropy(const Tensor<T>& t, const Tensor<T>& o, LossKind kind);

/// d loss / d o; zero where the clamp is active.
template <typename T>
Tensor<T> cross_entropy_grad(const Tensor<T>& t, const Tensor<T>& o, LossKind kind);

}  // namespace dentvis::nn
