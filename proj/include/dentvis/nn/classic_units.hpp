#pragma once

#include <span>

#include "dentvis/core/matrix.hpp"

namespace dentvis::nn {

/// 1 / (1 + e^-t)
double sigmoid(double t);

/// 1 when w.x > threshold, else 0.
int perceptron_output(std::span<const double> x, std::span<const double> w, double threshold);

/// w_ij = (1/p) sum_k x_i^k x_j^k over the p rows of `patterns`.
MatrixD hebbian_weights(const MatrixD& patterns);

}  // namespace dentvis::nn
