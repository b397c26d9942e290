#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dentvis/core/matrix.hpp"

namespace dentvis {

enum class KernelKind { Linear, Gaussian };

struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  double gamma = 0.0;  // Gaussian only; 0 means 1 / dim at training time
};

double kernel_value(const KernelSpec& k, std::span<const float> a, std::span<const float> b);

struct BinarySvm {
  MatrixF support_x;
  std::vector<double> alpha_y;  // alpha_i * y_i per support vector
  double bias = 0.0;
  KernelSpec kernel;  // gamma resolved
  double c = 10.0;
};

struct SvmOptions {
  double c = 10.0;
  double tol = 1e-3;  // KKT tolerance on the maximal violating pair
  std::size_t max_passes = 200;  // pair updates are capped at max_passes * n
  bool record_objective = false;
};

struct SvmTrainResult {
  BinarySvm model;
  bool converged = true;  // false: the update cap was hit, model is best-so-far
  std::size_t iterations = 0;
  std::vector<double> dual_objective;  // after each pair update, when recorded
  std::vector<double> alpha;  // full multiplier vector, training order
};

/// Soft-margin SVM dual by sequential minimal optimization with
/// maximal-violating-pair selection. Labels are +1 / -1.
SvmTrainResult svm_train(const MatrixF& x, std::span<const int> y, const KernelSpec& kernel, const SvmOptions& opt);

/// Same solver over a precomputed Gram matrix (n x n, training order).
/// Support vectors are copied from x.
SvmTrainResult svm_train_gram(const MatrixF& x, std::span<const int> y, const MatrixD& gram,
                              const KernelSpec& kernel, const SvmOptions& opt);

/// Raw margin sum_i alpha_i y_i k(x_i, x) + b.
double svm_decision(const BinarySvm& m, std::span<const float> x);

/// Gram matrix over the rows of x.
MatrixD gram_matrix(const MatrixF& x, const KernelSpec& kernel);

/// Gamma actually used for data of the given dimension.
KernelSpec resolve_kernel(KernelSpec k, std::size_t dim);

}  // namespace dentvis
