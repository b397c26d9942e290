#include "dentvis/classic/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dentvis/core/error.hpp"
#include "dentvis/simd/kernels.hpp"

namespace dentvis {
namespace {

constexpr double kTau = 1e-12;
constexpr double kSupportEps = 1e-8;

void check_inputs(const MatrixF& x, std::span<const int> y, const SvmOptions& opt) {
  require(x.rows() == y.size(), Errc::DimensionMismatch, "SVM labels must match rows");
  require(opt.c > 0.0, Errc::InvalidArgument, "SVM box constraint must be positive");
  require(opt.tol > 0.0, Errc::InvalidArgument, "SVM tolerance must be positive");
  bool pos = false, neg = false;
  for (int v : y) {
    require(v == 1 || v == -1, Errc::InvalidArgument, "SVM labels must be +1 or -1");
    (v > 0 ? pos : neg) = true;
  }
  require(pos && neg, Errc::SingleClassInput, "SVM training needs both classes");
}

}  // namespace

KernelSpec resolve_kernel(KernelSpec k, std::size_t dim) {
  if (k.kind == KernelKind::Gaussian) {
    if (k.gamma == 0.0) k.gamma = 1.0 / static_cast<double>(std::max<std::size_t>(dim, 1));
    require(k.gamma > 0.0, Errc::InvalidArgument, "Gaussian gamma must be positive");
  }
  return k;
}

double kernel_value(const KernelSpec& k, std::span<const float> a, std::span<const float> b) {
  if (k.kind == KernelKind::Linear) return simd::dot(a, b);
  return std::exp(-k.gamma * static_cast<double>(simd::sqdist(a, b)));
}

MatrixD gram_matrix(const MatrixF& x, const KernelSpec& kernel) {
  const std::size_t n = x.rows();
  MatrixD g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) g(i, j) = g(j, i) = kernel_value(kernel, x.row(i), x.row(j));
  return g;
}

SvmTrainResult svm_train(const MatrixF& x, std::span<const int> y, const KernelSpec& kernel, const SvmOptions& opt) {
  check_inputs(x, y, opt);
  const KernelSpec k = resolve_kernel(kernel, x.cols());
  return svm_train_gram(x, y, gram_matrix(x, k), k, opt);
}

SvmTrainResult svm_train_gram(const MatrixF& x, std::span<const int> y, const MatrixD& gram,
                              const KernelSpec& kernel, const SvmOptions& opt) {
  check_inputs(x, y, opt);
  const std::size_t n = x.rows();
  require(gram.rows() == n && gram.cols() == n, Errc::DimensionMismatch, "Gram matrix shape");
  const double c = opt.c;

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  auto q = [&](std::size_t i, std::size_t j) { return static_cast<double>(y[i] * y[j]) * gram(i, j); };
  auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0.0); };
  auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0.0) || (y[t] < 0 && alpha[t] < c); };
  auto objective = [&] {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += alpha[t] * (grad[t] - 1.0);
    return -0.5 * s;  // dual objective sum(a) - 1/2 a'Qa
  };

  SvmTrainResult result;
  const std::size_t max_iter = std::max<std::size_t>(1, opt.max_passes) * std::max<std::size_t>(n, 1);
  result.converged = false;
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -static_cast<double>(y[t]) * grad[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    if (i == n || j == n || g_max - g_min < opt.tol) {
      result.converged = true;
      break;
    }

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    const double qii = q(i, i), qjj = q(j, j), qij = q(i, j);
    if (y[i] != y[j]) {
      double quad = qii + qjj + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = qii + qjj - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(i, t) * dai + q(j, t) * daj;
    if (opt.record_objective) result.dual_objective.push_back(objective());
  }
  result.iterations = iter;

  // b from free multipliers; the midpoint of the feasible interval otherwise
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = static_cast<double>(y[t]) * grad[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;

  BinarySvm& model = result.model;
  model.kernel = kernel;
  model.c = c;
  model.bias = -rho;
  model.support_x = MatrixF(0, x.cols());
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > kSupportEps) {
      model.support_x.append_row(x.row(t));
      model.alpha_y.push_back(alpha[t] * y[t]);
    }
  }
  require(!model.alpha_y.empty(), Errc::NumericFailure, "SVM produced no support vectors");
  result.alpha = std::move(alpha);
  return result;
}

double svm_decision(const BinarySvm& m, std::span<const float> x) {
  require(x.size() == m.support_x.cols(), Errc::DimensionMismatch, "SVM query dim");
  double s = m.bias;
  for (std::size_t i = 0; i < m.alpha_y.size(); ++i) s += m.alpha_y[i] * kernel_value(m.kernel, m.support_x.row(i), x);
  return s;
}

}  // namespace dentvis
