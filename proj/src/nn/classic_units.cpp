#include "dentvis/nn/classic_units.hpp"

#include <cmath>

namespace dentvis::nn {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

int perceptron_output(std::span<const double> x, std::span<const double> w, double threshold) {
  require(x.size() == w.size(), Errc::DimensionMismatch, "perceptron input and weight lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
  return s > threshold ? 1 : 0;
}

MatrixD hebbian_weights(const MatrixD& patterns) {
  require(patterns.rows() >= 1, Errc::InvalidArgument, "hebbian rule needs at least one pattern");
  const std::size_t p = patterns.rows(), n = patterns.cols();
  MatrixD w(n, n, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    const auto x = patterns.row(k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w(i, j) += x[i] * x[j];
  }
  for (auto& v : w.data()) v /= static_cast<double>(p);
  return w;
}

}  // namespace dentvis::nn
