#include <algorithm>
#include <cmath>
#include <numeric>

#include "dentvis/codebook/codebook.hpp"
#include "dentvis/core/error.hpp"
#include "dentvis/simd/kernels.hpp"

namespace dentvis {
namespace {

// Solves a x = b for a small symmetric positive definite a (row-major k x k)
// by Cholesky; falls back to partially pivoted elimination if a is not
// numerically positive definite.
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b, std::size_t k) {
  std::vector<double> l(k * k, 0.0);
  bool spd = true;
  for (std::size_t j = 0; j < k && spd; ++j) {
    double diag = a[j * k + j];
    for (std::size_t p = 0; p < j; ++p) diag -= l[j * k + p] * l[j * k + p];
    if (!(diag > 0.0)) {
      spd = false;
      break;
    }
    l[j * k + j] = std::sqrt(diag);
    for (std::size_t i = j + 1; i < k; ++i) {
      double s = a[i * k + j];
      for (std::size_t p = 0; p < j; ++p) s -= l[i * k + p] * l[j * k + p];
      l[i * k + j] = s / l[j * k + j];
    }
  }
  if (spd) {
    std::vector<double> y(k);
    for (std::size_t i = 0; i < k; ++i) {
      double s = b[i];
      for (std::size_t p = 0; p < i; ++p) s -= l[i * k + p] * y[p];
      y[i] = s / l[i * k + i];
    }
    std::vector<double> x(k);
    for (std::size_t ii = k; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t p = ii + 1; p < k; ++p) s -= l[p * k + ii] * x[p];
      x[ii] = s / l[ii * k + ii];
    }
    return x;
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(a[r * k + col]) > std::abs(a[piv * k + col])) piv = r;
    require(a[piv * k + col] != 0.0, Errc::NumericFailure, "singular LLC system");
    if (piv != col) {
      for (std::size_t c = 0; c < k; ++c) std::swap(a[col * k + c], a[piv * k + c]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < k; ++r) {
      const double f = a[r * k + col] / a[col * k + col];
      for (std::size_t c = col; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(k);
  for (std::size_t r = k; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < k; ++c) s -= a[r * k + c] * x[c];
    x[r] = s / a[r * k + r];
  }
  return x;
}

}  // namespace

SparseCode llc_encode(std::span<const float> x, const Codebook& cb, const LlcConfig& cfg) {
  require(x.size() == cb.dim(), Errc::DimensionMismatch, "LLC input dim differs from codebook dim");
  require(cfg.knn >= 1 && cfg.knn <= cb.m(), Errc::InvalidArgument, "LLC knn must lie in [1, m]");
  require(cfg.beta > 0.0, Errc::InvalidArgument, "LLC beta must be positive");

  const std::size_t m = cb.m();
  const std::size_t k = cfg.knn;
  std::vector<std::pair<float, std::uint32_t>> dist(m);
  for (std::size_t c = 0; c < m; ++c) dist[c] = {simd::sqdist(x, cb.center(c)), static_cast<std::uint32_t>(c)};
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

  SparseCode code;
  if (dist[0].first == 0.0f) {
    // x coincides with a codeword: the constrained optimum is its indicator
    code.indices = {dist[0].second};
    code.values = {1.0f};
    return code;
  }

  const std::size_t d = cb.dim();
  std::vector<double> z(k * d);  // z_j = b_j - x
  for (std::size_t j = 0; j < k; ++j) {
    const auto b = cb.center(dist[j].second);
    for (std::size_t t = 0; t < d; ++t) z[j * d + t] = static_cast<double>(b[t]) - static_cast<double>(x[t]);
  }
  std::vector<double> c(k * k);
  double trace = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const double v = simd::dot(std::span<const double>(z.data() + i * d, d), std::span<const double>(z.data() + j * d, d));
      c[i * k + j] = c[j * k + i] = v;
    }
    trace += c[i * k + i];
  }
  if (trace == 0.0) {
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) c[i * k + i] = 1.0;
  } else {
    for (std::size_t i = 0; i < k; ++i) c[i * k + i] += cfg.beta * trace;
  }
  std::vector<double> w = solve_spd(std::move(c), std::vector<double>(k, 1.0), k);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  require(std::isfinite(sum) && sum != 0.0, Errc::NumericFailure, "LLC weights do not normalize");

  code.indices.resize(k);
  code.values.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    code.indices[j] = dist[j].second;
    code.values[j] = static_cast<float>(w[j] / sum);
  }
  return code;
}

}  // namespace dentvis
