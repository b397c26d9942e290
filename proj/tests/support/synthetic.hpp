#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "gradcheck.hpp"
#include "dentvis/codebook/codebook.hpp"
#include "dentvis/core/matrix.hpp"
#include "dentvis/core/rng.hpp"

namespace dentvis::testing {

inline MatrixF random_matrix(std::size_t n, std::size_t d, Rng& rng) {
  MatrixF x(n, d);
  for (auto& v : x.data()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  return x;
}

// Points around `k` random means with spread `sigma`.
inline MatrixF blobs(std::size_t n, std::size_t d, std::size_t k, double sigma, Rng& rng, MatrixF* means = nullptr) {
  MatrixF mu(k, d);
  for (auto& v : mu.data()) v = static_cast<float>(rng.uniform(-5.0, 5.0));
  MatrixF x(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) x(i, j) = mu(i % k, j) + static_cast<float>(sigma * rng.normal());
  if (means) *means = mu;
  return x;
}

inline std::vector<PositionedCode> random_codes(std::size_t count, std::size_t m, Rng& rng) {
  std::vector<PositionedCode> codes;
  for (std::size_t i = 0; i < count; ++i) {
    PositionedCode pc;
    pc.cx = static_cast<float>(rng.uniform());
    pc.cy = static_cast<float>(rng.uniform());
    std::vector<std::uint32_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0u);
    rng.shuffle(std::span<std::uint32_t>(idx));
    const std::size_t k = 1 + rng.below(5);
    for (std::size_t t = 0; t < k; ++t) {
      pc.code.indices.push_back(idx[t]);
      pc.code.values.push_back(static_cast<float>(rng.uniform(-0.5, 1.0)));
    }
    codes.push_back(pc);
  }
  return codes;
}

}  // namespace dentvis::testing
