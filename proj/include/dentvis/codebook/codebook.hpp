#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dentvis/core/matrix.hpp"
#include "dentvis/features/descriptor_set.hpp"

namespace dentvis {

/// Learned dictionary: m centers of dimension dim (one per row).
class Codebook {
 public:
  Codebook() = default;
  /// Enforces m >= 2, finite entries and pairwise distinct centers.
  explicit Codebook(MatrixF centers);

  std::size_t m() const noexcept { return centers_.rows(); }
  std::size_t dim() const noexcept { return centers_.cols(); }
  std::span<const float> center(std::size_t k) const { return centers_.row(k); }
  const MatrixF& centers() const noexcept { return centers_; }

 private:
  MatrixF centers_;
};

/// Up to n rows drawn uniformly without replacement from all descriptors.
MatrixF sample_descriptors(std::span<const DescriptorSet> sets, std::size_t n, std::uint64_t seed);

struct KMeansConfig {
  std::size_t m = 200;
  std::size_t max_iter = 100;
  double tol = 1e-4;  // stop when the relative inertia decrease falls to tol
  std::uint64_t seed = 0;
};

struct KMeansResult {
  Codebook codebook;
  std::vector<std::uint32_t> assignments;
  double inertia = 0.0;
  std::vector<double> inertia_history;  // one entry per assignment pass
  std::size_t iterations = 0;
  std::uint64_t distance_evals = 0;  // point-to-center distance computations
};

/// Reference Lloyd iteration: k-means++ seeding, full assignment passes,
/// empty clusters reseeded at the farthest point.
KMeansResult kmeans_lloyd(const MatrixF& x, const KMeansConfig& cfg);

/// Triangle-inequality accelerated k-means (Elkan bounds). Same seeding,
/// update and repair rules as kmeans_lloyd, so it reproduces the Lloyd
/// assignments exactly while skipping provably unnecessary distances.
KMeansResult kmeans_elkan(const MatrixF& x, const KMeansConfig& cfg);

struct LlcConfig {
  std::size_t knn = 5;
  double beta = 1e-4;
};

/// Coefficients over a few codewords; values sum to 1.
struct SparseCode {
  std::vector<std::uint32_t> indices;
  std::vector<float> values;
};

/// Approximated locality-constrained linear code of x over its knn nearest
/// codewords.
SparseCode llc_encode(std::span<const float> x, const Codebook& cb, const LlcConfig& cfg);

struct PositionedCode {
  float cx = 0.0f;
  float cy = 0.0f;
  SparseCode code;
};

struct PyramidConfig {
  std::size_t levels = 2;
};

/// m * sum_{l=0..levels} 4^l
std::size_t feature_dim(std::size_t m, const PyramidConfig& pyr);

/// Spatial-pyramid max pooling of dense code expansions. Cells are ordered
/// coarse to fine and row-major within a level; empty cells pool to 0. The
/// result is L2-normalized (all zeros for empty input).
std::vector<float> pool_pyramid(std::span<const PositionedCode> codes, std::size_t m, const PyramidConfig& pyr);

}  // namespace dentvis
