#include "dentvis/classic/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dentvis/core/error.hpp"
#include "dentvis/simd/kernels.hpp"

namespace dentvis {

KnnModel knn_fit(MatrixF x, std::vector<std::uint32_t> y, std::size_t k, std::size_t n_classes) {
  require(x.rows() == y.size(), Errc::DimensionMismatch, "k-NN labels must match rows");
  require(k >= 1 && k <= x.rows(), Errc::InvalidArgument, "k-NN requires 1 <= k <= n");
  const std::uint32_t max_label = *std::max_element(y.begin(), y.end());
  if (n_classes == 0) n_classes = max_label + 1;
  require(max_label < n_classes, Errc::LabelOutOfRange, "k-NN label exceeds class count");
  return KnnModel{std::move(x), std::move(y), k, n_classes};
}

std::uint32_t knn_predict(const KnnModel& model, std::span<const float> x) {
  require(x.size() == model.train_x.cols(), Errc::DimensionMismatch, "k-NN query dim");
  const std::size_t n = model.train_x.rows();
  std::vector<std::pair<float, std::uint32_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i)
    dist[i] = {simd::sqdist(x, model.train_x.row(i)), static_cast<std::uint32_t>(i)};
  const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(model.k);
  std::partial_sort(dist.begin(), kth, dist.end());

  std::vector<std::size_t> votes(model.n_classes, 0);
  std::vector<double> summed(model.n_classes, 0.0);
  for (auto it = dist.begin(); it != kth; ++it) {
    const auto label = model.train_y[it->second];
    ++votes[label];
    summed[label] += std::sqrt(static_cast<double>(it->first));
  }
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < model.n_classes; ++c) {
    if (votes[c] > votes[best] || (votes[c] == votes[best] && votes[c] > 0 && summed[c] < summed[best]))
      best = c;
  }
  return best;
}

}  // namespace dentvis
