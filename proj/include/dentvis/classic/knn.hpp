#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dentvis/core/matrix.hpp"

namespace dentvis {

struct KnnModel {
  MatrixF train_x;
  std::vector<std::uint32_t> train_y;  // class ids in [0, n_classes)
  std::size_t k = 5;
  std::size_t n_classes = 0;
};

/// Validates n >= k >= 1 and label range; n_classes = max label + 1 when 0.
KnnModel knn_fit(MatrixF x, std::vector<std::uint32_t> y, std::size_t k, std::size_t n_classes = 0);

/// Majority vote over the k nearest training rows (Euclidean). Vote ties go
/// to the class with the smaller summed distance, then the lower class id.
std::uint32_t knn_predict(const KnnModel& model, std::span<const float> x);

}  // namespace dentvis
