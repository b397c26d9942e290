#pragma once

#include <cstdint>
#include <vector>

namespace dentvis {

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t k_classes = 0) : k_(k_classes), counts_(k_classes * k_classes, 0) {}

  std::size_t classes() const noexcept { return k_; }
  std::uint64_t at(std::size_t truth, std::size_t pred) const { return counts_[truth * k_ + pred]; }

  /// Throws IndexOutOfRange if either id is >= classes().
  void accumulate(std::size_t truth, std::size_t pred, std::uint64_t count = 1);
  /// Elementwise sum; both matrices must have the same class count.
  void merge(const ConfusionMatrix& other);

  std::uint64_t total() const noexcept;
  std::uint64_t trace() const noexcept;
  std::uint64_t row_sum(std::size_t truth) const;
  std::uint64_t col_sum(std::size_t pred) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t k_;
  std::vector<std::uint64_t> counts_;
};

struct MetricsRow {
  std::size_t class_id = 0;
  std::int64_t cp = 0;
  std::int64_t pcp = 0;
  std::int64_t tp = 0;
  double precision = 0.0;  // tp / pcp, 0 when pcp = 0
  double recall = 0.0;     // tp / cp, 0 when cp = 0
  double f1 = 0.0;         // 2PR / (P + R), 0 when both are 0
};

/// Throws NegativeCount for negative inputs and InvalidArgument when tp exceeds cp or pcp.
MetricsRow metrics_from_counts(std::int64_t cp, std::int64_t pcp, std::int64_t tp, std::size_t class_id = 0);

struct MatrixMetrics {
  std::vector<MetricsRow> rows;
  double accuracy = 0.0;  // trace / total, 0 for an empty matrix
};

MatrixMetrics matrix_metrics(const ConfusionMatrix& cm);

}  // namespace dentvis
