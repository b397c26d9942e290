#include "dentvis/eval/confusion.hpp"

#include <string>

#include "dentvis/core/error.hpp"

namespace dentvis {

void ConfusionMatrix::accumulate(std::size_t truth, std::size_t pred, std::uint64_t count) {
  require(truth < k_ && pred < k_, Errc::IndexOutOfRange,
          "confusion index (" + std::to_string(truth) + ", " + std::to_string(pred) + ") outside " +
              std::to_string(k_) + " classes");
  counts_[truth * k_ + pred] += count;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  require(other.k_ == k_, Errc::DimensionMismatch, "confusion matrices differ in class count");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < k_; ++i) t += counts_[i * k_ + i];
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t t = 0;
  for (std::size_t j = 0; j < k_; ++j) t += at(truth, j);
  return t;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t pred) const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < k_; ++i) t += at(i, pred);
  return t;
}

MetricsRow metrics_from_counts(std::int64_t cp, std::int64_t pcp, std::int64_t tp, std::size_t class_id) {
  require(cp >= 0 && pcp >= 0 && tp >= 0, Errc::NegativeCount, "counts must be non-negative");
  require(tp <= cp && tp <= pcp, Errc::InvalidArgument, "true positives exceed cp or pcp");
  MetricsRow r{class_id, cp, pcp, tp, 0.0, 0.0, 0.0};
  if (pcp > 0) r.precision = static_cast<double>(tp) / static_cast<double>(pcp);
  if (cp > 0) r.recall = static_cast<double>(tp) / static_cast<double>(cp);
  if (r.precision + r.recall > 0.0) r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

MatrixMetrics matrix_metrics(const ConfusionMatrix& cm) {
  MatrixMetrics m;
  for (std::size_t c = 0; c < cm.classes(); ++c)
    m.rows.push_back(metrics_from_counts(static_cast<std::int64_t>(cm.row_sum(c)),
                                         static_cast<std::int64_t>(cm.col_sum(c)),
                                         static_cast<std::int64_t>(cm.at(c, c)), c));
  const auto total = cm.total();
  if (total > 0) m.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  return m;
}

}  // namespace dentvis
