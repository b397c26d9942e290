#include "dentvis/classic/ecoc.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dentvis/core/error.hpp"
#include "dentvis/core/parallel.hpp"

namespace dentvis {

CodingMatrix one_vs_one_coding(std::size_t k) {
  require(k >= 2, Errc::SingleClassInput, "ECOC needs at least two classes");
  const std::size_t l = k * (k - 1) / 2;
  CodingMatrix m(k, l, 0);
  std::size_t col = 0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b, ++col) {
      m(a, col) = 1;
      m(b, col) = -1;
    }
  return m;
}

void validate_coding(const CodingMatrix& coding) {
  require(coding.rows() >= 2 && coding.cols() >= 1, Errc::InvalidArgument, "coding matrix too small");
  for (std::size_t l = 0; l < coding.cols(); ++l) {
    bool pos = false, neg = false;
    for (std::size_t k = 0; k < coding.rows(); ++k) {
      const auto v = coding(k, l);
      require(v >= -1 && v <= 1, Errc::InvalidArgument, "coding entries must be -1, 0 or +1");
      pos |= v > 0;
      neg |= v < 0;
    }
    require(pos && neg, Errc::InvalidArgument, "every coding column needs a positive and a negative class");
  }
  std::set<std::vector<std::int8_t>> rows;
  for (std::size_t k = 0; k < coding.rows(); ++k) {
    const auto r = coding.row(k);
    require(rows.emplace(r.begin(), r.end()).second, Errc::InvalidArgument, "coding rows must be distinct");
  }
}

EcocModel ecoc_train(const MatrixF& x, std::span<const std::uint32_t> y, const KernelSpec& kernel,
                     const SvmOptions& opt) {
  require(x.rows() == y.size(), Errc::DimensionMismatch, "ECOC labels must match rows");
  std::map<std::uint32_t, std::size_t> counts;
  for (auto v : y) ++counts[v];
  require(counts.size() >= 2, Errc::SingleClassInput, "ECOC needs at least two classes");
  for (const auto& [label, count] : counts)
    require(count >= 2, Errc::ClassTooSmall, "class " + std::to_string(label) + " has fewer than 2 samples");

  EcocModel model;
  for (const auto& kv : counts) model.classes.push_back(kv.first);
  model.coding = one_vs_one_coding(model.classes.size());
  validate_coding(model.coding);

  std::vector<std::size_t> row_of(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    row_of[i] = static_cast<std::size_t>(std::lower_bound(model.classes.begin(), model.classes.end(), y[i]) - model.classes.begin());

  const KernelSpec k = resolve_kernel(kernel, x.cols());
  const MatrixD gram = gram_matrix(x, k);
  const std::size_t n_learners = model.coding.cols();
  model.learners.resize(n_learners);
  parallel_for(n_learners, [&](std::size_t l) {
    std::vector<std::size_t> idx;
    std::vector<int> yl;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const auto code = model.coding(row_of[i], l);
      if (code == 0) continue;
      idx.push_back(i);
      yl.push_back(code > 0 ? 1 : -1);
    }
    MatrixF xl(idx.size(), x.cols());
    MatrixD gl(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      std::copy(x.row(idx[a]).begin(), x.row(idx[a]).end(), xl.row(a).begin());
      for (std::size_t b = 0; b < idx.size(); ++b) gl(a, b) = gram(idx[a], idx[b]);
    }
    model.learners[l] = svm_train_gram(xl, yl, gl, k, opt).model;
  });
  return model;
}

std::vector<double> ecoc_losses(const CodingMatrix& coding, std::span<const double> scores) {
  require(scores.size() == coding.cols(), Errc::DimensionMismatch, "one score per coding column expected");
  std::vector<double> losses(coding.rows(), 0.0);
  for (std::size_t k = 0; k < coding.rows(); ++k) {
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < coding.cols(); ++l) {
      const double m = coding(k, l);
      if (m == 0.0) continue;
      num += std::abs(m) * std::max(0.0, 1.0 - m * scores[l]) / 2.0;
      den += std::abs(m);
    }
    losses[k] = den > 0.0 ? num / den : 0.0;
  }
  return losses;
}

std::size_t ecoc_decode(const CodingMatrix& coding, std::span<const double> scores) {
  const auto losses = ecoc_losses(coding, scores);
  return static_cast<std::size_t>(std::min_element(losses.begin(), losses.end()) - losses.begin());
}

std::uint32_t ecoc_predict(const EcocModel& m, std::span<const float> x) {
  require(!m.learners.empty(), Errc::InvalidArgument, "ECOC model has no learners");
  std::vector<double> scores(m.learners.size());
  for (std::size_t l = 0; l < m.learners.size(); ++l) scores[l] = svm_decision(m.learners[l], x);
  return m.classes[ecoc_decode(m.coding, scores)];
}

}  // namespace dentvis
