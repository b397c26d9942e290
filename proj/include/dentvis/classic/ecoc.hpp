#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dentvis/classic/svm.hpp"
#include "dentvis/core/matrix.hpp"

namespace dentvis {

/// K x L coding matrix with entries in {-1, 0, +1}.
using CodingMatrix = Matrix<std::int8_t>;

/// One-vs-one design: column l for class pair (a, b), a < b, in
/// lexicographic pair order; +1 on row a, -1 on row b.
CodingMatrix one_vs_one_coding(std::size_t k);

/// Throws unless every column has a +1 and a -1 and all rows are distinct.
void validate_coding(const CodingMatrix& coding);

struct EcocModel {
  std::vector<std::uint32_t> classes;  // class label per coding row
  CodingMatrix coding;
  std::vector<BinarySvm> learners;
};

/// Trains the K(K-1)/2 one-vs-one learners. Labels are arbitrary ids; every
/// class needs at least two samples.
EcocModel ecoc_train(const MatrixF& x, std::span<const std::uint32_t> y, const KernelSpec& kernel,
                     const SvmOptions& opt);

/// Loss-weighted hinge decoding: per row k,
/// sum_l |m_kl| * max(0, 1 - m_kl s_l) / 2  /  sum_l |m_kl|.
std::vector<double> ecoc_losses(const CodingMatrix& coding, std::span<const double> scores);

/// Row index with the smallest loss (ties to the lower row).
std::size_t ecoc_decode(const CodingMatrix& coding, std::span<const double> scores);

/// Predicted class label.
std::uint32_t ecoc_predict(const EcocModel& m, std::span<const float> x);

}  // namespace dentvis
