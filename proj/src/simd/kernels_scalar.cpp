// Reference kernels: straightforward loops with sequential accumulation.
// These define the expected results the vector variants are tested against.

#include <algorithm>

#include "dentvis/simd/kernels.hpp"

namespace dentvis::simd {
namespace {

template <typename T>
T dot_ref(const T* a, const T* b, std::size_t n) {
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
T sqdist_ref(const T* a, const T* b, std::size_t n) {
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const T d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy_ref(float alpha, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void max_ref(const float* src, float* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = std::max(dst[i], src[i]);
}

template <typename T>
void gemm_ref(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda,
              const T* b, std::size_t ldb, T* c, std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    T* crow = c + i * ldc;
    for (std::size_t p = 0; p < k; ++p) {
      const T av = a[i * lda + p];
      const T* brow = b + p * ldb;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

}  // namespace

namespace detail {

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{
      &dot_ref<float>,  &dot_ref<double>, &sqdist_ref<float>, &sqdist_ref<double>,
      &axpy_ref,        &max_ref,         &gemm_ref<float>,   &gemm_ref<double>,
  };
  return table;
}

}  // namespace detail
}  // namespace dentvis::simd
