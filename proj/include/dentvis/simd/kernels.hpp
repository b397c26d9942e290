#pragma once

// Data-parallel inner loops shared by the feature, dictionary, classifier and
// network code. Every kernel has a portable scalar reference; an AVX2/FMA
// variant is selected at runtime when the CPU supports it. Set
// DENTVIS_SIMD=scalar to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace dentvis::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  float (*dot_f32)(const float* a, const float* b, std::size_t n);
  double (*dot_f64)(const double* a, const double* b, std::size_t n);
  float (*sqdist_f32)(const float* a, const float* b, std::size_t n);
  double (*sqdist_f64)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy_f32)(float alpha, const float* x, float* y, std::size_t n);
  // dst[i] = max(dst[i], src[i])
  void (*max_f32)(const float* src, float* dst, std::size_t n);
  // C[m x n] += A[m x k] * B[k x n], all row-major with leading dimensions
  void (*gemm_f32)(std::size_t m, std::size_t n, std::size_t k, const float* a, std::size_t lda,
                   const float* b, std::size_t ldb, float* c, std::size_t ldc);
  void (*gemm_f64)(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
                   const double* b, std::size_t ldb, double* c, std::size_t ldc);
};

bool isa_available(Isa isa) noexcept;

/// Table for a specific ISA. Requesting an unavailable ISA returns the scalar table.
const KernelTable& kernels_for(Isa isa) noexcept;

/// Table chosen at first use (best available, or DENTVIS_SIMD override).
const KernelTable& kernels() noexcept;
Isa active_isa() noexcept;

// Thin typed wrappers over the active table.

inline float dot(std::span<const float> a, std::span<const float> b) {
  return kernels().dot_f32(a.data(), b.data(), a.size());
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot_f64(a.data(), b.data(), a.size());
}
inline float sqdist(std::span<const float> a, std::span<const float> b) {
  return kernels().sqdist_f32(a.data(), b.data(), a.size());
}
inline double sqdist(std::span<const double> a, std::span<const double> b) {
  return kernels().sqdist_f64(a.data(), b.data(), a.size());
}
inline void axpy(float alpha, std::span<const float> x, std::span<float> y) {
  kernels().axpy_f32(alpha, x.data(), y.data(), x.size());
}
inline void max_into(std::span<const float> src, std::span<float> dst) {
  kernels().max_f32(src.data(), dst.data(), src.size());
}

template <typename T>
void gemm(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
          std::size_t ldb, T* c, std::size_t ldc);

template <>
inline void gemm<float>(std::size_t m, std::size_t n, std::size_t k, const float* a,
                        std::size_t lda, const float* b, std::size_t ldb, float* c,
                        std::size_t ldc) {
  kernels().gemm_f32(m, n, k, a, lda, b, ldb, c, ldc);
}

template <>
inline void gemm<double>(std::size_t m, std::size_t n, std::size_t k, const double* a,
                         std::size_t lda, const double* b, std::size_t ldb, double* c,
                         std::size_t ldc) {
  kernels().gemm_f64(m, n, k, a, lda, b, ldb, c, ldc);
}

namespace detail {
const KernelTable& scalar_table() noexcept;
const KernelTable& avx2_table() noexcept;
}  // namespace detail

}  // namespace dentvis::simd
