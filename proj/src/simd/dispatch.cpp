#include <cstdlib>
#include <string_view>

#include "dentvis/simd/kernels.hpp"

namespace dentvis::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(DENTVIS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa select_isa() noexcept {
  const char* env = std::getenv("DENTVIS_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return Isa::Scalar;
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return cpu_has_avx2();
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) noexcept {
#if defined(DENTVIS_HAVE_AVX2)
  if (isa == Isa::Avx2 && cpu_has_avx2()) return detail::avx2_table();
#endif
  (void)isa;
  return detail::scalar_table();
}

Isa active_isa() noexcept {
  static const Isa isa = select_isa();
  return isa;
}

const KernelTable& kernels() noexcept {
  static const KernelTable& table = kernels_for(active_isa());
  return table;
}

}  // namespace dentvis::simd
