#include "mvf/kernels.hpp"

#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace mvf::kernels {

const KernelTable& scalar_table() {
  static const KernelTable table{
      Isa::kScalar,          "scalar",         scalar::multiply,
      scalar::sum,           scalar::sum_squares, scalar::max_abs,
      scalar::squared_magnitude, scalar::gaussian_log_density, scalar::abs_diff,
      scalar::count_le,
  };
  return table;
}

const KernelTable* avx2_table() {
#if defined(MVF_HAVE_AVX2)
  static const KernelTable table{
      Isa::kAvx2,          "avx2",         avx2::multiply,
      avx2::sum,           avx2::sum_squares, avx2::max_abs,
      avx2::squared_magnitude, avx2::gaussian_log_density, avx2::abs_diff,
      avx2::count_le,
  };
  return &table;
#else
  return nullptr;
#endif
}

bool cpu_supports_avx2() {
#if defined(MVF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable& select_table() {
  if (const char* forced = std::getenv("MVF_SIMD")) {
    if (std::string_view(forced) == "scalar") return scalar_table();
  }
  if (const KernelTable* t = avx2_table(); t != nullptr && cpu_supports_avx2()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select_table();
  return table;
}

}  // namespace mvf::kernels
