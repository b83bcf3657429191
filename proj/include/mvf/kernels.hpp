#pragma once

// Data-parallel inner loops shared by the analysis chain. Each kernel has a
// scalar reference implementation and, on x86-64, an AVX2 variant selected at
// runtime. Elementwise kernels and count_le are bit-identical across variants;
// reductions (sum, sum_squares) differ only by summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace mvf::kernels {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;
  // out[i] = a[i] * b[i]
  void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  // interleaved complex (re, im) pairs -> re*re + im*im
  void (*squared_magnitude)(const double* complex_pairs, double* out, std::size_t n);
  // out[i] = log_norm - (x[i] - mean)^2 * inv_two_var; NaN inputs yield 0
  void (*gaussian_log_density)(const double* x, std::size_t n, double mean,
                               double inv_two_var, double log_norm, double* out);
  // out[i] = |x[i] - ref|
  void (*abs_diff)(const double* x, double ref, double* out, std::size_t n);
  // number of x[i] <= threshold
  std::size_t (*count_le)(const double* x, std::size_t n, double threshold);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();
bool cpu_supports_avx2();

/// Best table for this CPU. `MVF_SIMD=scalar` in the environment forces the
/// scalar reference. Chosen once per process.
const KernelTable& active();

inline void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  active().multiply(a.data(), b.data(), out.data(), out.size());
}
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double sum_squares(std::span<const double> x) {
  return active().sum_squares(x.data(), x.size());
}
inline double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }
inline void squared_magnitude(std::span<const double> complex_pairs, std::span<double> out) {
  active().squared_magnitude(complex_pairs.data(), out.data(), out.size());
}
inline void gaussian_log_density(std::span<const double> x, double mean, double inv_two_var,
                                 double log_norm, std::span<double> out) {
  active().gaussian_log_density(x.data(), x.size(), mean, inv_two_var, log_norm, out.data());
}
inline void abs_diff(std::span<const double> x, double ref, std::span<double> out) {
  active().abs_diff(x.data(), ref, out.data(), x.size());
}
inline std::size_t count_le(std::span<const double> x, double threshold) {
  return active().count_le(x.data(), x.size(), threshold);
}

}  // namespace mvf::kernels
