#include <immintrin.h>

#include <bit>
#include <cmath>

#include "kernels_impl.hpp"

// Compiled with -mavx2 -mfma -ffp-contract=off: the scalar tails below must
// round exactly like the reference kernels.

namespace mvf::kernels::avx2 {
namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

double sum(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  double total = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) total += x[i];
  return total;
}

double sum_squares(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(x + i);
    const __m256d v1 = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(v0, v0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(v1, v1));
  }
  double total = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) total += x[i] * x[i];
  return total;
}

double max_abs(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i));
    m = _mm256_max_pd(a, m);  // NaN lanes keep the running max
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double best = 0.0;
  for (double v : lanes) {
    if (v > best) best = v;
  }
  for (; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > best) best = a;
  }
  return best;
}

void squared_magnitude(const double* complex_pairs, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c01 = _mm256_loadu_pd(complex_pairs + 2 * i);
    const __m256d c23 = _mm256_loadu_pd(complex_pairs + 2 * i + 4);
    // hadd yields [|c0|^2, |c2|^2, |c1|^2, |c3|^2]
    const __m256d mixed = _mm256_hadd_pd(_mm256_mul_pd(c01, c01), _mm256_mul_pd(c23, c23));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(mixed, 0b11011000));
  }
  for (; i < n; ++i) {
    const double re = complex_pairs[2 * i];
    const double im = complex_pairs[2 * i + 1];
    out[i] = re * re + im * im;
  }
}

void gaussian_log_density(const double* x, std::size_t n, double mean, double inv_two_var,
                          double log_norm, double* out) {
  const __m256d vmean = _mm256_set1_pd(mean);
  const __m256d vinv = _mm256_set1_pd(inv_two_var);
  const __m256d vnorm = _mm256_set1_pd(log_norm);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmean);
    const __m256d v = _mm256_sub_pd(vnorm, _mm256_mul_pd(_mm256_mul_pd(d, d), vinv));
    const __m256d missing = _mm256_cmp_pd(d, d, _CMP_UNORD_Q);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(v, zero, missing));
  }
  for (; i < n; ++i) {
    const double d = x[i] - mean;
    out[i] = std::isnan(d) ? 0.0 : log_norm - (d * d) * inv_two_var;
  }
}

void abs_diff(const double* x, double ref, double* out, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d vref = _mm256_set1_pd(ref);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(x + i), vref)));
  }
  for (; i < n; ++i) out[i] = std::fabs(x[i] - ref);
}

std::size_t count_le(const double* x, std::size_t n, double threshold) {
  const __m256d vt = _mm256_set1_pd(threshold);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), vt, _CMP_LE_OQ));
    c += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(mask)));
  }
  for (; i < n; ++i) c += x[i] <= threshold ? 1 : 0;
  return c;
}

}  // namespace mvf::kernels::avx2
