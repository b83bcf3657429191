#include <cmath>

#include "kernels_impl.hpp"

namespace mvf::kernels::scalar {

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_squares(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void squared_magnitude(const double* complex_pairs, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = complex_pairs[2 * i];
    const double im = complex_pairs[2 * i + 1];
    out[i] = re * re + im * im;
  }
}

void gaussian_log_density(const double* x, std::size_t n, double mean, double inv_two_var,
                          double log_norm, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mean;
    out[i] = std::isnan(d) ? 0.0 : log_norm - (d * d) * inv_two_var;
  }
}

void abs_diff(const double* x, double ref, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(x[i] - ref);
}

std::size_t count_le(const double* x, std::size_t n, double threshold) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += x[i] <= threshold ? 1 : 0;
  return c;
}

}  // namespace mvf::kernels::scalar
