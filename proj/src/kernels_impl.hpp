#pragma once

#include <cstddef>

#include "mvf/kernels.hpp"

namespace mvf::kernels {

namespace scalar {
void multiply(const double* a, const double* b, double* out, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_squares(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
void squared_magnitude(const double* complex_pairs, double* out, std::size_t n);
void gaussian_log_density(const double* x, std::size_t n, double mean, double inv_two_var,
                          double log_norm, double* out);
void abs_diff(const double* x, double ref, double* out, std::size_t n);
std::size_t count_le(const double* x, std::size_t n, double threshold);
}  // namespace scalar

#if defined(MVF_HAVE_AVX2)
namespace avx2 {
void multiply(const double* a, const double* b, double* out, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_squares(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
void squared_magnitude(const double* complex_pairs, double* out, std::size_t n);
void gaussian_log_density(const double* x, std::size_t n, double mean, double inv_two_var,
                          double log_norm, double* out);
void abs_diff(const double* x, double ref, double* out, std::size_t n);
std::size_t count_le(const double* x, std::size_t n, double threshold);
}  // namespace avx2
#endif

}  // namespace mvf::kernels
