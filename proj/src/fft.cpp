#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <stdexcept>

namespace mvf::detail {
namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t count) {
  void* p = fftw_malloc(sizeof(T) * std::max<std::size_t>(count, 1));
  if (p == nullptr) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwFree>(static_cast<T*>(p));
}

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// The FFTW planner is not thread-safe; execution of an existing plan on new
// (equally aligned) arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [size, plans] : plans_) {
      if (plans.forward != nullptr) fftw_destroy_plan(plans.forward);
      if (plans.inverse != nullptr) fftw_destroy_plan(plans.inverse);
    }
  }

  fftw_plan forward(std::size_t n) {
    std::lock_guard lock(mutex_);
    PlanPair& p = plans_[n];
    if (p.forward == nullptr) {
      auto in = fftw_buffer<double>(n);
      auto out = fftw_buffer<fftw_complex>(n / 2 + 1);
      p.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
      if (p.forward == nullptr) throw std::runtime_error("FFTW could not plan a forward DFT");
    }
    return p.forward;
  }

  fftw_plan inverse(std::size_t n) {
    std::lock_guard lock(mutex_);
    PlanPair& p = plans_[n];
    if (p.inverse == nullptr) {
      auto in = fftw_buffer<fftw_complex>(n / 2 + 1);
      auto out = fftw_buffer<double>(n);
      p.inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
      if (p.inverse == nullptr) throw std::runtime_error("FFTW could not plan an inverse DFT");
    }
    return p.inverse;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

std::vector<double> real_dft(std::span<const double> input, std::size_t size) {
  if (input.size() > size) throw std::invalid_argument("real_dft: input longer than DFT size");
  const std::size_t bins = size / 2 + 1;
  auto in = fftw_buffer<double>(size);
  auto out = fftw_buffer<fftw_complex>(bins);
  std::copy(input.begin(), input.end(), in.get());
  std::fill(in.get() + input.size(), in.get() + size, 0.0);
  fftw_execute_dft_r2c(cache().forward(size), in.get(), out.get());
  std::vector<double> pairs(2 * bins);
  for (std::size_t k = 0; k < bins; ++k) {
    pairs[2 * k] = out[k][0];
    pairs[2 * k + 1] = out[k][1];
  }
  return pairs;
}

std::vector<double> inverse_real_dft(std::span<const double> complex_pairs, std::size_t size) {
  const std::size_t bins = size / 2 + 1;
  if (complex_pairs.size() != 2 * bins) {
    throw std::invalid_argument("inverse_real_dft: spectrum length does not match DFT size");
  }
  auto in = fftw_buffer<fftw_complex>(bins);
  auto out = fftw_buffer<double>(size);
  for (std::size_t k = 0; k < bins; ++k) {
    in[k][0] = complex_pairs[2 * k];
    in[k][1] = complex_pairs[2 * k + 1];
  }
  fftw_execute_dft_c2r(cache().inverse(size), in.get(), out.get());
  return std::vector<double>(out.get(), out.get() + size);
}

}  // namespace mvf::detail
