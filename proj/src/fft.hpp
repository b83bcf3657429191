#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mvf::detail {

/// Real-to-complex DFT of `input` zero-padded to `size` points. Returns the
/// size / 2 + 1 non-negative-frequency bins as interleaved (re, im) pairs.
/// Plans are cached per size and shared across threads.
std::vector<double> real_dft(std::span<const double> input, std::size_t size);

/// Inverse of real_dft without the 1/size normalization.
std::vector<double> inverse_real_dft(std::span<const double> complex_pairs, std::size_t size);

}  // namespace mvf::detail
