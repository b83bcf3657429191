#include "mvf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "mvf/error.hpp"
#include "mvf/kernels.hpp"

namespace mvf {

std::size_t FrameSpec::window_length() const {
  if (!(f0 > 0.0) || !std::isfinite(f0)) throw PreconditionError("frame F0 must be positive");
  if (sample_rate <= 0) throw PreconditionError("sample rate must be positive");
  if (!(window_periods > 0.0)) throw PreconditionError("window_periods must be positive");
  auto n = static_cast<std::size_t>(std::lround(window_periods * sample_rate / f0));
  if (n % 2 == 0) ++n;
  if (n < 16) {
    throw PreconditionError("analysis window of " + std::to_string(n) +
                            " samples is shorter than 16");
  }
  return n;
}

std::vector<double> hanning(std::size_t length) {
  std::vector<double> w(length);
  const double denom = static_cast<double>(length + 1);
  for (std::size_t n = 0; n < length; ++n) {
    w[n] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(n + 1) / denom));
  }
  // Mirror so the window is exactly symmetric in floating point.
  for (std::size_t n = 0; n < length / 2; ++n) w[length - 1 - n] = w[n];
  return w;
}

std::vector<double> extract_frame(const AudioBuffer& audio, const FrameSpec& spec) {
  const std::size_t n = spec.window_length();
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  const auto total = static_cast<std::ptrdiff_t>(audio.samples.size());

  std::vector<double> raw(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::ptrdiff_t src = spec.center_sample - half + static_cast<std::ptrdiff_t>(i);
    if (src >= 0 && src < total) raw[i] = audio.samples[static_cast<std::size_t>(src)];
  }
  const std::vector<double> w = hanning(n);
  std::vector<double> out(n);
  kernels::multiply(raw, w, out);
  return out;
}

std::size_t dft_size_for(std::size_t window_length, int sample_rate) {
  const double need = std::max(8.0 * static_cast<double>(window_length),
                               static_cast<double>(sample_rate) / kMaxBinSpacingHz);
  std::size_t size = 1;
  while (static_cast<double>(size) < need) size <<= 1;
  return size;
}

double wrap_phase(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::remainder(radians, kTwoPi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

void unwrap_phase(std::span<double> phase) {
  if (phase.empty()) return;
  double previous_raw = phase[0];
  for (std::size_t k = 1; k < phase.size(); ++k) {
    const double raw = phase[k];
    phase[k] = phase[k - 1] + wrap_phase(raw - previous_raw);
    previous_raw = raw;
  }
}

FrameAnalysis analyze_frame(std::span<const double> windowed, int sample_rate, double f0) {
  if (windowed.empty()) throw PreconditionError("cannot analyze an empty frame");
  if (sample_rate <= 0) throw PreconditionError("sample rate must be positive");

  FrameAnalysis a;
  a.sample_rate = sample_rate;
  a.window_length = windowed.size();
  a.dft_size = dft_size_for(windowed.size(), sample_rate);
  a.bin_hz = static_cast<double>(sample_rate) / static_cast<double>(a.dft_size);
  a.f0_refined = f0;
  const std::size_t bins = a.dft_size / 2 + 1;

  const double peak = kernels::max_abs(windowed);
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    a.degenerate = true;
    a.amplitude_db.assign(bins, kAmplitudeFloorDb);
    a.unwrapped_phase.assign(bins, 0.0);
    a.group_delay.assign(bins, 0.0);
    return a;
  }

  std::vector<double> normalized(windowed.size());
  for (std::size_t i = 0; i < windowed.size(); ++i) {
    normalized[i] = static_cast<double>(static_cast<float>(windowed[i] / peak));
  }

  const std::vector<double> spectrum = detail::real_dft(normalized, a.dft_size);
  std::vector<double> power(bins);
  kernels::squared_magnitude(spectrum, power);

  const double gain_db = 20.0 * std::log10(peak);
  a.amplitude_db.resize(bins);
  a.unwrapped_phase.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double db = power[k] > 0.0 ? 10.0 * std::log10(power[k]) + gain_db : kAmplitudeFloorDb;
    a.amplitude_db[k] = std::max(db, kAmplitudeFloorDb);
    a.unwrapped_phase[k] = std::atan2(spectrum[2 * k + 1], spectrum[2 * k]);
  }
  unwrap_phase(a.unwrapped_phase);

  const double radians_per_bin = 2.0 * std::numbers::pi * a.bin_hz;
  a.group_delay.resize(bins);
  for (std::size_t k = 0; k + 1 < bins; ++k) {
    a.group_delay[k] = -(a.unwrapped_phase[k + 1] - a.unwrapped_phase[k]) / radians_per_bin;
  }
  a.group_delay[bins - 1] = bins > 1 ? a.group_delay[bins - 2] : 0.0;
  return a;
}

}  // namespace mvf
