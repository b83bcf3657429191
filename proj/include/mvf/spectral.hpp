#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mvf/types.hpp"

namespace mvf {

inline constexpr double kAmplitudeFloorDb = -300.0;
inline constexpr double kMaxBinSpacingHz = 2.5;

/// Where and how long one pitch-synchronous analysis window is.
struct FrameSpec {
  std::ptrdiff_t center_sample = 0;
  double f0 = 0.0;
  double window_periods = 4.0;
  int sample_rate = 0;

  /// round(window_periods * fs / f0), bumped to the next odd length.
  /// Throws PreconditionError for f0 <= 0 or a window shorter than 16 samples.
  std::size_t window_length() const;
};

/// Symmetric Hanning window w[n] = 0.5 (1 - cos(2 pi (n + 1) / (N + 1))).
/// Both ends are non-zero and the peak sits on the center sample for odd N.
std::vector<double> hanning(std::size_t length);

/// Windowed samples around spec.center_sample; samples outside the buffer read as 0.
std::vector<double> extract_frame(const AudioBuffer& audio, const FrameSpec& spec);

/// One analysis instant. All per-bin sequences have dft_size / 2 + 1 entries.
/// Phase is referenced to the first sample of the window.
struct FrameAnalysis {
  std::vector<double> amplitude_db;
  std::vector<double> unwrapped_phase;  // radians
  std::vector<double> group_delay;      // seconds
  double bin_hz = 0.0;
  double f0_refined = 0.0;
  std::size_t dft_size = 0;
  std::size_t window_length = 0;
  int sample_rate = 0;
  bool degenerate = false;

  std::size_t bins() const { return amplitude_db.size(); }
  double nyquist() const { return 0.5 * sample_rate; }
  double bin_frequency(std::size_t bin) const { return static_cast<double>(bin) * bin_hz; }
};

/// Smallest power of two >= max(8 * window_length, sample_rate / 2.5).
std::size_t dft_size_for(std::size_t window_length, int sample_rate);

/// Zero-padded DFT of a windowed frame.
///
/// The frame is normalized by its peak magnitude and rounded to single
/// precision before the transform, so phase and group delay depend only on the
/// waveform's shape: any positive gain applied to the input gives bit-identical
/// phase. The removed gain is added back to amplitude_db. An all-zero frame is
/// returned at the amplitude floor with zero phase and `degenerate` set.
FrameAnalysis analyze_frame(std::span<const double> windowed, int sample_rate, double f0);

/// Wraps into (-pi, pi].
double wrap_phase(double radians);

/// In-place unwrap: successive differences end up in (-pi, pi].
void unwrap_phase(std::span<double> phase);

}  // namespace mvf
