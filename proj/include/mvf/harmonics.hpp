#pragma once

#include <cstddef>
#include <vector>

#include "mvf/spectral.hpp"

namespace mvf {

inline constexpr double kPeakSearchHalfWidthHz = 10.0;

struct HarmonicCandidate {
  int index = 0;            // p, 1-based
  double omega_hz = 0.0;    // frequency of the peak bin
  std::size_t bin = 0;
  double amplitude_db = 0.0;
  double omega0_hz = 0.0;   // running fundamental after this detection, omega_hz / p
};

struct CandidateSet {
  std::vector<HarmonicCandidate> candidates;
  double omega0_hz = 0.0;  // final running fundamental
  bool resorted = false;   // detections came out non-monotone and were re-sorted

  std::size_t size() const { return candidates.size(); }
  bool empty() const { return candidates.empty(); }
};

/// Picks the amplitude maximum within +-half_width_hz of p * omega0 for
/// p = 1, 2, ... while p * omega0 + half_width_hz stays at or below Nyquist,
/// updating omega0 to omega_p / p after every pick. Ties go to the lowest bin.
/// Returns an empty set for degenerate frames or when no window fits.
CandidateSet detect_candidates(const FrameAnalysis& frame, double f0_initial,
                               double half_width_hz = kPeakSearchHalfWidthHz);

}  // namespace mvf
