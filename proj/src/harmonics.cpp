#include "mvf/harmonics.hpp"

#include <algorithm>
#include <cmath>

#include "mvf/error.hpp"

namespace mvf {

CandidateSet detect_candidates(const FrameAnalysis& frame, double f0_initial,
                               double half_width_hz) {
  if (!(f0_initial > 0.0) || !std::isfinite(f0_initial)) {
    throw PreconditionError("initial F0 must be positive");
  }
  CandidateSet set;
  set.omega0_hz = f0_initial;
  if (frame.degenerate || frame.bins() == 0) return set;

  const double nyquist = frame.nyquist();
  const std::size_t last_bin = frame.bins() - 1;
  double omega0 = f0_initial;
  for (int p = 1;; ++p) {
    const double center = p * omega0;
    if (center + half_width_hz > nyquist) break;
    const double lo_hz = std::max(0.0, center - half_width_hz);
    auto lo = static_cast<std::size_t>(std::ceil(lo_hz / frame.bin_hz));
    auto hi = static_cast<std::size_t>(std::floor((center + half_width_hz) / frame.bin_hz));
    hi = std::min(hi, last_bin);
    if (lo > hi) lo = hi = static_cast<std::size_t>(std::lround(center / frame.bin_hz));

    std::size_t best = lo;
    for (std::size_t k = lo + 1; k <= hi; ++k) {
      if (frame.amplitude_db[k] > frame.amplitude_db[best]) best = k;
    }
    HarmonicCandidate c;
    c.index = p;
    c.bin = best;
    c.omega_hz = frame.bin_frequency(best);
    c.amplitude_db = frame.amplitude_db[best];
    // A peak at DC cannot define a fundamental; keep the previous estimate.
    if (c.omega_hz > 0.0) omega0 = c.omega_hz / p;
    c.omega0_hz = omega0;
    set.candidates.push_back(c);
  }
  set.omega0_hz = omega0;

  const bool monotone = std::adjacent_find(set.candidates.begin(), set.candidates.end(),
                                           [](const auto& a, const auto& b) {
                                             return b.omega_hz <= a.omega_hz;
                                           }) == set.candidates.end();
  if (!monotone) {
    std::stable_sort(set.candidates.begin(), set.candidates.end(),
                     [](const auto& a, const auto& b) { return a.omega_hz < b.omega_hz; });
    set.candidates.erase(std::unique(set.candidates.begin(), set.candidates.end(),
                                     [](const auto& a, const auto& b) { return a.bin == b.bin; }),
                         set.candidates.end());
    for (std::size_t i = 0; i < set.candidates.size(); ++i) {
      set.candidates[i].index = static_cast<int>(i + 1);
    }
    set.resorted = true;
  }
  return set;
}

}  // namespace mvf
