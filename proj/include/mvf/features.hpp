#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mvf/harmonics.hpp"
#include "mvf/spectral.hpp"
#include "mvf/types.hpp"

namespace mvf {

/// Harmonicity measurements at one candidate; any subset may be present.
struct FeatureVector {
  std::optional<double> as_db;
  std::optional<double> ihpc_s;
  std::optional<double> icpc_rad;

  std::optional<double> get(Feature f) const;
  void set(Feature f, double value);
  bool any() const { return as_db || ihpc_s || icpc_rad; }
  /// Copy with every feature outside `keep` cleared.
  FeatureVector restricted_to(FeatureSet keep) const;

  bool operator==(const FeatureVector&) const = default;
};

/// phi_1 - phi_2 per bin between a frame and the same frame one pitch period
/// later, both referenced to their own window center, with the sub-sample part
/// of the period compensated on phi_2.
struct DifferentialPhase {
  std::vector<double> delta_phi;
  double bin_hz = 0.0;
  bool degenerate = false;
};

/// Local harmonic-to-noise ratio in dB: mean level within omega0/5 of the
/// peak minus mean level over the rest of the +-omega0/2 span (clamped to
/// [0, Nyquist]). Absent if either bin set is empty.
std::optional<double> feature_as(const FrameAnalysis& frame, const HarmonicCandidate& cand,
                                 double omega0_hz);

/// GD(omega_{p+1}) - GD(omega_p) in seconds, sampled at the peak bins.
double feature_ihpc(const FrameAnalysis& frame, const HarmonicCandidate& cand_p,
                    const HarmonicCandidate& cand_next);

/// Runs the delayed-frame analysis. The overload taking `current` reuses an
/// existing analysis of `spec` instead of recomputing it.
DifferentialPhase differential_phase(const AudioBuffer& audio, const FrameSpec& spec);
DifferentialPhase differential_phase(const AudioBuffer& audio, const FrameSpec& spec,
                                     const FrameAnalysis& current);

/// wrap(dphi(omega_{p+1}) - dphi(omega_p)) in (-pi, pi].
double feature_icpc(const DifferentialPhase& dphi, const HarmonicCandidate& cand_p,
                    const HarmonicCandidate& cand_next);

/// Which candidate of the pair (p, p+1) receives the pair features IHPC/ICPC.
enum class PairAnchor {
  kLower,  // candidate p; the last candidate carries AS only
  kUpper,  // candidate p+1; the first candidate carries AS only
};

/// Features for every candidate. `dphi` may be null when ICPC is not requested.
std::vector<FeatureVector> compute_features(const FrameAnalysis& frame,
                                            std::span<const HarmonicCandidate> candidates,
                                            const DifferentialPhase* dphi, FeatureSet enabled,
                                            PairAnchor anchor);

}  // namespace mvf
