#include "mvf/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mvf/error.hpp"
#include "mvf/kernels.hpp"

namespace mvf {

std::optional<double> FeatureVector::get(Feature f) const {
  switch (f) {
    case Feature::kAs:
      return as_db;
    case Feature::kIhpc:
      return ihpc_s;
    case Feature::kIcpc:
      return icpc_rad;
  }
  return std::nullopt;
}

void FeatureVector::set(Feature f, double value) {
  switch (f) {
    case Feature::kAs:
      as_db = value;
      break;
    case Feature::kIhpc:
      ihpc_s = value;
      break;
    case Feature::kIcpc:
      icpc_rad = wrap_phase(value);
      break;
  }
}

FeatureVector FeatureVector::restricted_to(FeatureSet keep) const {
  FeatureVector out;
  for (Feature f : kAllFeatures) {
    if (keep.contains(f)) {
      if (auto v = get(f)) out.set(f, *v);
    }
  }
  return out;
}

std::optional<double> feature_as(const FrameAnalysis& frame, const HarmonicCandidate& cand,
                                 double omega0_hz) {
  if (frame.bins() == 0 || !(omega0_hz > 0.0)) return std::nullopt;
  const double nyquist = frame.nyquist();
  const double last = static_cast<double>(frame.bins() - 1);
  auto bin_ceil = [&](double hz) {
    return static_cast<std::ptrdiff_t>(std::ceil(std::clamp(hz, 0.0, nyquist) / frame.bin_hz - 1e-9));
  };
  auto bin_floor = [&](double hz) {
    return static_cast<std::ptrdiff_t>(
        std::min(std::floor(std::clamp(hz, 0.0, nyquist) / frame.bin_hz + 1e-9), last));
  };

  const std::ptrdiff_t span_lo = bin_ceil(cand.omega_hz - omega0_hz / 2.0);
  const std::ptrdiff_t span_hi = bin_floor(cand.omega_hz + omega0_hz / 2.0);
  const std::ptrdiff_t lobe_lo = std::max(span_lo, bin_ceil(cand.omega_hz - omega0_hz / 5.0));
  const std::ptrdiff_t lobe_hi = std::min(span_hi, bin_floor(cand.omega_hz + omega0_hz / 5.0));
  if (lobe_hi < lobe_lo) return std::nullopt;
  const std::ptrdiff_t span_count = span_hi - span_lo + 1;
  const std::ptrdiff_t lobe_count = lobe_hi - lobe_lo + 1;
  const std::ptrdiff_t rest_count = span_count - lobe_count;
  if (rest_count <= 0) return std::nullopt;

  const std::span<const double> db(frame.amplitude_db);
  const double lobe_sum = kernels::sum(db.subspan(static_cast<std::size_t>(lobe_lo),
                                                  static_cast<std::size_t>(lobe_count)));
  const double left_sum = kernels::sum(db.subspan(static_cast<std::size_t>(span_lo),
                                                  static_cast<std::size_t>(lobe_lo - span_lo)));
  const double right_sum = kernels::sum(db.subspan(static_cast<std::size_t>(lobe_hi + 1),
                                                   static_cast<std::size_t>(span_hi - lobe_hi)));
  return lobe_sum / static_cast<double>(lobe_count) -
         (left_sum + right_sum) / static_cast<double>(rest_count);
}

namespace {

void require_consecutive(const HarmonicCandidate& a, const HarmonicCandidate& b) {
  if (b.index != a.index + 1) {
    throw PreconditionError("pair features need consecutive candidates");
  }
}

}  // namespace

double feature_ihpc(const FrameAnalysis& frame, const HarmonicCandidate& cand_p,
                    const HarmonicCandidate& cand_next) {
  require_consecutive(cand_p, cand_next);
  return frame.group_delay.at(cand_next.bin) - frame.group_delay.at(cand_p.bin);
}

DifferentialPhase differential_phase(const AudioBuffer& audio, const FrameSpec& spec) {
  const std::vector<double> current = extract_frame(audio, spec);
  return differential_phase(audio, spec, analyze_frame(current, spec.sample_rate, spec.f0));
}

DifferentialPhase differential_phase(const AudioBuffer& audio, const FrameSpec& spec,
                                     const FrameAnalysis& current) {
  const std::size_t n = spec.window_length();
  const double period_samples = static_cast<double>(spec.sample_rate) / spec.f0;
  const auto shift = static_cast<std::ptrdiff_t>(std::lround(period_samples));
  const double residual = period_samples - static_cast<double>(shift);

  FrameSpec delayed = spec;
  delayed.center_sample = spec.center_sample + shift;
  const std::vector<double> next = extract_frame(audio, delayed);
  const FrameAnalysis later = analyze_frame(next, spec.sample_rate, spec.f0);

  DifferentialPhase out;
  out.bin_hz = current.bin_hz;
  out.degenerate = current.degenerate || later.degenerate;
  const std::size_t bins = current.bins();
  out.delta_phi.resize(bins);
  const double fs = static_cast<double>(spec.sample_rate);
  const double half_window = static_cast<double>(n - 1) / 2.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const double omega = 2.0 * std::numbers::pi * current.bin_frequency(k);  // rad/s
    const double to_center = omega * half_window / fs;
    const double phi1 = current.unwrapped_phase[k] + to_center;
    const double phi2 = later.unwrapped_phase[k] + to_center + omega * residual / fs;
    out.delta_phi[k] = phi1 - phi2;
  }
  return out;
}

double feature_icpc(const DifferentialPhase& dphi, const HarmonicCandidate& cand_p,
                    const HarmonicCandidate& cand_next) {
  require_consecutive(cand_p, cand_next);
  return wrap_phase(dphi.delta_phi.at(cand_next.bin) - dphi.delta_phi.at(cand_p.bin));
}

std::vector<FeatureVector> compute_features(const FrameAnalysis& frame,
                                            std::span<const HarmonicCandidate> candidates,
                                            const DifferentialPhase* dphi, FeatureSet enabled,
                                            PairAnchor anchor) {
  std::vector<FeatureVector> out(candidates.size());
  if (enabled.contains(Feature::kIcpc) && dphi == nullptr) {
    throw PreconditionError("ICPC requested without a differential phase");
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (enabled.contains(Feature::kAs)) {
      if (auto v = feature_as(frame, candidates[i], candidates[i].omega0_hz)) {
        out[i].as_db = *v;
      }
    }
  }
  for (std::size_t i = 0; i + 1 < candidates.size(); ++i) {
    const HarmonicCandidate& lo = candidates[i];
    const HarmonicCandidate& hi = candidates[i + 1];
    if (hi.index != lo.index + 1) continue;
    FeatureVector& target = anchor == PairAnchor::kLower ? out[i] : out[i + 1];
    if (enabled.contains(Feature::kIhpc)) target.ihpc_s = feature_ihpc(frame, lo, hi);
    if (enabled.contains(Feature::kIcpc)) target.icpc_rad = feature_icpc(*dphi, lo, hi);
  }
  return out;
}

}  // namespace mvf
