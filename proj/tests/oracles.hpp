#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mvf/eval.hpp"
#include "mvf/features.hpp"
#include "mvf/harmonics.hpp"
#include "mvf/smoothing.hpp"
#include "mvf/spectral.hpp"
#include "mvf/types.hpp"

namespace mvf::test {

/// Exhaustive argmax over m in [0, N] with ties to the larger m.
inline std::size_t brute_force_m(const std::vector<double>& h1, const std::vector<double>& h0) {
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m <= h1.size(); ++m) {
    double v = 0.0;
    for (std::size_t k = 0; k < m; ++k) v += h1[k];
    for (std::size_t k = m; k < h0.size(); ++k) v += h0[k];
    if (v >= best_value) {
      best_value = v;
      best = m;
    }
  }
  return best;
}

/// Direct per-frame statistic over voiced, decided neighbours of the same run.
inline MvfContour smoothing_oracle(const MvfContour& c, SmoothMode mode, int half) {
  MvfContour out = c;
  const int n = static_cast<int>(c.size());
  for (int k = 0; k < n; ++k) {
    if (!c.voiced[k]) continue;
    int a = k, b = k;
    while (a > 0 && c.voiced[a - 1]) --a;
    while (b + 1 < n && c.voiced[b + 1]) ++b;
    if (mode == SmoothMode::kNone && !std::isnan(c.values[k])) continue;
    std::vector<double> w;
    const int reach = std::min({half, k - a, b - k});
    for (int j = k - reach; j <= k + reach; ++j) {
      if (!std::isnan(c.values[j])) w.push_back(c.values[j]);
    }
    if (!w.empty()) {
      std::sort(w.begin(), w.end());
      if (mode == SmoothMode::kMovingAverage) {
        double s = 0.0;
        for (double v : w) s += v;
        out.values[k] = s / static_cast<double>(w.size());
      } else {
        const std::size_t m = w.size();
        out.values[k] = m % 2 ? w[m / 2] : (w[m / 2 - 1] + w[m / 2]) / 2.0;
      }
      continue;
    }
    double fill = 0.0;  // nearest decided frame in the run, earlier one on ties
    for (int d = 1; d <= b - a; ++d) {
      if (k - d >= a && !std::isnan(c.values[k - d])) {
        fill = c.values[k - d];
        break;
      }
      if (k + d <= b && !std::isnan(c.values[k + d])) {
        fill = c.values[k + d];
        break;
      }
    }
    out.values[k] = fill;
  }
  return out;
}

/// Up to 80 frames of voiced runs with NaN holes and repeated values.
inline MvfContour random_contour(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 80);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> hz(500.0, 8000.0);
  MvfContour c;
  c.frame_shift = 0.01;
  const int n = len(rng);
  bool voiced = u(rng) < 0.7;
  for (int i = 0; i < n; ++i) {
    if (u(rng) < 0.15) voiced = !voiced;
    c.voiced.push_back(voiced);
    if (!voiced) {
      c.values.push_back(0.0);
    } else if (u(rng) < 0.1) {
      c.values.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      c.values.push_back(u(rng) < 0.3 ? std::round(hz(rng) / 500.0) * 500.0 : hz(rng));
    }
  }
  return c;
}

/// Scored files with errors that often land exactly on grid thresholds.
inline std::vector<ScoredFile> random_scored_corpus(std::mt19937_64& rng, std::size_t files) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(5, 60);
  std::vector<ScoredFile> out;
  for (std::size_t j = 0; j < files; ++j) {
    ScoredFile f;
    f.id = "file" + std::to_string(j);
    f.truth_hz = 1000.0 * static_cast<double>(1 + j % 7);
    f.voice_class = j % 2 ? VoiceClass::kHighPitch : VoiceClass::kLowPitch;
    f.estimate.frame_shift = 0.01;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      const bool voiced = i == 0 || u(rng) < 0.8;
      f.estimate.voiced.push_back(voiced);
      const double err = u(rng) < 0.3 ? 10.0 * std::floor(u(rng) * 200.0) : 2500.0 * (u(rng) - 0.5);
      f.estimate.values.push_back(voiced ? f.truth_hz + (u(rng) < 0.5 ? err : -err) : 0.0);
    }
    out.push_back(f);
  }
  return out;
}

/// Per-threshold, per-frame accuracy on the grid k * theta_max / (steps - 1).
inline std::vector<double> naive_accuracy(const std::vector<ScoredFile>& files,
                                          const std::string& label, double theta_max,
                                          std::size_t steps) {
  std::vector<double> acc;
  for (std::size_t k = 0; k < steps; ++k) {
    const double theta = theta_max * static_cast<double>(k) / static_cast<double>(steps - 1);
    long hits = 0, total = 0;
    for (const ScoredFile& f : files) {
      if (label != "all" && std::string(to_string(f.voice_class)) != label) continue;
      for (std::size_t i = 0; i < f.estimate.size(); ++i) {
        if (!f.estimate.voiced[i]) continue;
        ++total;
        if (std::fabs(f.estimate.values[i] - f.truth_hz) <= theta) ++hits;
      }
    }
    acc.push_back(static_cast<double>(hits) / static_cast<double>(total));
  }
  return acc;
}

/// Trapezoidal area under naive_accuracy divided by theta_max.
inline double naive_auc(const std::vector<ScoredFile>& files, const std::string& label,
                        double theta_max, std::size_t steps) {
  const std::vector<double> acc = naive_accuracy(files, label, theta_max, steps);
  double area = 0.0;
  const double step = theta_max / static_cast<double>(steps - 1);
  for (std::size_t k = 0; k + 1 < steps; ++k) area += (acc[k] + acc[k + 1]) / 2.0 * step;
  return area / theta_max;
}

/// One analysis instant with candidates and the delayed-frame phase.
struct FrameProbe {
  FrameSpec spec;
  FrameAnalysis frame;
  CandidateSet set;
  DifferentialPhase dphi;
};

inline FrameProbe probe_frame(const AudioBuffer& a, double f0, std::ptrdiff_t center) {
  FrameProbe r;
  r.spec.sample_rate = a.sample_rate;
  r.spec.f0 = f0;
  r.spec.center_sample = center;
  r.frame = analyze_frame(extract_frame(a, r.spec), a.sample_rate, f0);
  r.set = detect_candidates(r.frame, f0);
  r.dphi = differential_phase(a, r.spec, r.frame);
  return r;
}

}  // namespace mvf::test
