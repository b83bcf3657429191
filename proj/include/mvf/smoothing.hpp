#pragma once

#include "mvf/types.hpp"

namespace mvf {

enum class SmoothMode { kNone, kMedian, kMovingAverage };

SmoothMode parse_smooth_mode(std::string_view text);  // "none" | "median" | "ma"
std::string_view to_string(SmoothMode mode);

struct SmootherConfig {
  SmoothMode mode = SmoothMode::kMedian;
  int median_order = 5;        // frames, odd
  double ma_halfwidth = 0.030; // seconds on each side

  /// Throws ValidationError for an even or non-positive median order or a
  /// negative half-width.
  void validate() const;
};

/// Smooths voiced frames using only voiced neighbours from the same voiced
/// run. Near a run boundary or contour edge the window shrinks symmetrically
/// so it stays centred on the frame (the first and last frame of a run keep
/// their value). Unvoiced frames pass through untouched.
///
/// Voiced frames holding NaN are undecidable: they contribute nothing and are
/// filled from the window's statistic, else from the nearest decided frame in
/// the run, else 0. With SmoothMode::kNone only this filling happens.
MvfContour smooth(const MvfContour& contour, const SmootherConfig& cfg);

}  // namespace mvf
