#include "mvf/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mvf/error.hpp"

namespace mvf {

SmoothMode parse_smooth_mode(std::string_view text) {
  if (text == "none") return SmoothMode::kNone;
  if (text == "median") return SmoothMode::kMedian;
  if (text == "ma" || text == "moving_average") return SmoothMode::kMovingAverage;
  throw ValidationError("unknown smoothing mode '" + std::string(text) + "'");
}

std::string_view to_string(SmoothMode mode) {
  switch (mode) {
    case SmoothMode::kNone:
      return "none";
    case SmoothMode::kMedian:
      return "median";
    case SmoothMode::kMovingAverage:
      return "ma";
  }
  return "?";
}

void SmootherConfig::validate() const {
  if (median_order < 1 || median_order % 2 == 0) {
    throw ValidationError("median order must be odd and >= 1, got " + std::to_string(median_order));
  }
  if (!(ma_halfwidth >= 0.0) || !std::isfinite(ma_halfwidth)) {
    throw ValidationError("moving-average half-width must be >= 0");
  }
}

namespace {

double median_of(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

MvfContour smooth(const MvfContour& contour, const SmootherConfig& cfg) {
  cfg.validate();
  const std::size_t n = contour.size();
  if (contour.voiced.size() != n) throw ValidationError("contour voicing mask has the wrong length");

  std::size_t half = 0;
  switch (cfg.mode) {
    case SmoothMode::kNone:
      break;
    case SmoothMode::kMedian:
      half = static_cast<std::size_t>(cfg.median_order / 2);
      break;
    case SmoothMode::kMovingAverage:
      if (!(contour.frame_shift > 0.0)) throw ValidationError("contour frame shift must be positive");
      half = static_cast<std::size_t>(std::floor(cfg.ma_halfwidth / contour.frame_shift + 1e-9));
      break;
  }

  MvfContour out = contour;
  std::vector<double> window;
  std::size_t i = 0;
  while (i < n) {
    if (!contour.voiced[i]) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < n && contour.voiced[run_end]) ++run_end;

    for (std::size_t k = i; k < run_end; ++k) {
      const bool decided = std::isfinite(contour.values[k]);
      if (cfg.mode == SmoothMode::kNone && decided) continue;
      const std::size_t reach = std::min({half, k - i, run_end - 1 - k});
      const std::size_t lo = k - reach;
      const std::size_t hi = k + reach;
      window.clear();
      for (std::size_t j = lo; j <= hi; ++j) {
        if (std::isfinite(contour.values[j])) window.push_back(contour.values[j]);
      }
      if (!window.empty()) {
        out.values[k] = cfg.mode == SmoothMode::kMovingAverage ? mean_of(window) : median_of(window);
        continue;
      }
      // Undecidable with no decided neighbour in the window.
      double fill = 0.0;
      for (std::size_t d = 1; d < run_end - i; ++d) {
        if (k >= i + d && std::isfinite(contour.values[k - d])) {
          fill = contour.values[k - d];
          break;
        }
        if (k + d < run_end && std::isfinite(contour.values[k + d])) {
          fill = contour.values[k + d];
          break;
        }
      }
      out.values[k] = fill;
    }
    i = run_end;
  }
  return out;
}

}  // namespace mvf
