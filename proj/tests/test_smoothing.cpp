#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mvf/error.hpp"
#include "mvf/smoothing.hpp"
#include "oracles.hpp"

using namespace mvf;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MvfContour make(std::vector<double> values, std::vector<bool> voiced = {}) {
  MvfContour c;
  c.frame_shift = 0.01;
  if (voiced.empty()) {
    for (double v : values) voiced.push_back(std::isnan(v) || v > 0.0);
  }
  c.values = std::move(values);
  c.voiced = std::move(voiced);
  return c;
}

void check_equal(const MvfContour& got, const MvfContour& want) {
  REQUIRE(got.size() == want.size());
  CHECK(got.voiced == want.voiced);
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got.values[i] == doctest::Approx(want.values[i]).epsilon(1e-12));
  }
}

}  // namespace

TEST_CASE("median removes an isolated spike") {
  const MvfContour out = smooth(make({3000, 3000, 7000, 3000, 3000}), {});
  CHECK(out.values[2] == 3000.0);
}

TEST_CASE("constant contour is a fixed point") {
  const MvfContour c = make({0, 0, 4000, 4000, 4000, 4000, 0, 4000, 4000, 0});
  SmootherConfig median;
  SmootherConfig ma;
  ma.mode = SmoothMode::kMovingAverage;
  CHECK(smooth(c, median).values == c.values);
  CHECK(smooth(c, ma).values == c.values);
}

TEST_CASE("smoothing matches a windowed oracle on random contours") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const MvfContour c = test::random_contour(rng);
    CAPTURE(trial);
    SmootherConfig median;
    check_equal(smooth(c, median), test::smoothing_oracle(c, SmoothMode::kMedian, 2));
    SmootherConfig median7;
    median7.median_order = 7;
    check_equal(smooth(c, median7), test::smoothing_oracle(c, SmoothMode::kMedian, 3));
    SmootherConfig ma;
    ma.mode = SmoothMode::kMovingAverage;
    check_equal(smooth(c, ma), test::smoothing_oracle(c, SmoothMode::kMovingAverage, 3));
    SmootherConfig none;
    none.mode = SmoothMode::kNone;
    check_equal(smooth(c, none), test::smoothing_oracle(c, SmoothMode::kNone, 0));
  }
}

TEST_CASE("outputs stay inside the voiced input range and keep the mask") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const MvfContour c = test::random_contour(rng);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.voiced[i] && !std::isnan(c.values[i])) {
        lo = std::min(lo, c.values[i]);
        hi = std::max(hi, c.values[i]);
      }
    }
    for (SmoothMode mode : {SmoothMode::kMedian, SmoothMode::kMovingAverage}) {
      SmootherConfig cfg;
      cfg.mode = mode;
      const MvfContour out = smooth(c, cfg);
      CHECK(out.voiced == c.voiced);
      for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(std::isfinite(out.values[i]));
        if (!c.voiced[i]) {
          CHECK(out.values[i] == c.values[i]);
        } else if (out.values[i] != 0.0) {
          CHECK(out.values[i] >= lo - 1e-9);
          CHECK(out.values[i] <= hi + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("median is idempotent on monotone runs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> step(0.0, 300.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(30);
    double x = 1000.0;
    for (double& e : v) e = x += step(rng);
    const MvfContour once = smooth(make(v), {});
    const MvfContour twice = smooth(once, {});
    CHECK(once.values == twice.values);
  }
}

TEST_CASE("short runs and undecidable frames") {
  // Run edges keep their value; interior windows stay centred.
  const MvfContour a = smooth(make({0, 2000, 4000, 0}), {});
  CHECK(a.values == std::vector<double>{0, 2000, 4000, 0});
  const MvfContour d = smooth(make({1000, 9000, 2000, 3000}), {});
  CHECK(d.values == std::vector<double>{1000, 2000, 3000, 3000});
  // A NaN inside a window leaves an even count: mean of the middle two.
  const MvfContour e = smooth(make({1000, 2000, kNaN, 4000, 8000}), {});
  CHECK(e.values[2] == 3000.0);
  // NaN frames take the window statistic or the nearest decided value.
  const MvfContour b = smooth(make({kNaN, kNaN, kNaN, kNaN, 5000}), {});
  CHECK(b.values == std::vector<double>{5000, 5000, 5000, 5000, 5000});
  const MvfContour c = smooth(make({kNaN, kNaN}), {});
  CHECK(c.values == std::vector<double>{0, 0});
  CHECK(c.voiced == std::vector<bool>{true, true});
}

TEST_CASE("smoother configuration") {
  CHECK(parse_smooth_mode("median") == SmoothMode::kMedian);
  CHECK(parse_smooth_mode("ma") == SmoothMode::kMovingAverage);
  CHECK(parse_smooth_mode("none") == SmoothMode::kNone);
  CHECK_THROWS_AS(parse_smooth_mode("gaussian"), ValidationError);
  SmootherConfig even;
  even.median_order = 4;
  CHECK_THROWS_AS(even.validate(), ValidationError);
  SmootherConfig neg;
  neg.ma_halfwidth = -0.01;
  CHECK_THROWS_AS(neg.validate(), ValidationError);
}
