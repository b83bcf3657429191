#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mvf/types.hpp"

namespace mvf::test {

/// Sum of equal-amplitude cosines at h * f0 below `max_hz` with seeded random
/// phases. Evaluated analytically, so any real-valued period is exact.
inline AudioBuffer periodic_signal(double f0, int fs, double seconds, std::uint64_t seed,
                                   double max_hz = -1.0) {
  if (max_hz <= 0.0) max_hz = 0.5 * fs - f0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  std::vector<double> phases;
  for (int h = 1; h * f0 < max_hz; ++h) phases.push_back(u(rng));
  AudioBuffer a;
  a.sample_rate = fs;
  a.samples.assign(static_cast<std::size_t>(std::llround(seconds * fs)), 0.0);
  for (std::size_t n = 0; n < a.samples.size(); ++n) {
    const double t = static_cast<double>(n) / fs;
    double v = 0.0;
    for (std::size_t h = 0; h < phases.size(); ++h) {
      v += std::cos(2.0 * std::numbers::pi * static_cast<double>(h + 1) * f0 * t + phases[h]);
    }
    a.samples[n] = v / static_cast<double>(phases.size());
  }
  return a;
}

/// Kolmogorov-Smirnov p-value of `x` against the uniform law on (-pi, pi],
/// using the asymptotic Kolmogorov distribution with Stephens' correction.
inline double ks_uniform_circle_pvalue(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = (x[i] + std::numbers::pi) / (2.0 * std::numbers::pi);
    d = std::max({d, cdf - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - cdf});
  }
  const double root = std::sqrt(n);
  const double lambda = (root + 0.12 + 0.11 / root) * d;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    q += 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::clamp(q, 0.0, 1.0);
}

inline AudioBuffer white_noise(std::size_t n, int fs, std::uint64_t seed, double sigma = 0.1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  AudioBuffer a;
  a.sample_rate = fs;
  a.samples.resize(n);
  for (double& v : a.samples) v = g(rng);
  return a;
}

inline F0Track constant_track(double f0, double seconds, double shift = 0.01) {
  F0Track t;
  t.frame_shift = shift;
  t.values.assign(static_cast<std::size_t>(std::floor(seconds / shift + 1e-9)), f0);
  return t;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("mvf_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::FILE* f = std::fopen(p.string().c_str(), "rb");
  if (!f) return {};
  std::string s;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) s.append(buf, got);
  std::fclose(f);
  return s;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::FILE* f = std::fopen(p.string().c_str(), "wb");
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

}  // namespace mvf::test
