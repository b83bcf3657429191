#include "mvf/decision.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mvf/error.hpp"
#include "mvf/kernels.hpp"

namespace mvf {
namespace {

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  m.count = v.size();
  if (v.empty()) return m;
  double s = 0.0;
  for (double x : v) s += x;
  m.mean = s / static_cast<double>(v.size());
  if (v.size() < 2) return m;
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.variance = ss / static_cast<double>(v.size() - 1);
  return m;
}

double gaussian_log_norm(double var) { return -0.5 * std::log(2.0 * std::numbers::pi * var); }

}  // namespace

GaussianModel fit_model(std::span<const LabeledFeatures> labeled, FeatureSet enabled,
                        const FitOptions& options) {
  if (enabled.empty()) throw ValidationError("no features enabled for training");
  GaussianModel model;
  for (Feature f : kAllFeatures) {
    if (!enabled.contains(f)) continue;
    std::vector<double> h1;
    std::vector<double> h0;
    for (const LabeledFeatures& s : labeled) {
      if (auto v = s.x.get(f)) (s.label == Hypothesis::kH1 ? h1 : h0).push_back(*v);
    }
    const std::string name(feature_key(f));
    const std::size_t need = std::max<std::size_t>(options.min_count, 2);
    if (h1.size() < need) {
      throw TrainingError(name + ".h1 has " + std::to_string(h1.size()) + " samples, needs " +
                          std::to_string(need));
    }
    if (h0.size() < need) {
      throw TrainingError(name + ".h0 has " + std::to_string(h0.size()) + " samples, needs " +
                          std::to_string(need));
    }
    const Moments m1 = moments(h1);
    const Moments m0 = moments(h0);
    model.set(f, GaussianParams{m1.mean, m1.variance, m0.mean, m0.variance});
  }
  return model;
}

double log_likelihood(const FeatureVector& x, const GaussianModel& model, Hypothesis h) {
  double total = 0.0;
  for (Feature f : kAllFeatures) {
    if (!model.has(f)) continue;
    const auto v = x.get(f);
    if (!v) continue;
    const GaussianParams& g = model.at(f);
    const double mean = h == Hypothesis::kH1 ? g.h1_mean : g.h0_mean;
    const double var = h == Hypothesis::kH1 ? g.h1_var : g.h0_var;
    const double d = *v - mean;
    total += gaussian_log_norm(var) - (d * d) * (0.5 / var);
  }
  return total;
}

Posterior posterior(const FeatureVector& x, const GaussianModel& model, Hypothesis h) {
  const double p1 = std::exp(log_likelihood(x, model, Hypothesis::kH1));
  const double p0 = std::exp(log_likelihood(x, model, Hypothesis::kH0));
  if (p0 + p1 == 0.0 || !std::isfinite(p0 + p1)) return Posterior{0.5, true};
  const double num = h == Hypothesis::kH1 ? p1 : p0;
  return Posterior{num / (p0 + p1), false};
}

BoundaryChoice best_boundary(std::span<const double> loglik_h1,
                             std::span<const double> loglik_h0) {
  const std::size_t n = loglik_h1.size();
  if (n == 0 || loglik_h0.size() != n) {
    throw PreconditionError("boundary search needs matching, non-empty likelihood sequences");
  }
  // suffix[m] = sum of h0 over candidates m..n-1 (0-based)
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + loglik_h0[k];

  BoundaryChoice best{0, suffix[0]};
  double prefix = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    prefix += loglik_h1[m - 1];
    const double objective = prefix + suffix[m];
    if (objective >= best.objective) best = BoundaryChoice{m, objective};
  }
  return best;
}

void candidate_log_likelihoods(std::span<const FeatureVector> features, const GaussianModel& model,
                               std::span<double> loglik_h1, std::span<double> loglik_h0) {
  const std::size_t n = features.size();
  std::fill(loglik_h1.begin(), loglik_h1.end(), 0.0);
  std::fill(loglik_h0.begin(), loglik_h0.end(), 0.0);
  std::vector<double> column(n);
  std::vector<double> density(n);
  for (Feature f : kAllFeatures) {
    if (!model.has(f)) continue;
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = features[i].get(f);
      column[i] = v ? *v : std::numeric_limits<double>::quiet_NaN();
      any = any || v.has_value();
    }
    if (!any) continue;
    const GaussianParams& g = model.at(f);
    kernels::gaussian_log_density(column, g.h1_mean, 0.5 / g.h1_var, gaussian_log_norm(g.h1_var),
                                  density);
    for (std::size_t i = 0; i < n; ++i) loglik_h1[i] += density[i];
    kernels::gaussian_log_density(column, g.h0_mean, 0.5 / g.h0_var, gaussian_log_norm(g.h0_var),
                                  density);
    for (std::size_t i = 0; i < n; ++i) loglik_h0[i] += density[i];
  }
}

std::optional<FrameDecision> decide_mvf(std::span<const FeatureVector> features,
                                        std::span<const double> omega_hz,
                                        const GaussianModel& model) {
  if (features.empty()) return std::nullopt;
  if (omega_hz.size() != features.size()) {
    throw PreconditionError("one frequency per candidate is required");
  }
  const std::size_t n = features.size();
  std::vector<double> h1(n);
  std::vector<double> h0(n);
  candidate_log_likelihoods(features, model, h1, h0);

  const BoundaryChoice choice = best_boundary(h1, h0);
  FrameDecision d;
  d.m_star = choice.m_star;
  d.mvf_hz = choice.m_star == 0 ? 0.0 : omega_hz[choice.m_star - 1];
  d.total_log_likelihood = choice.objective;
  d.per_candidate_llr.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.per_candidate_llr[i] = h1[i] - h0[i];
  return d;
}

}  // namespace mvf
