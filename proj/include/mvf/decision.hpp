#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mvf/features.hpp"
#include "mvf/types.hpp"

namespace mvf {

enum class Hypothesis { kH0, kH1 };  // H0: not harmonic, H1: harmonic

struct LabeledFeatures {
  FeatureVector x;
  Hypothesis label = Hypothesis::kH0;
};

struct FitOptions {
  std::size_t min_count = 100;  // per hypothesis per feature
};

/// Sample mean and unbiased variance per (feature, hypothesis) cell over the
/// samples where the feature is present. Throws TrainingError naming the first
/// cell with fewer than min_count samples (or fewer than two), and
/// ValidationError for a zero variance.
GaussianModel fit_model(std::span<const LabeledFeatures> labeled, FeatureSet enabled,
                        const FitOptions& options = {});

/// Sum of univariate Gaussian log-densities over features both present in `x`
/// and enabled in `model`. Features the model does not carry are ignored.
double log_likelihood(const FeatureVector& x, const GaussianModel& model, Hypothesis h);

struct Posterior {
  double probability = 0.5;
  bool degenerate = false;  // both likelihoods underflowed; probability is 0.5
};

/// p(x|H) / (p(x|H0) + p(x|H1)) with equal priors. Diagnostics only.
Posterior posterior(const FeatureVector& x, const GaussianModel& model, Hypothesis h);

struct BoundaryChoice {
  std::size_t m_star = 0;
  double objective = 0.0;
};

/// argmax over m in [0, N] of sum_{k<m} h1[k] + sum_{k>=m} h0[k] (0-based
/// storage; m counts harmonic candidates). Ties resolve to the larger m.
/// Runs in O(N) with prefix and suffix sums. Requires N >= 1.
BoundaryChoice best_boundary(std::span<const double> loglik_h1, std::span<const double> loglik_h0);

struct FrameDecision {
  std::size_t m_star = 0;          // 0 means every candidate was rejected
  double mvf_hz = 0.0;             // omega_{m*}, or 0
  double total_log_likelihood = 0.0;
  std::vector<double> per_candidate_llr;  // log p(x|H1) - log p(x|H0)
};

/// Maximum-likelihood harmonic/noise boundary for one frame. `omega_hz[k]` is
/// the frequency of candidate k+1. Returns nullopt for an empty frame.
std::optional<FrameDecision> decide_mvf(std::span<const FeatureVector> features,
                                        std::span<const double> omega_hz,
                                        const GaussianModel& model);

/// Per-candidate log-likelihoods under both hypotheses, vectorized per feature.
void candidate_log_likelihoods(std::span<const FeatureVector> features, const GaussianModel& model,
                               std::span<double> loglik_h1, std::span<double> loglik_h0);

}  // namespace mvf
