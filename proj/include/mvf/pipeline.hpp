#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mvf/decision.hpp"
#include "mvf/features.hpp"
#include "mvf/harmonics.hpp"
#include "mvf/smoothing.hpp"
#include "mvf/types.hpp"

namespace mvf {

struct PipelineConfig {
  double window_periods = 4.0;
  FeatureSet enabled_features{Feature::kAs, Feature::kIhpc};
  SmootherConfig smoother;
  PairAnchor pair_anchor = PairAnchor::kUpper;
  std::string model_path;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// Applies `key = value` lines (`#` comments) on top of `cfg`. Keys:
/// window_periods, features, smooth, median_order, ma_halfwidth_ms, model,
/// pair_anchor (lower|upper), threads.
void apply_config_file(const std::filesystem::path& path, PipelineConfig& cfg);

/// Candidates and features of one analysis instant.
struct FrameFeatures {
  std::vector<HarmonicCandidate> candidates;
  std::vector<FeatureVector> features;
  double omega0_hz = 0.0;
  bool voiced = false;
  bool undecidable = false;  // voiced but degenerate or without candidates
  bool resorted = false;
  bool suspicious = false;   // refined F0 strays > 20% from the track (octave error?)
};

/// Everything per-frame that does not depend on the trained model, so several
/// feature subsets can be decided from one analysis pass.
struct FileFeatures {
  std::vector<FrameFeatures> frames;
  F0Track f0;
  int sample_rate = 0;
  FeatureSet computed;
  std::size_t frame_analyses = 0;  // number of DFT frame analyses performed
};

/// Runs extract_frame -> analyze_frame -> detect_candidates -> features for
/// every voiced frame of `f0`. The delayed-frame analysis behind ICPC only
/// runs when `features` contains ICPC.
FileFeatures analyze_file(const AudioBuffer& audio, const F0Track& f0, FeatureSet features,
                          double window_periods = 4.0, PairAnchor anchor = PairAnchor::kUpper,
                          unsigned threads = 0);

struct Diagnostics {
  std::size_t frames = 0;
  std::size_t voiced_frames = 0;
  std::size_t undecidable_frames = 0;
  std::size_t suspicious_frames = 0;
  std::size_t resorted_frames = 0;
  std::size_t frame_analyses = 0;

  std::string summary() const;
};

/// Raw per-frame decisions using only `subset` of the model's features.
/// Undecidable voiced frames hold NaN; unvoiced frames 0.
MvfContour decide_contour(const FileFeatures& file, const GaussianModel& model, FeatureSet subset);

struct ContourEstimate {
  MvfContour raw;       // NaN marks undecidable voiced frames
  MvfContour smoothed;  // always finite
  Diagnostics diagnostics;
  FileFeatures features;
};

/// Full estimator. Requires cfg.enabled_features to be a subset of the model's.
ContourEstimate estimate_contour(const AudioBuffer& audio, const F0Track& f0,
                                 const PipelineConfig& cfg, const GaussianModel& model);

/// Debug dump: `time_s,p,omega_hz,as_db,ihpc_s,icpc_rad`, empty cells for absent features.
void write_feature_dump(const FileFeatures& file, std::ostream& out);

/// Labeled candidates from one analyzed file with known MVF: omega_p <= mvf is
/// H1, above is H0, and candidates within F0/2 of the boundary are skipped.
void collect_training_samples(const FileFeatures& file, double mvf_true_hz,
                              std::vector<LabeledFeatures>& out);

/// Fits a model on the manifest's dev split only.
GaussianModel train_from_manifest(const CorpusManifest& manifest, FeatureSet features,
                                  const PipelineConfig& cfg, const FitOptions& options = {});

}  // namespace mvf
