#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mvf/pipeline.hpp"
#include "mvf/types.hpp"

namespace mvf {

struct RocPoint {
  double theta_hz = 0.0;
  double accuracy = 0.0;
};

/// One estimated contour with its constant ground truth.
struct ScoredFile {
  std::string id;
  MvfContour estimate;
  double truth_hz = 0.0;
  VoiceClass voice_class = VoiceClass::kLowPitch;
};

struct ClassScore {
  std::string label;  // "low_pitch", "high_pitch" or "all"
  double auc = 0.0;
  std::vector<RocPoint> roc;
  std::size_t n_frames = 0;
};

struct FileScore {
  std::string id;
  VoiceClass voice_class = VoiceClass::kLowPitch;
  double mae_hz = 0.0;
  std::size_t n_frames = 0;
};

struct EvalReport {
  std::string method;
  std::vector<ClassScore> classes;  // classes with frames, then "all"
  std::vector<FileScore> files;

  /// nullptr when no frame of that class was scored.
  const ClassScore* find(const std::string& label) const;
};

struct ScoreOptions {
  double theta_max = 1500.0;
  std::size_t theta_steps = 151;
  unsigned threads = 0;
};

/// Accuracy on a uniform theta grid over the voiced frames of every file, and
/// its trapezoidal area divided by theta_max. Throws EvaluationError when no
/// voiced frame exists at all.
EvalReport score(const std::vector<ScoredFile>& files, const std::string& method = {},
                 const ScoreOptions& options = {});

/// Scores every test entry of the manifest once per feature subset. Each test
/// file is analyzed a single time with the union of the subsets' features and
/// decided per subset from that cache. Smoothing is forced to a 5-point
/// median. Throws EvaluationError if a wav file appears in both splits.
std::vector<EvalReport> compare_methods(const CorpusManifest& manifest,
                                        const std::vector<FeatureSet>& feature_sets,
                                        const GaussianModel& model, const PipelineConfig& cfg = {},
                                        const ScoreOptions& options = {});

/// Throws EvaluationError when the same wav file is listed in both splits.
void check_split_disjoint(const CorpusManifest& manifest);

/// `report.csv` (method,voice_class,auc,n_frames), `files.csv` with per-file
/// mean absolute error, and one `roc_<method>.csv` per report.
void write_reports(const std::vector<EvalReport>& reports, const std::filesystem::path& out_dir);

}  // namespace mvf
