#include "mvf/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "mvf/error.hpp"
#include "mvf/kernels.hpp"
#include "mvf/parallel.hpp"
#include "mvf/signal_io.hpp"
#include "mvf/smoothing.hpp"

namespace mvf {

const ClassScore* EvalReport::find(const std::string& label) const {
  for (const ClassScore& c : classes) {
    if (c.label == label) return &c;
  }
  return nullptr;
}

namespace {

struct FileCounts {
  std::vector<std::size_t> hits;  // frames with error <= theta_k
  std::size_t n = 0;
  double abs_error_sum = 0.0;
};

ClassScore finish(std::string label, const std::vector<std::size_t>& hits, std::size_t n,
                  const std::vector<double>& thetas, double theta_max) {
  ClassScore c;
  c.label = std::move(label);
  c.n_frames = n;
  c.roc.resize(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    c.roc[k] = {thetas[k], static_cast<double>(hits[k]) / static_cast<double>(n)};
  }
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < thetas.size(); ++k) {
    area += 0.5 * (c.roc[k].accuracy + c.roc[k + 1].accuracy) * (thetas[k + 1] - thetas[k]);
  }
  c.auc = area / theta_max;
  return c;
}

}  // namespace

EvalReport score(const std::vector<ScoredFile>& files, const std::string& method,
                 const ScoreOptions& options) {
  if (!(options.theta_max > 0.0) || options.theta_steps < 2) {
    throw ValidationError("theta grid needs theta_max > 0 and at least 2 steps");
  }
  std::vector<double> thetas(options.theta_steps);
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    thetas[k] = options.theta_max * static_cast<double>(k) / static_cast<double>(thetas.size() - 1);
  }

  std::vector<FileCounts> counts(files.size());
  parallel_for(files.size(), options.threads, [&](std::size_t j) {
    const ScoredFile& f = files[j];
    std::vector<double> est;
    for (std::size_t i = 0; i < f.estimate.size(); ++i) {
      if (f.estimate.voiced[i]) est.push_back(f.estimate.values[i]);
    }
    std::vector<double> err(est.size());
    kernels::abs_diff(est, f.truth_hz, err);
    FileCounts& c = counts[j];
    c.n = err.size();
    c.hits.resize(thetas.size());
    for (std::size_t k = 0; k < thetas.size(); ++k) c.hits[k] = kernels::count_le(err, thetas[k]);
    for (double e : err) c.abs_error_sum += e;
  });

  EvalReport report;
  report.method = method;
  const VoiceClass classes[] = {VoiceClass::kLowPitch, VoiceClass::kHighPitch};
  std::vector<std::size_t> all_hits(thetas.size(), 0);
  std::size_t all_n = 0;
  for (VoiceClass vc : classes) {
    std::vector<std::size_t> hits(thetas.size(), 0);
    std::size_t n = 0;
    for (std::size_t j = 0; j < files.size(); ++j) {
      if (files[j].voice_class != vc) continue;
      n += counts[j].n;
      for (std::size_t k = 0; k < thetas.size(); ++k) hits[k] += counts[j].hits[k];
    }
    if (n == 0) continue;
    for (std::size_t k = 0; k < thetas.size(); ++k) all_hits[k] += hits[k];
    all_n += n;
    report.classes.push_back(finish(std::string(to_string(vc)), hits, n, thetas, options.theta_max));
  }
  if (all_n == 0) throw EvaluationError("no voiced frames to score");
  report.classes.push_back(finish("all", all_hits, all_n, thetas, options.theta_max));

  for (std::size_t j = 0; j < files.size(); ++j) {
    FileScore fs;
    fs.id = files[j].id;
    fs.voice_class = files[j].voice_class;
    fs.n_frames = counts[j].n;
    fs.mae_hz = counts[j].n ? counts[j].abs_error_sum / static_cast<double>(counts[j].n) : 0.0;
    report.files.push_back(std::move(fs));
  }
  return report;
}

void check_split_disjoint(const CorpusManifest& manifest) {
  std::set<std::string> dev;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.split == Split::kDev) {
      dev.insert(std::filesystem::path(manifest.resolve(e.wav_path)).lexically_normal().string());
    }
  }
  for (const ManifestEntry& e : manifest.entries) {
    if (e.split != Split::kTest) continue;
    const std::string p = std::filesystem::path(manifest.resolve(e.wav_path)).lexically_normal().string();
    if (dev.count(p)) throw EvaluationError("'" + e.wav_path + "' is listed in both dev and test splits");
  }
}

std::vector<EvalReport> compare_methods(const CorpusManifest& manifest,
                                        const std::vector<FeatureSet>& feature_sets,
                                        const GaussianModel& model, const PipelineConfig& cfg,
                                        const ScoreOptions& options) {
  if (feature_sets.empty()) throw ValidationError("no feature sets to compare");
  check_split_disjoint(manifest);
  FeatureSet needed;
  for (FeatureSet s : feature_sets) {
    if (s.empty()) throw ValidationError("empty feature set");
    if (!s.is_subset_of(model.enabled())) {
      throw ValidationError("model (" + model.enabled().to_string() + ") does not cover " +
                            s.method_name());
    }
    for (Feature f : kAllFeatures) {
      if (s.contains(f)) needed.insert(f);
    }
  }

  std::vector<const ManifestEntry*> test;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.split == Split::kTest) test.push_back(&e);
  }
  if (test.empty()) throw EvaluationError("manifest has no test entries");

  SmootherConfig smoother;
  smoother.mode = SmoothMode::kMedian;
  smoother.median_order = 5;

  // scored[s][j]: contour of test file j decided with feature set s
  std::vector<std::vector<ScoredFile>> scored(feature_sets.size(),
                                              std::vector<ScoredFile>(test.size()));
  parallel_for(test.size(), cfg.threads, [&](std::size_t j) {
    const ManifestEntry& e = *test[j];
    const AudioBuffer audio = io::read_wav(manifest.resolve(e.wav_path));
    const F0Track f0 = io::read_f0_csv(manifest.resolve(e.f0_path));
    const FileFeatures cache = analyze_file(audio, f0, needed, cfg.window_periods, cfg.pair_anchor, 1);
    for (std::size_t s = 0; s < feature_sets.size(); ++s) {
      ScoredFile& sf = scored[s][j];
      sf.id = e.wav_path;
      sf.truth_hz = e.mvf_true_hz;
      sf.voice_class = e.voice_class;
      sf.estimate = smooth(decide_contour(cache, model, feature_sets[s]), smoother);
    }
  });

  std::vector<EvalReport> reports;
  ScoreOptions inner = options;
  inner.threads = cfg.threads;
  for (std::size_t s = 0; s < feature_sets.size(); ++s) {
    reports.push_back(score(scored[s], feature_sets[s].method_name(), inner));
  }
  return reports;
}

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  return out;
}

}  // namespace

void write_reports(const std::vector<EvalReport>& reports, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  char buf[256];
  std::ofstream rep = open_out(out_dir / "report.csv");
  rep << "method,voice_class,auc,n_frames\n";
  for (const EvalReport& r : reports) {
    for (const ClassScore& c : r.classes) {
      std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%zu\n", r.method.c_str(), c.label.c_str(), c.auc,
                    c.n_frames);
      rep << buf;
    }
  }

  std::ofstream files = open_out(out_dir / "files.csv");
  files << "method,file,voice_class,mae_hz,n_frames\n";
  for (const EvalReport& r : reports) {
    for (const FileScore& f : r.files) {
      std::snprintf(buf, sizeof buf, ",%s,%.3f,%zu\n", std::string(to_string(f.voice_class)).c_str(),
                    f.mae_hz, f.n_frames);
      files << r.method << ',' << f.id << buf;
    }
  }

  for (const EvalReport& r : reports) {
    std::ofstream roc = open_out(out_dir / ("roc_" + lower(r.method) + ".csv"));
    roc << "theta_hz";
    for (const ClassScore& c : r.classes) roc << ',' << c.label;
    roc << '\n';
    const std::size_t steps = r.classes.empty() ? 0 : r.classes.front().roc.size();
    for (std::size_t k = 0; k < steps; ++k) {
      std::snprintf(buf, sizeof buf, "%.1f", r.classes.front().roc[k].theta_hz);
      roc << buf;
      for (const ClassScore& c : r.classes) {
        std::snprintf(buf, sizeof buf, ",%.6f", c.roc[k].accuracy);
        roc << buf;
      }
      roc << '\n';
    }
  }
}

}  // namespace mvf
