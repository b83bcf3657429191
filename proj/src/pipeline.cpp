#include "mvf/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "mvf/error.hpp"
#include "mvf/parallel.hpp"
#include "mvf/signal_io.hpp"
#include "mvf/spectral.hpp"

namespace mvf {

void PipelineConfig::validate() const {
  if (enabled_features.empty()) throw ValidationError("at least one feature must be enabled");
  if (!(window_periods > 0.0)) throw ValidationError("window_periods must be positive");
  smoother.validate();
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || !std::isfinite(v)) {
    throw ValidationError("config: '" + key + "' expects a number, got '" + value + "'");
  }
  return v;
}

}  // namespace

void apply_config_file(const std::filesystem::path& path, PipelineConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "window_periods") {
      cfg.window_periods = parse_double(key, value);
    } else if (key == "features") {
      cfg.enabled_features = FeatureSet::parse(value);
    } else if (key == "smooth") {
      cfg.smoother.mode = parse_smooth_mode(value);
    } else if (key == "median_order") {
      cfg.smoother.median_order = static_cast<int>(parse_double(key, value));
    } else if (key == "ma_halfwidth_ms") {
      cfg.smoother.ma_halfwidth = parse_double(key, value) / 1000.0;
    } else if (key == "model") {
      cfg.model_path = value;
    } else if (key == "pair_anchor") {
      if (value == "lower") {
        cfg.pair_anchor = PairAnchor::kLower;
      } else if (value == "upper") {
        cfg.pair_anchor = PairAnchor::kUpper;
      } else {
        throw ValidationError("config: pair_anchor must be 'lower' or 'upper'");
      }
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(parse_double(key, value));
    } else {
      throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
}

FileFeatures analyze_file(const AudioBuffer& audio, const F0Track& f0, FeatureSet features,
                          double window_periods, PairAnchor anchor, unsigned threads) {
  validate(audio);
  validate(f0);
  if (features.empty()) throw ValidationError("no features requested");

  FileFeatures file;
  file.f0 = f0;
  file.sample_rate = audio.sample_rate;
  file.computed = features;
  file.frames.resize(f0.size());
  const bool need_icpc = features.contains(Feature::kIcpc);
  std::vector<std::size_t> analyses(f0.size(), 0);

  parallel_for(f0.size(), threads, [&](std::size_t i) {
    FrameFeatures& out = file.frames[i];
    if (!f0.voiced(i)) return;
    out.voiced = true;

    FrameSpec spec;
    spec.center_sample = static_cast<std::ptrdiff_t>(std::llround(f0.time_at(i) * audio.sample_rate));
    spec.f0 = f0.values[i];
    spec.window_periods = window_periods;
    spec.sample_rate = audio.sample_rate;

    const std::vector<double> windowed = extract_frame(audio, spec);
    const FrameAnalysis frame = analyze_frame(windowed, audio.sample_rate, spec.f0);
    analyses[i] = 1;
    CandidateSet set = detect_candidates(frame, spec.f0);
    out.omega0_hz = set.omega0_hz;
    out.resorted = set.resorted;
    out.suspicious = std::fabs(set.omega0_hz - spec.f0) > 0.2 * spec.f0;
    if (frame.degenerate || set.empty()) {
      out.undecidable = true;
      return;
    }
    DifferentialPhase dphi;
    if (need_icpc) {
      dphi = differential_phase(audio, spec, frame);
      analyses[i] = 2;
    }
    out.features = compute_features(frame, set.candidates, need_icpc ? &dphi : nullptr, features,
                                    anchor);
    out.candidates = std::move(set.candidates);
  });
  for (std::size_t a : analyses) file.frame_analyses += a;
  return file;
}

std::string Diagnostics::summary() const {
  std::ostringstream s;
  s << "frames=" << frames << " voiced=" << voiced_frames << " undecidable=" << undecidable_frames
    << " suspicious=" << suspicious_frames << " resorted=" << resorted_frames
    << " frame_analyses=" << frame_analyses;
  return s.str();
}

MvfContour decide_contour(const FileFeatures& file, const GaussianModel& model, FeatureSet subset) {
  if (!subset.is_subset_of(model.enabled())) {
    throw ValidationError("model lacks features requested for decision (" + subset.to_string() + ")");
  }
  if (!subset.is_subset_of(file.computed)) {
    throw ValidationError("features " + subset.to_string() + " were not computed for this file");
  }
  const GaussianModel restricted = model.restricted_to(subset);
  MvfContour contour;
  contour.frame_shift = file.f0.frame_shift;
  contour.start_time = file.f0.start_time;
  contour.values.assign(file.frames.size(), 0.0);
  contour.voiced.assign(file.frames.size(), false);

  std::vector<FeatureVector> xs;
  std::vector<double> omegas;
  for (std::size_t i = 0; i < file.frames.size(); ++i) {
    const FrameFeatures& fr = file.frames[i];
    contour.voiced[i] = fr.voiced;
    if (!fr.voiced) continue;
    if (fr.undecidable) {
      contour.values[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    xs.clear();
    omegas.clear();
    for (std::size_t k = 0; k < fr.candidates.size(); ++k) {
      xs.push_back(fr.features[k].restricted_to(subset));
      omegas.push_back(fr.candidates[k].omega_hz);
    }
    const auto decision = decide_mvf(xs, omegas, restricted);
    contour.values[i] = decision ? decision->mvf_hz : std::numeric_limits<double>::quiet_NaN();
  }
  return contour;
}

ContourEstimate estimate_contour(const AudioBuffer& audio, const F0Track& f0,
                                 const PipelineConfig& cfg, const GaussianModel& model) {
  cfg.validate();
  if (!cfg.enabled_features.is_subset_of(model.enabled())) {
    throw ValidationError("model (" + model.enabled().to_string() + ") does not cover features " +
                          cfg.enabled_features.to_string());
  }
  ContourEstimate est;
  est.features = analyze_file(audio, f0, cfg.enabled_features, cfg.window_periods, cfg.pair_anchor,
                              cfg.threads);
  est.raw = decide_contour(est.features, model, cfg.enabled_features);
  est.smoothed = smooth(est.raw, cfg.smoother);

  Diagnostics& d = est.diagnostics;
  d.frames = est.features.frames.size();
  d.frame_analyses = est.features.frame_analyses;
  for (std::size_t i = 0; i < d.frames; ++i) {
    const FrameFeatures& fr = est.features.frames[i];
    if (!fr.voiced) continue;
    ++d.voiced_frames;
    if (fr.undecidable || std::isnan(est.raw.values[i])) ++d.undecidable_frames;
    if (fr.suspicious) ++d.suspicious_frames;
    if (fr.resorted) ++d.resorted_frames;
  }
  return est;
}

void write_feature_dump(const FileFeatures& file, std::ostream& out) {
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", *v);
    return std::string(buf);
  };
  out << "time_s,p,omega_hz,as_db,ihpc_s,icpc_rad\n";
  for (std::size_t i = 0; i < file.frames.size(); ++i) {
    const FrameFeatures& fr = file.frames[i];
    for (std::size_t k = 0; k < fr.candidates.size(); ++k) {
      char head[96];
      std::snprintf(head, sizeof head, "%.6f,%d,%.6f,", file.f0.time_at(i), fr.candidates[k].index,
                    fr.candidates[k].omega_hz);
      const FeatureVector& x = fr.features[k];
      out << head << cell(x.as_db) << ',' << cell(x.ihpc_s) << ',' << cell(x.icpc_rad) << '\n';
    }
  }
}

void collect_training_samples(const FileFeatures& file, double mvf_true_hz,
                              std::vector<LabeledFeatures>& out) {
  for (std::size_t i = 0; i < file.frames.size(); ++i) {
    const FrameFeatures& fr = file.frames[i];
    if (!fr.voiced || fr.undecidable) continue;
    const double guard = 0.5 * file.f0.values[i];
    for (std::size_t k = 0; k < fr.candidates.size(); ++k) {
      const double w = fr.candidates[k].omega_hz;
      if (std::fabs(w - mvf_true_hz) < guard) continue;
      if (!fr.features[k].any()) continue;
      out.push_back({fr.features[k], w <= mvf_true_hz ? Hypothesis::kH1 : Hypothesis::kH0});
    }
  }
}

GaussianModel train_from_manifest(const CorpusManifest& manifest, FeatureSet features,
                                  const PipelineConfig& cfg, const FitOptions& options) {
  std::vector<const ManifestEntry*> dev;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.split == Split::kDev) dev.push_back(&e);
  }
  if (dev.empty()) throw TrainingError("manifest has no dev entries");

  std::vector<std::vector<LabeledFeatures>> per_file(dev.size());
  parallel_for(dev.size(), cfg.threads, [&](std::size_t j) {
    const AudioBuffer audio = io::read_wav(manifest.resolve(dev[j]->wav_path));
    const F0Track f0 = io::read_f0_csv(manifest.resolve(dev[j]->f0_path));
    const FileFeatures file = analyze_file(audio, f0, features, cfg.window_periods, cfg.pair_anchor, 1);
    collect_training_samples(file, dev[j]->mvf_true_hz, per_file[j]);
  });
  std::vector<LabeledFeatures> all;
  for (auto& v : per_file) all.insert(all.end(), v.begin(), v.end());
  return fit_model(all, features, options);
}

}  // namespace mvf
