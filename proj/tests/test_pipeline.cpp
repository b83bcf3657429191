#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mvf/error.hpp"
#include "mvf/pipeline.hpp"
#include "mvf/signal_io.hpp"
#include "mvf/synth.hpp"
#include "support.hpp"

using namespace mvf;

namespace {

const FeatureSet kAllSet{Feature::kAs, Feature::kIhpc, Feature::kIcpc};

struct TrainedFixture {
  test::TempDir dir{"pipeline"};
  CorpusManifest manifest;
  GaussianModel model;

  TrainedFixture() {
    CorpusOptions opt;
    opt.duration = 0.6;
    manifest = generate_corpus(dir.path(), Preset::kSpeechLike, 6, 21, opt);
    FitOptions fit;
    fit.min_count = 20;
    model = train_from_manifest(manifest, kAllSet, PipelineConfig{}, fit);
  }
};

const TrainedFixture& trained() {
  static const TrainedFixture fixture;
  return fixture;
}

SynthResult voice(double f0, double mvf, double hnr_db = 30.0, std::uint64_t seed = 5) {
  SynthSpec spec;
  spec.duration = 1.0;
  spec.f0_contour = make_f0_contour(f0, spec.duration);
  spec.mvf_true = mvf;
  spec.hnr_low_db = hnr_db;
  spec.phase_seed = seed;
  spec.noise_seed = seed + 1;
  return synthesize(spec);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

TEST_CASE("raw contour tracks a 3 kHz MVF on a 150 Hz voice") {
  const SynthResult s = voice(150.0, 3000.0);
  PipelineConfig cfg;
  const ContourEstimate est = estimate_contour(s.audio, s.f0, cfg, trained().model);
  std::vector<double> err;
  for (std::size_t i = 0; i < est.raw.size(); ++i) {
    if (est.raw.voiced[i]) err.push_back(std::fabs(est.raw.values[i] - 3000.0));
  }
  REQUIRE(err.size() > 80);
  MESSAGE("median abs error " << median(err));
  CHECK(median(err) <= 300.0);
  CHECK(est.diagnostics.undecidable_frames == 0);
  for (double v : est.smoothed.values) CHECK(std::isfinite(v));
}

TEST_CASE("fully unvoiced track gives an all-zero contour") {
  const SynthResult s = voice(150.0, 3000.0);
  F0Track f0 = s.f0;
  std::fill(f0.values.begin(), f0.values.end(), 0.0);
  const ContourEstimate est = estimate_contour(s.audio, f0, PipelineConfig{}, trained().model);
  CHECK(est.raw.size() == f0.size());
  for (std::size_t i = 0; i < est.raw.size(); ++i) {
    CHECK(est.raw.values[i] == 0.0);
    CHECK(est.smoothed.values[i] == 0.0);
    CHECK(!est.raw.voiced[i]);
  }
  CHECK(est.diagnostics.voiced_frames == 0);
  CHECK(est.diagnostics.frame_analyses == 0);
}

TEST_CASE("adding ICPC rarely changes the boundary on a noiseless file") {
  const AudioBuffer audio = test::periodic_signal(160.0, 16000, 1.0, 4);
  const FileFeatures ff = analyze_file(audio, test::constant_track(160.0, 1.0), kAllSet);
  const MvfContour a = decide_contour(ff, trained().model, FeatureSet{Feature::kAs, Feature::kIhpc});
  const MvfContour b = decide_contour(ff, trained().model, kAllSet);
  std::size_t voiced = 0, same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a.voiced[i]) continue;
    ++voiced;
    if (a.values[i] == b.values[i]) ++same;
  }
  REQUIRE(voiced > 0);
  MESSAGE("agreement " << same << "/" << voiced);
  CHECK(static_cast<double>(same) >= 0.95 * static_cast<double>(voiced));
}

TEST_CASE("delayed-frame analysis only runs for ICPC") {
  const SynthResult s = voice(200.0, 3000.0);
  std::size_t voiced = 0;
  for (std::size_t i = 0; i < s.f0.size(); ++i) voiced += s.f0.voiced(i);
  const FileFeatures without = analyze_file(s.audio, s.f0, FeatureSet{Feature::kAs, Feature::kIhpc});
  const FileFeatures with = analyze_file(s.audio, s.f0, kAllSet);
  CHECK(without.frame_analyses == voiced);
  CHECK(with.frame_analyses == 2 * voiced);
  for (const FrameFeatures& f : without.frames) {
    for (const FeatureVector& v : f.features) CHECK(!v.icpc_rad.has_value());
  }
}

TEST_CASE("feature subsets decided from a shared analysis match dedicated runs") {
  const SynthResult s = voice(300.0, 5000.0, 20.0, 9);
  const FileFeatures all = analyze_file(s.audio, s.f0, kAllSet);
  for (FeatureSet subset : standard_feature_sets()) {
    const FileFeatures own = analyze_file(s.audio, s.f0, subset);
    const MvfContour a = decide_contour(all, trained().model, subset);
    const MvfContour b = decide_contour(own, trained().model, subset);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::isnan(a.values[i]) == std::isnan(b.values[i]));
      if (!std::isnan(a.values[i])) CHECK(a.values[i] == b.values[i]);
    }
  }
}

TEST_CASE("estimate_contour rejects features the model lacks") {
  const SynthResult s = voice(150.0, 3000.0);
  PipelineConfig cfg;
  cfg.enabled_features = kAllSet;
  const GaussianModel as_only = trained().model.restricted_to(FeatureSet{Feature::kAs});
  CHECK_THROWS_AS(estimate_contour(s.audio, s.f0, cfg, as_only), ValidationError);
}

TEST_CASE("config file") {
  test::TempDir dir("cfg");
  SUBCASE("all keys") {
    test::write_file(dir / "a.cfg",
                     "# comment\n"
                     "window_periods = 3\n"
                     "features = as,icpc\n"
                     "smooth = ma   # trailing\n"
                     "median_order = 7\n"
                     "ma_halfwidth_ms = 20\n"
                     "model = some.model\n"
                     "pair_anchor = lower\n"
                     "threads = 2\n");
    PipelineConfig cfg;
    apply_config_file(dir / "a.cfg", cfg);
    CHECK(cfg.window_periods == 3.0);
    CHECK(cfg.enabled_features == FeatureSet{Feature::kAs, Feature::kIcpc});
    CHECK(cfg.smoother.mode == SmoothMode::kMovingAverage);
    CHECK(cfg.smoother.median_order == 7);
    CHECK(cfg.smoother.ma_halfwidth == doctest::Approx(0.020));
    CHECK(cfg.model_path == "some.model");
    CHECK(cfg.pair_anchor == PairAnchor::kLower);
    CHECK(cfg.threads == 2);
  }
  SUBCASE("unknown key") {
    test::write_file(dir / "b.cfg", "colour = blue\n");
    PipelineConfig cfg;
    CHECK_THROWS_AS(apply_config_file(dir / "b.cfg", cfg), ValidationError);
  }
  SUBCASE("invalid values") {
    test::write_file(dir / "c.cfg", "median_order = 4\n");
    PipelineConfig cfg;
    CHECK_THROWS_AS(apply_config_file(dir / "c.cfg", cfg), ValidationError);
    test::write_file(dir / "d.cfg", "window_periods = -1\n");
    CHECK_THROWS_AS(apply_config_file(dir / "d.cfg", cfg), ValidationError);
  }
  SUBCASE("missing file") {
    PipelineConfig cfg;
    CHECK_THROWS_AS(apply_config_file(dir / "nope.cfg", cfg), IoError);
  }
}

TEST_CASE("feature dump") {
  const SynthResult s = voice(200.0, 3000.0);
  const FileFeatures ff = analyze_file(s.audio, s.f0, FeatureSet{Feature::kAs, Feature::kIhpc});
  std::ostringstream out;
  write_feature_dump(ff, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "time_s,p,omega_hz,as_db,ihpc_s,icpc_rad");
  std::size_t rows = 0;
  for (const FrameFeatures& f : ff.frames) rows += f.candidates.size();
  std::size_t got = 0;
  while (std::getline(in, line)) {
    ++got;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
    CHECK(line.back() == ',');  // icpc not computed
  }
  CHECK(got == rows);
}

TEST_CASE("training is deterministic and uses only the dev split") {
  const TrainedFixture& f = trained();
  FitOptions fit;
  fit.min_count = 20;
  PipelineConfig cfg;
  cfg.threads = 3;
  const GaussianModel again = train_from_manifest(f.manifest, kAllSet, cfg, fit);
  std::ostringstream a, b;
  io::write_model(f.model, a);
  io::write_model(again, b);
  CHECK(a.str() == b.str());

  CorpusManifest no_test = f.manifest;
  std::erase_if(no_test.entries, [](const ManifestEntry& e) { return e.split == Split::kTest; });
  std::ostringstream c;
  io::write_model(train_from_manifest(no_test, kAllSet, PipelineConfig{}, fit), c);
  CHECK(a.str() == c.str());

  CorpusManifest no_dev = f.manifest;
  std::erase_if(no_dev.entries, [](const ManifestEntry& e) { return e.split == Split::kDev; });
  CHECK_THROWS_AS(train_from_manifest(no_dev, kAllSet, PipelineConfig{}, fit), TrainingError);
}
