#include "mvf/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "mvf/error.hpp"
#include "mvf/eval.hpp"
#include "mvf/pipeline.hpp"
#include "mvf/signal_io.hpp"
#include "mvf/synth.hpp"

namespace mvf {
namespace {

struct SynthArgs {
  std::string preset = "mixed";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
  double duration = 1.0;
  int sample_rate = 16000;
  double hnr_db = 30.0;
  unsigned threads = 0;
};

struct TrainArgs {
  std::string manifest;
  std::string features = "as,ihpc";
  std::string out;
  std::string config;
  std::size_t min_count = 100;
  std::optional<unsigned> threads;
};

struct EstimateArgs {
  std::string wav;
  std::string f0;
  std::string model;
  std::string out;
  std::string config;
  std::string dump_features;
  std::string raw_out;
  std::optional<std::string> features;
  std::optional<std::string> smooth;
  std::optional<int> median_order;
  std::optional<double> ma_halfwidth_ms;
  std::optional<unsigned> threads;
};

struct EvalArgs {
  std::string manifest;
  std::string model;
  std::vector<std::string> features;
  std::string out_dir = ".";
  std::string config;
  std::optional<unsigned> threads;
};

PipelineConfig load_config(const std::string& path) {
  PipelineConfig cfg;
  if (!path.empty()) apply_config_file(path, cfg);
  return cfg;
}

int run_synth(const SynthArgs& a, std::ostream& out) {
  if (a.n == 0) throw ValidationError("--n must be at least 1");
  CorpusOptions opt;
  opt.duration = a.duration;
  opt.sample_rate = a.sample_rate;
  opt.hnr_low_db = a.hnr_db;
  opt.threads = a.threads;
  const CorpusManifest m = generate_corpus(a.out, parse_preset(a.preset), a.n, a.seed, opt);
  out << "wrote " << m.entries.size() << " files and "
      << (std::filesystem::path(a.out) / "manifest.csv").string() << '\n';
  return 0;
}

int run_train(const TrainArgs& a, std::ostream& out) {
  PipelineConfig cfg = load_config(a.config);
  if (a.threads) cfg.threads = *a.threads;
  const FeatureSet features = FeatureSet::parse(a.features);
  const CorpusManifest manifest = io::read_manifest(a.manifest);
  FitOptions fit;
  fit.min_count = a.min_count;
  const GaussianModel model = train_from_manifest(manifest, features, cfg, fit);
  const std::string comment = "trained on the dev split of " +
                              std::filesystem::path(a.manifest).filename().string() +
                              ", features " + features.to_string();
  io::write_model(model, a.out, comment);
  out << "wrote " << a.out << " (" << features.method_name() << ")\n";
  return 0;
}

int run_estimate(const EstimateArgs& a, std::ostream& err) {
  PipelineConfig cfg = load_config(a.config);
  if (a.features) cfg.enabled_features = FeatureSet::parse(*a.features);
  if (a.smooth) cfg.smoother.mode = parse_smooth_mode(*a.smooth);
  if (a.median_order) cfg.smoother.median_order = *a.median_order;
  if (a.ma_halfwidth_ms) cfg.smoother.ma_halfwidth = *a.ma_halfwidth_ms / 1000.0;
  if (a.threads) cfg.threads = *a.threads;
  if (!a.model.empty()) cfg.model_path = a.model;
  if (cfg.model_path.empty()) throw ValidationError("no model given (--model or 'model' in --config)");
  cfg.validate();

  const GaussianModel model = io::read_model(cfg.model_path);
  const AudioBuffer audio = io::read_wav(a.wav);
  const F0Track f0 = io::read_f0_csv(a.f0);
  const ContourEstimate est = estimate_contour(audio, f0, cfg, model);
  io::write_contour_csv(est.smoothed, a.out);
  if (!a.raw_out.empty()) io::write_contour_csv(est.raw, a.raw_out);
  if (!a.dump_features.empty()) {
    std::ofstream dump(a.dump_features, std::ios::binary);
    if (!dump) throw IoError("cannot write '" + a.dump_features + "'");
    write_feature_dump(est.features, dump);
  }
  err << est.diagnostics.summary() << '\n';
  return 0;
}

int run_eval(const EvalArgs& a, std::ostream& out) {
  PipelineConfig cfg = load_config(a.config);
  if (a.threads) cfg.threads = *a.threads;
  std::vector<FeatureSet> sets;
  for (const std::string& f : a.features) sets.push_back(FeatureSet::parse(f));
  const std::string model_path = a.model.empty() ? cfg.model_path : a.model;
  if (model_path.empty()) throw ValidationError("no model given (--model or 'model' in --config)");

  const GaussianModel model = io::read_model(model_path);
  if (sets.empty()) {
    for (FeatureSet s : standard_feature_sets()) {
      if (s.is_subset_of(model.enabled())) sets.push_back(s);
    }
  }
  const CorpusManifest manifest = io::read_manifest(a.manifest);
  const std::vector<EvalReport> reports = compare_methods(manifest, sets, model, cfg);
  write_reports(reports, a.out_dir);
  char line[128];
  for (const EvalReport& r : reports) {
    for (const ClassScore& c : r.classes) {
      std::snprintf(line, sizeof line, "%-14s %-11s AUC %.4f  (%zu frames)\n", r.method.c_str(),
                    c.label.c_str(), c.auc, c.n_frames);
      out << line;
    }
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum voiced frequency estimation from harmonic phase and amplitude features", "mvf"};
  app.require_subcommand(1);

  SynthArgs sa;
  CLI::App* synth = app.add_subcommand("synth", "Generate a semi-synthetic corpus with known MVF");
  synth->add_option("--preset", sa.preset, "speech_like | singing_like | mixed")->capture_default_str();
  synth->add_option("--n", sa.n, "Number of base voices")->required();
  synth->add_option("--seed", sa.seed, "Random seed")->capture_default_str();
  synth->add_option("--out", sa.out, "Output directory")->required();
  synth->add_option("--duration", sa.duration, "Seconds per file")->capture_default_str();
  synth->add_option("--sample-rate", sa.sample_rate, "Hz")->capture_default_str();
  synth->add_option("--hnr-db", sa.hnr_db, "Harmonic-to-noise margin below the MVF")->capture_default_str();
  synth->add_option("--threads", sa.threads, "0 = all cores")->capture_default_str();

  TrainArgs ta;
  CLI::App* train = app.add_subcommand("train", "Fit the Gaussian model on a manifest's dev split");
  train->add_option("--manifest", ta.manifest, "Corpus manifest CSV")->required();
  train->add_option("--features", ta.features, "Comma-separated subset of as,ihpc,icpc")->capture_default_str();
  train->add_option("--out", ta.out, "Model file to write")->required();
  train->add_option("--min-count", ta.min_count, "Minimum samples per feature and hypothesis")->capture_default_str();
  train->add_option("--config", ta.config, "Key-value config file");
  train->add_option("--threads", ta.threads, "0 = all cores");

  EstimateArgs ea;
  CLI::App* estimate = app.add_subcommand("estimate", "Estimate the MVF contour of one file");
  estimate->add_option("--wav", ea.wav, "Input WAV")->required();
  estimate->add_option("--f0", ea.f0, "F0 track CSV (time_s,f0_hz)")->required();
  estimate->add_option("--model", ea.model, "Model file");
  estimate->add_option("--out", ea.out, "Smoothed contour CSV to write")->required();
  estimate->add_option("--raw-out", ea.raw_out, "Also write the unsmoothed contour");
  estimate->add_option("--features", ea.features, "Comma-separated subset of as,ihpc,icpc");
  estimate->add_option("--smooth", ea.smooth, "none | median | ma");
  estimate->add_option("--median-order", ea.median_order, "Median window in frames (odd)");
  estimate->add_option("--ma-halfwidth-ms", ea.ma_halfwidth_ms, "Moving-average half width");
  estimate->add_option("--config", ea.config, "Key-value config file");
  estimate->add_option("--dump-features", ea.dump_features, "Per-candidate feature CSV");
  estimate->add_option("--threads", ea.threads, "0 = all cores");

  EvalArgs va;
  CLI::App* eval = app.add_subcommand("eval", "Score feature subsets on a manifest's test split");
  eval->add_option("--manifest", va.manifest, "Corpus manifest CSV")->required();
  eval->add_option("--model", va.model, "Model file");
  eval->add_option("--features", va.features, "Feature subset, repeatable (default: every standard variant the model covers)");
  eval->add_option("--out-dir", va.out_dir, "Directory for report.csv and roc_*.csv")->capture_default_str();
  eval->add_option("--config", va.config, "Key-value config file");
  eval->add_option("--threads", va.threads, "0 = all cores");

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("mvf");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (synth->parsed()) return run_synth(sa, out);
    if (train->parsed()) return run_train(ta, out);
    if (estimate->parsed()) return run_estimate(ea, err);
    if (eval->parsed()) return run_eval(va, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace mvf
