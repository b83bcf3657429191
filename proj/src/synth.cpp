#include "mvf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fft.hpp"
#include "mvf/error.hpp"
#include "mvf/parallel.hpp"
#include "mvf/signal_io.hpp"

namespace mvf {
namespace {

constexpr double kHarmonicFadeHz = 50.0;
constexpr double kNoiseTransitionHz = 100.0;
constexpr double kPeakLevel = 0.5;
constexpr double kMvfGridHz[] = {1000, 2000, 3000, 4000, 5000, 6000, 7000};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double raised_cosine(double x) {  // 0 at x <= 0, 1 at x >= 1
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * x));
}

double f0_at(const F0Track& track, double t) {
  const double pos = (t - track.start_time) / track.frame_shift;
  if (pos <= 0.0) return track.values.front();
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= track.size()) return track.values.back();
  const double frac = pos - static_cast<double>(i);
  return track.values[i] + frac * (track.values[i + 1] - track.values[i]);
}

}  // namespace

void SynthSpec::validate() const {
  if (!(duration >= 0.5)) throw ValidationError("synthesis duration must be >= 0.5 s");
  if (sample_rate < 8000) throw ValidationError("synthesis sample rate must be >= 8000 Hz");
  if (f0_contour.values.empty()) throw ValidationError("synthesis needs an F0 contour");
  if (!(f0_contour.frame_shift > 0.0)) throw ValidationError("F0 contour frame shift must be positive");
  double max_f0 = 0.0;
  for (double f : f0_contour.values) {
    if (!(f >= 80.0 && f <= 800.0)) {
      throw ValidationError("synthesis F0 values must lie in [80, 800] Hz");
    }
    max_f0 = std::max(max_f0, f);
  }
  if (!(mvf_true > 0.0) || mvf_true > 0.5 * sample_rate) {
    throw ValidationError("mvf_true must lie in (0, Nyquist]");
  }
  if (mvf_true < max_f0) throw PreconditionError("mvf_true below F0 leaves no harmonic band");
  if (std::isnan(hnr_low_db)) throw ValidationError("hnr_low_db is NaN");
}

F0Track make_f0_contour(double base_f0, double duration, double frame_shift, double depth,
                        double rate_hz, double phase) {
  F0Track track;
  track.frame_shift = frame_shift;
  const auto frames = static_cast<std::size_t>(std::floor(duration / frame_shift + 1e-9));
  track.values.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const double t = static_cast<double>(i) * frame_shift;
    track.values[i] =
        base_f0 * (1.0 + depth * std::sin(2.0 * std::numbers::pi * rate_hz * t + phase));
  }
  return track;
}

SynthComponents synthesize_components(const SynthSpec& spec) {
  spec.validate();
  const int fs = spec.sample_rate;
  const double nyquist = 0.5 * fs;
  const auto length = static_cast<std::size_t>(std::llround(spec.duration * fs));
  const double tilt_exponent = spec.spectral_tilt_db_per_oct / (20.0 * std::log10(2.0));

  double f0_sum = 0.0;
  double f0_min = spec.f0_contour.values.front();
  for (double f : spec.f0_contour.values) {
    f0_sum += f;
    f0_min = std::min(f0_min, f);
  }
  const double f0_ref = f0_sum / static_cast<double>(spec.f0_contour.size());

  // Harmonic part.
  std::vector<double> inst_f0(length);
  std::vector<double> phase(length);
  double acc = 0.0;
  for (std::size_t n = 0; n < length; ++n) {
    inst_f0[n] = f0_at(spec.f0_contour, static_cast<double>(n) / fs);
    phase[n] = acc;
    acc += 2.0 * std::numbers::pi * inst_f0[n] / fs;
  }
  const auto max_harmonic =
      static_cast<int>(std::floor(std::min(spec.mvf_true + kHarmonicFadeHz, nyquist) / f0_min));
  std::mt19937_64 phase_rng(splitmix64(spec.phase_seed));
  std::uniform_real_distribution<double> uniform_phase(0.0, 2.0 * std::numbers::pi);

  SynthComponents out;
  out.harmonic.sample_rate = fs;
  out.noise.sample_rate = fs;
  out.harmonic.samples.assign(length, 0.0);
  for (int h = 1; h <= max_harmonic; ++h) {
    const double psi = uniform_phase(phase_rng);
    const double amp = std::pow(static_cast<double>(h), tilt_exponent);
    for (std::size_t n = 0; n < length; ++n) {
      const double f = h * inst_f0[n];
      const double fade = 1.0 - raised_cosine((f - spec.mvf_true) / kHarmonicFadeHz);
      if (fade <= 0.0 || f >= nyquist) continue;
      out.harmonic.samples[n] += amp * fade * std::cos(std::fmod(h * phase[n], 2.0 * std::numbers::pi) + psi);
    }
  }

  // Noise part, shaped on a power-of-two grid and cropped.
  std::size_t size = 1;
  while (size < length) size <<= 1;
  std::mt19937_64 noise_rng(splitmix64(spec.noise_seed ^ 0x6E6F697365ull));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> white(size);
  for (double& v : white) v = gauss(noise_rng);
  std::vector<double> spectrum = detail::real_dft(white, size);

  const double low_level = std::isinf(spec.hnr_low_db) && spec.hnr_low_db > 0
                               ? 0.0
                               : std::pow(10.0, -spec.hnr_low_db / 10.0);
  const double bin_hz = static_cast<double>(fs) / static_cast<double>(size);
  for (std::size_t k = 0; k <= size / 2; ++k) {
    const double f = static_cast<double>(k) * bin_hz;
    const double envelope = std::pow(std::max(f, f0_ref) / f0_ref, tilt_exponent);
    const double ramp = raised_cosine((f - spec.mvf_true) / kNoiseTransitionHz);
    const double level = low_level + (1.0 - low_level) * ramp;
    // One-sided PSD matching the harmonic power per f0-wide band, scaled by level.
    const double psd = envelope * envelope / (2.0 * f0_ref) * level;
    const double h = k == 0 ? 0.0 : std::sqrt(psd * fs / 2.0);
    spectrum[2 * k] *= h / static_cast<double>(size);
    spectrum[2 * k + 1] *= h / static_cast<double>(size);
  }
  std::vector<double> shaped = detail::inverse_real_dft(spectrum, size);
  out.noise.samples.assign(shaped.begin(), shaped.begin() + static_cast<std::ptrdiff_t>(length));

  double peak = 0.0;
  for (std::size_t n = 0; n < length; ++n) {
    peak = std::max(peak, std::fabs(out.harmonic.samples[n] + out.noise.samples[n]));
  }
  out.gain = peak > 0.0 ? kPeakLevel / peak : 1.0;
  for (double& v : out.harmonic.samples) v *= out.gain;
  for (double& v : out.noise.samples) v *= out.gain;
  return out;
}

SynthResult synthesize(const SynthSpec& spec) {
  SynthComponents parts = synthesize_components(spec);
  SynthResult result;
  result.audio.sample_rate = spec.sample_rate;
  result.audio.samples.resize(parts.harmonic.samples.size());
  for (std::size_t n = 0; n < result.audio.samples.size(); ++n) {
    result.audio.samples[n] = parts.harmonic.samples[n] + parts.noise.samples[n];
  }
  result.f0 = spec.f0_contour;
  return result;
}

Preset parse_preset(std::string_view text) {
  if (text == "speech_like") return Preset::kSpeechLike;
  if (text == "singing_like") return Preset::kSingingLike;
  if (text == "mixed") return Preset::kMixed;
  throw ValidationError("unknown preset '" + std::string(text) + "'");
}

CorpusManifest generate_corpus(const std::filesystem::path& out_dir, Preset preset,
                               std::size_t n_files, std::uint64_t seed,
                               const CorpusOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  struct BaseVoice {
    std::string stem;
    VoiceClass voice_class;
    Split split;
    F0Track f0;
    std::uint64_t phase_seed;
    std::uint64_t noise_seed;
  };
  std::vector<BaseVoice> voices(n_files);
  const std::size_t dev_count = (n_files + 1) / 2;
  for (std::size_t i = 0; i < n_files; ++i) {
    const std::uint64_t sub = splitmix64(seed ^ splitmix64(i + 1));
    std::mt19937_64 rng(sub);
    BaseVoice& v = voices[i];
    v.voice_class = preset == Preset::kSpeechLike    ? VoiceClass::kLowPitch
                    : preset == Preset::kSingingLike ? VoiceClass::kHighPitch
                    : (i % 2 == 0)                   ? VoiceClass::kLowPitch
                                                     : VoiceClass::kHighPitch;
    v.split = i < dev_count ? Split::kDev : Split::kTest;
    const bool high = v.voice_class == VoiceClass::kHighPitch;
    std::uniform_real_distribution<double> f0_dist(high ? kHighPitchMinHz : kLowPitchMinHz,
                                                   high ? kHighPitchMaxHz : kLowPitchMaxHz);
    std::uniform_real_distribution<double> mod_phase(0.0, 2.0 * std::numbers::pi);
    const double base_f0 = f0_dist(rng);
    v.f0 = make_f0_contour(base_f0, options.duration, 0.01, 0.03, 3.0, mod_phase(rng));
    v.phase_seed = rng();
    v.noise_seed = rng();
    char stem[32];
    std::snprintf(stem, sizeof stem, "base%03zu", i);
    v.stem = stem;
  }

  constexpr std::size_t kVariants = std::size(kMvfGridHz);
  CorpusManifest manifest;
  manifest.base_dir = out_dir.string();
  manifest.entries.resize(n_files * kVariants);
  parallel_for(n_files * kVariants, options.threads, [&](std::size_t job) {
    const BaseVoice& v = voices[job / kVariants];
    const std::size_t variant = job % kVariants;
    SynthSpec spec;
    spec.duration = options.duration;
    spec.sample_rate = options.sample_rate;
    spec.f0_contour = v.f0;
    spec.mvf_true = kMvfGridHz[variant];
    spec.hnr_low_db = options.hnr_low_db;
    spec.spectral_tilt_db_per_oct = options.spectral_tilt_db_per_oct;
    spec.phase_seed = v.phase_seed;
    spec.noise_seed = splitmix64(v.noise_seed + variant);
    const SynthResult r = synthesize(spec);

    ManifestEntry& e = manifest.entries[job];
    const std::string name = v.stem + "_mvf" + std::to_string(variant + 1) + "k";
    e.wav_path = name + ".wav";
    e.f0_path = name + ".f0.csv";
    e.mvf_true_hz = spec.mvf_true;
    e.split = v.split;
    e.voice_class = v.voice_class;
    io::write_wav(r.audio, out_dir / e.wav_path, io::WavEncoding::kFloat32);
    io::write_f0_csv(v.f0, out_dir / e.f0_path);
  });
  io::write_manifest(manifest, out_dir / "manifest.csv");
  return manifest;
}

}  // namespace mvf
