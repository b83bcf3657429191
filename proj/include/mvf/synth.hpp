#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string_view>

#include "mvf/types.hpp"

namespace mvf {

/// One semi-synthetic voiced signal with an imposed maximum voiced frequency.
struct SynthSpec {
  double duration = 1.0;  // seconds
  int sample_rate = 16000;
  F0Track f0_contour;     // every frame voiced, 80..800 Hz
  double mvf_true = 4000.0;
  double hnr_low_db = 30.0;  // harmonic-over-noise margin below the MVF; +inf for none
  double spectral_tilt_db_per_oct = -6.0;
  std::uint64_t phase_seed = 0;  // harmonic phases
  std::uint64_t noise_seed = 0;

  /// Throws PreconditionError (mvf below F0) or ValidationError.
  void validate() const;
};

struct SynthResult {
  AudioBuffer audio;
  F0Track f0;
};

/// Separately scaled parts of a synthesized signal; audio = harmonic + noise.
struct SynthComponents {
  AudioBuffer harmonic;
  AudioBuffer noise;
  double gain = 1.0;  // peak-normalization factor already applied to both
};

/// Harmonics h * f0(t) up to mvf_true with tilt-following amplitudes and fixed
/// random phases, plus Gaussian noise shaped in the frequency domain: its
/// level per harmonic spacing follows the harmonic envelope above mvf_true and
/// sits hnr_low_db below it underneath, with a 100 Hz raised-cosine
/// transition starting at mvf_true. Harmonics at or below mvf_true keep full
/// amplitude and fade out over the next 50 Hz, so partials drifting across the
/// boundary do not click.
/// The sum is peak-normalized to 0.5.
SynthResult synthesize(const SynthSpec& spec);
SynthComponents synthesize_components(const SynthSpec& spec);

/// f0(t) = base (1 + depth sin(2 pi rate t + phase)) sampled every frame_shift.
F0Track make_f0_contour(double base_f0, double duration, double frame_shift = 0.01,
                        double depth = 0.03, double rate_hz = 3.0, double phase = 0.0);

enum class Preset { kSpeechLike, kSingingLike, kMixed };
Preset parse_preset(std::string_view text);

struct CorpusOptions {
  double duration = 1.0;
  int sample_rate = 16000;
  double hnr_low_db = 30.0;
  double spectral_tilt_db_per_oct = -6.0;
  unsigned threads = 0;
};

inline constexpr double kLowPitchMinHz = 90.0;
inline constexpr double kLowPitchMaxHz = 220.0;
inline constexpr double kHighPitchMinHz = 250.0;
inline constexpr double kHighPitchMaxHz = 700.0;

/// n_files base voices, each rendered at MVF 1..7 kHz, written as
/// `<out_dir>/baseNNN_mvfKk.wav` + `baseNNN_mvfKk.f0.csv`, with `manifest.csv`.
/// The first half of the base voices is the dev split, the rest test; all
/// variants of a base voice share its split. Deterministic in `seed`.
CorpusManifest generate_corpus(const std::filesystem::path& out_dir, Preset preset,
                               std::size_t n_files, std::uint64_t seed,
                               const CorpusOptions& options = {});

}  // namespace mvf
