#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvf {

/// Mono audio, samples nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;

  double nyquist() const { return 0.5 * sample_rate; }
  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// Throws InputError unless the buffer is non-empty, finite and sampled at >= 8 kHz.
void validate(const AudioBuffer& audio);

/// Uniformly sampled F0 track; 0 marks an unvoiced frame.
struct F0Track {
  double frame_shift = 0.01;
  double start_time = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double time_at(std::size_t frame) const {
    return start_time + static_cast<double>(frame) * frame_shift;
  }
  bool voiced(std::size_t frame) const { return values[frame] > 0.0; }
};

inline constexpr double kMinF0Hz = 40.0;
inline constexpr double kMaxF0Hz = 1500.0;

void validate(const F0Track& track);

/// Per-frame MVF estimates in Hz. `voiced` follows the driving F0 track, so a
/// voiced frame may legitimately carry 0 Hz (every candidate rejected).
struct MvfContour {
  double frame_shift = 0.01;
  double start_time = 0.0;
  std::vector<double> values;
  std::vector<bool> voiced;

  std::size_t size() const { return values.size(); }
  double time_at(std::size_t frame) const {
    return start_time + static_cast<double>(frame) * frame_shift;
  }
};

// ---------------------------------------------------------------------------
// Features and the trained decision model.

enum class Feature : std::uint8_t { kAs = 0, kIhpc = 1, kIcpc = 2 };

inline constexpr std::array<Feature, 3> kAllFeatures = {Feature::kAs, Feature::kIhpc,
                                                        Feature::kIcpc};

/// Lower-case key used in model files and CLI flags ("as", "ihpc", "icpc").
std::string_view feature_key(Feature f);

/// Small bit set over Feature.
class FeatureSet {
 public:
  constexpr FeatureSet() = default;
  constexpr FeatureSet(std::initializer_list<Feature> features) {
    for (Feature f : features) insert(f);
  }

  constexpr void insert(Feature f) { bits_ |= bit(f); }
  constexpr bool contains(Feature f) const { return (bits_ & bit(f)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_subset_of(FeatureSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr FeatureSet intersect(FeatureSet other) const {
    FeatureSet out;
    out.bits_ = bits_ & other.bits_;
    return out;
  }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool operator==(const FeatureSet&) const = default;

  /// Parses "as,ihpc" (case-insensitive; '+' and '-' also accepted as separators).
  static FeatureSet parse(std::string_view text);
  /// "as,ihpc"
  std::string to_string() const;
  /// "AS-IHPC", the method label used in reports.
  std::string method_name() const;

 private:
  static constexpr std::uint8_t bit(Feature f) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(f));
  }
  std::uint8_t bits_ = 0;
};

/// The five feature combinations compared in the objective evaluation.
std::vector<FeatureSet> standard_feature_sets();

/// Both hypotheses' Gaussian parameters for one feature. H1 is "harmonic".
struct GaussianParams {
  double h1_mean = 0.0;
  double h1_var = 1.0;
  double h0_mean = 0.0;
  double h0_var = 1.0;

  bool operator==(const GaussianParams&) const = default;
};

class GaussianModel {
 public:
  /// Throws ValidationError on non-finite values or a variance <= 0.
  void set(Feature f, const GaussianParams& params);
  bool has(Feature f) const { return params_[index(f)].has_value(); }
  const GaussianParams& at(Feature f) const;
  FeatureSet enabled() const;
  /// Copy keeping only features in `subset`.
  GaussianModel restricted_to(FeatureSet subset) const;

  bool operator==(const GaussianModel&) const = default;

 private:
  static std::size_t index(Feature f) { return static_cast<std::size_t>(f); }
  std::array<std::optional<GaussianParams>, 3> params_{};
};

// ---------------------------------------------------------------------------
// Corpus manifest.

enum class Split : std::uint8_t { kDev, kTest };
enum class VoiceClass : std::uint8_t { kLowPitch, kHighPitch };

std::string_view to_string(Split s);
std::string_view to_string(VoiceClass v);
Split parse_split(std::string_view text);
VoiceClass parse_voice_class(std::string_view text);

struct ManifestEntry {
  std::string wav_path;  // relative to the manifest's directory unless absolute
  std::string f0_path;
  double mvf_true_hz = 0.0;
  Split split = Split::kDev;
  VoiceClass voice_class = VoiceClass::kLowPitch;

  bool operator==(const ManifestEntry&) const = default;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::string base_dir;  // directory the relative paths resolve against

  std::string resolve(const std::string& path) const;
};

}  // namespace mvf
