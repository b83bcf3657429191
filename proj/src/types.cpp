#include "mvf/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>

#include "mvf/error.hpp"

namespace mvf {

void validate(const AudioBuffer& audio) {
  if (audio.samples.empty()) throw InputError("audio buffer is empty");
  if (audio.sample_rate < 8000) {
    throw InputError("sample rate " + std::to_string(audio.sample_rate) +
                     " Hz is below the supported minimum of 8000 Hz");
  }
  for (double s : audio.samples) {
    if (!std::isfinite(s)) throw InputError("audio contains non-finite samples");
  }
}

void validate(const F0Track& track) {
  if (!(track.frame_shift > 0.0) || !std::isfinite(track.frame_shift)) {
    throw InputError("F0 track frame shift must be positive");
  }
  for (double v : track.values) {
    if (!std::isfinite(v)) throw InputError("F0 track contains non-finite values");
    if (v < 0.0) throw InputError("F0 track contains a negative value");
    if (v != 0.0 && (v < kMinF0Hz || v > kMaxF0Hz)) {
      throw InputError("F0 value " + std::to_string(v) + " Hz outside [40, 1500] Hz");
    }
  }
}

std::string_view feature_key(Feature f) {
  switch (f) {
    case Feature::kAs:
      return "as";
    case Feature::kIhpc:
      return "ihpc";
    case Feature::kIcpc:
      return "icpc";
  }
  return "?";
}

FeatureSet FeatureSet::parse(std::string_view text) {
  FeatureSet out;
  std::string token;
  auto flush = [&]() {
    if (token.empty()) return;
    bool found = false;
    for (Feature f : kAllFeatures) {
      if (token == feature_key(f)) {
        out.insert(f);
        found = true;
      }
    }
    if (!found) throw ValidationError("unknown feature '" + token + "'");
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == '+' || c == '-' || c == ' ') {
      flush();
    } else {
      token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  if (out.empty()) throw ValidationError("feature set is empty");
  return out;
}

std::string FeatureSet::to_string() const {
  std::string s;
  for (Feature f : kAllFeatures) {
    if (!contains(f)) continue;
    if (!s.empty()) s += ',';
    s += feature_key(f);
  }
  return s;
}

std::string FeatureSet::method_name() const {
  std::string s;
  for (Feature f : kAllFeatures) {
    if (!contains(f)) continue;
    if (!s.empty()) s += '-';
    for (char c : feature_key(f)) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return s;
}

std::vector<FeatureSet> standard_feature_sets() {
  return {FeatureSet{Feature::kAs}, FeatureSet{Feature::kIhpc}, FeatureSet{Feature::kIcpc},
          FeatureSet{Feature::kAs, Feature::kIhpc},
          FeatureSet{Feature::kAs, Feature::kIhpc, Feature::kIcpc}};
}

void GaussianModel::set(Feature f, const GaussianParams& p) {
  const std::string name(feature_key(f));
  for (double v : {p.h1_mean, p.h1_var, p.h0_mean, p.h0_var}) {
    if (!std::isfinite(v)) throw ValidationError(name + ": non-finite model parameter");
  }
  if (!(p.h1_var > 0.0)) throw ValidationError(name + ".h1.var must be > 0");
  if (!(p.h0_var > 0.0)) throw ValidationError(name + ".h0.var must be > 0");
  params_[index(f)] = p;
}

const GaussianParams& GaussianModel::at(Feature f) const {
  if (!has(f)) {
    throw PreconditionError("model has no parameters for feature '" +
                            std::string(feature_key(f)) + "'");
  }
  return *params_[index(f)];
}

FeatureSet GaussianModel::enabled() const {
  FeatureSet s;
  for (Feature f : kAllFeatures) {
    if (has(f)) s.insert(f);
  }
  return s;
}

GaussianModel GaussianModel::restricted_to(FeatureSet subset) const {
  GaussianModel out;
  for (Feature f : kAllFeatures) {
    if (has(f) && subset.contains(f)) out.params_[index(f)] = params_[index(f)];
  }
  return out;
}

std::string_view to_string(Split s) { return s == Split::kDev ? "dev" : "test"; }

std::string_view to_string(VoiceClass v) {
  return v == VoiceClass::kLowPitch ? "low_pitch" : "high_pitch";
}

Split parse_split(std::string_view text) {
  if (text == "dev") return Split::kDev;
  if (text == "test") return Split::kTest;
  throw FormatError("unknown split '" + std::string(text) + "'");
}

VoiceClass parse_voice_class(std::string_view text) {
  if (text == "low_pitch") return VoiceClass::kLowPitch;
  if (text == "high_pitch") return VoiceClass::kHighPitch;
  throw FormatError("unknown voice class '" + std::string(text) + "'");
}

std::string CorpusManifest::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace mvf
