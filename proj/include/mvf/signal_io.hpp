#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mvf/types.hpp"

namespace mvf::io {

enum class WavEncoding { kPcm16, kFloat32 };

/// Reads RIFF/WAVE PCM16 or IEEE float32. Multi-channel files keep the first
/// channel and print a warning on stderr.
AudioBuffer read_wav(const std::filesystem::path& path);
void write_wav(const AudioBuffer& audio, const std::filesystem::path& path,
               WavEncoding encoding = WavEncoding::kFloat32);

/// Two columns `time_s,f0_hz`, optional header. The frame shift comes from the
/// first two timestamps; every later step must match it to 1e-6 s.
F0Track read_f0_csv(const std::filesystem::path& path);
F0Track parse_f0_csv(std::istream& in);
void write_f0_csv(const F0Track& track, const std::filesystem::path& path);

/// `time_s,mvf_hz` rows in 6-decimal fixed point under a header line.
void write_contour_csv(const MvfContour& contour, const std::filesystem::path& path);
void write_contour_csv(const MvfContour& contour, std::ostream& out);
/// Voicing is reconstructed as value > 0.
MvfContour read_contour_csv(const std::filesystem::path& path);

/// Key-value model text: `feature.hypothesis.param = value`, `#` comments.
GaussianModel read_model(const std::filesystem::path& path);
GaussianModel parse_model(std::istream& in);
void write_model(const GaussianModel& model, const std::filesystem::path& path,
                 const std::string& comment = {});
void write_model(const GaussianModel& model, std::ostream& out,
                 const std::string& comment = {});

/// CSV `wav_path,f0_path,mvf_true_hz,split,voice_class` with header.
CorpusManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);

}  // namespace mvf::io
