#include "mvf/signal_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "mvf/error.hpp"

namespace mvf::io {
namespace {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T load_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void put_le(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Strict full-field parse; returns nullopt for headers and junk.
std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ifstream in(path, std::ios::in | mode);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// WAV

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("'" + name + "' is not a RIFF/WAVE file");
  }

  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  bool have_fmt = false;
  const char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* chunk = bytes.data() + pos;
    const auto size = static_cast<std::size_t>(load_le<std::uint32_t>(chunk + 4));
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) throw FormatError("'" + name + "': truncated fmt chunk");
      format = load_le<std::uint16_t>(chunk + 8);
      channels = load_le<std::uint16_t>(chunk + 10);
      rate = load_le<std::uint32_t>(chunk + 12);
      bits = load_le<std::uint16_t>(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40) throw FormatError("'" + name + "': truncated extensible fmt chunk");
        format = load_le<std::uint16_t>(chunk + 8 + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = std::min(size, available);  // tolerate writers that leave the size unpatched
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) throw FormatError("'" + name + "': missing fmt chunk");
  if (data == nullptr) throw FormatError("'" + name + "': missing data chunk");
  if (channels == 0) throw FormatError("'" + name + "': zero channels");
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw FormatError("'" + name + "': only PCM16 and float32 WAV are supported");
  }

  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * (bits / 8);
  const std::size_t frames = data_size / frame_bytes;
  if (frames == 0) throw InputError("'" + name + "' contains no samples");
  if (channels > 1) {
    std::cerr << "warning: '" << name << "' has " << channels
              << " channels; using the first channel only\n";
  }

  AudioBuffer audio;
  audio.sample_rate = static_cast<int>(rate);
  audio.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const char* p = data + i * frame_bytes;
    if (pcm16) {
      audio.samples[i] = static_cast<double>(load_le<std::int16_t>(p)) / 32768.0;
    } else {
      const float v = load_le<float>(p);
      if (!std::isfinite(v)) throw FormatError("'" + name + "' contains non-finite samples");
      audio.samples[i] = static_cast<double>(v);
    }
  }
  if (audio.sample_rate < 8000) {
    throw InputError("'" + name + "': sample rate below 8000 Hz");
  }
  return audio;
}

void write_wav(const AudioBuffer& audio, const std::filesystem::path& path, WavEncoding encoding) {
  validate(audio);
  const bool pcm16 = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm16 ? 16 : 32;
  const std::uint16_t block_align = bits / 8;
  const auto data_size = static_cast<std::uint32_t>(audio.samples.size() * block_align);

  std::ofstream out = open_out(path, std::ios::binary);
  out.write("RIFF", 4);
  put_le<std::uint32_t>(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_le<std::uint32_t>(out, 16);
  put_le<std::uint16_t>(out, pcm16 ? kFormatPcm : kFormatFloat);
  put_le<std::uint16_t>(out, 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(audio.sample_rate));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(audio.sample_rate) * block_align);
  put_le<std::uint16_t>(out, block_align);
  put_le<std::uint16_t>(out, bits);
  out.write("data", 4);
  put_le<std::uint32_t>(out, data_size);
  for (double s : audio.samples) {
    if (pcm16) {
      const double scaled = std::nearbyint(s * 32768.0);
      put_le<std::int16_t>(out, static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0)));
    } else {
      put_le<float>(out, static_cast<float>(s));
    }
  }
  finish(out, path);
}

// ---------------------------------------------------------------------------
// F0 / contour CSV

F0Track parse_f0_csv(std::istream& in) {
  std::vector<double> times;
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_commas(t);
    if (fields.size() != 2) {
      throw FormatError("F0 CSV line " + std::to_string(line_no) + ": expected two columns");
    }
    const auto time = parse_number(fields[0]);
    const auto f0 = parse_number(fields[1]);
    if (!time || !f0) {
      if (times.empty() && values.empty() && line_no == 1) continue;  // header
      throw FormatError("F0 CSV line " + std::to_string(line_no) + ": not numeric");
    }
    if (!std::isfinite(*time) || !std::isfinite(*f0)) {
      throw FormatError("F0 CSV line " + std::to_string(line_no) + ": non-finite value");
    }
    if (*f0 < 0.0) {
      throw InputError("F0 CSV line " + std::to_string(line_no) + ": negative F0");
    }
    times.push_back(*time);
    values.push_back(*f0);
  }
  if (values.empty()) throw InputError("F0 CSV contains no rows");
  if (values.size() < 2) throw FormatError("F0 CSV needs at least two rows to infer the frame shift");

  F0Track track;
  track.start_time = times.front();
  track.frame_shift = times[1] - times[0];
  if (!(track.frame_shift > 0.0)) throw FormatError("F0 CSV timestamps must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double expected = track.start_time + static_cast<double>(i) * track.frame_shift;
    if (std::fabs(times[i] - expected) > 1e-6 ||
        std::fabs((times[i] - times[i - 1]) - track.frame_shift) > 1e-6) {
      throw FormatError("F0 CSV timestamps are not uniformly spaced (row " +
                        std::to_string(i + 1) + ")");
    }
  }
  track.values = std::move(values);
  validate(track);
  return track;
}

F0Track read_f0_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return parse_f0_csv(in);
}

void write_f0_csv(const F0Track& track, const std::filesystem::path& path) {
  std::ofstream out = open_out(path, std::ios::binary);
  out << "time_s,f0_hz\n";
  for (std::size_t i = 0; i < track.size(); ++i) {
    out << fixed6(track.time_at(i)) << ',' << fixed6(track.values[i]) << '\n';
  }
  finish(out, path);
}

void write_contour_csv(const MvfContour& contour, std::ostream& out) {
  out << "time_s,mvf_hz\n";
  for (std::size_t i = 0; i < contour.size(); ++i) {
    const double v = contour.values[i];
    if (!std::isfinite(v)) throw ValidationError("contour holds a non-finite value");
    out << fixed6(contour.time_at(i)) << ',' << fixed6(v) << '\n';
  }
}

void write_contour_csv(const MvfContour& contour, const std::filesystem::path& path) {
  std::ofstream out = open_out(path, std::ios::binary);
  write_contour_csv(contour, out);
  finish(out, path);
}

MvfContour read_contour_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<double> times;
  MvfContour contour;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_commas(t);
    const auto time = fields.size() == 2 ? parse_number(fields[0]) : std::nullopt;
    const auto mvf = fields.size() == 2 ? parse_number(fields[1]) : std::nullopt;
    if (!time || !mvf) {
      if (line_no == 1) continue;
      throw FormatError("contour CSV line " + std::to_string(line_no) + ": malformed");
    }
    if (!std::isfinite(*time) || !std::isfinite(*mvf) || *mvf < 0.0) {
      throw FormatError("contour CSV line " + std::to_string(line_no) + ": invalid value");
    }
    times.push_back(*time);
    contour.values.push_back(*mvf);
    contour.voiced.push_back(*mvf > 0.0);
  }
  if (!times.empty()) contour.start_time = times.front();
  if (times.size() >= 2) contour.frame_shift = times[1] - times[0];
  return contour;
}

// ---------------------------------------------------------------------------
// Model

GaussianModel parse_model(std::istream& in) {
  // feature -> param name ("h1.mean", ...) -> value
  std::map<std::string, std::map<std::string, double>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw FormatError("model line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value_text = trim(std::string_view(t).substr(eq + 1));
    const auto value = parse_number(value_text);
    if (!value || !std::isfinite(*value)) {
      throw FormatError("model line " + std::to_string(line_no) + ": bad value '" + value_text + "'");
    }
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      throw FormatError("model line " + std::to_string(line_no) + ": bad key '" + key + "'");
    }
    const std::string feature = key.substr(0, dot);
    const std::string param = key.substr(dot + 1);
    if (param != "h1.mean" && param != "h1.var" && param != "h0.mean" && param != "h0.var") {
      throw FormatError("model line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!raw[feature].emplace(param, *value).second) {
      throw FormatError("model line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }

  GaussianModel model;
  for (const auto& [feature, params] : raw) {
    const Feature* match = nullptr;
    for (const Feature& f : kAllFeatures) {
      if (feature_key(f) == feature) match = &f;
    }
    if (match == nullptr) throw FormatError("model: unknown feature '" + feature + "'");
    auto need = [&](const char* p) {
      const auto it = params.find(p);
      if (it == params.end()) {
        throw FormatError("model: feature '" + feature + "' lacks '" + feature + "." + p + "'");
      }
      return it->second;
    };
    GaussianParams g;
    g.h1_mean = need("h1.mean");
    g.h1_var = need("h1.var");
    g.h0_mean = need("h0.mean");
    g.h0_var = need("h0.var");
    model.set(*match, g);
  }
  if (model.enabled().empty()) throw FormatError("model file defines no features");
  return model;
}

GaussianModel read_model(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return parse_model(in);
}

void write_model(const GaussianModel& model, std::ostream& out, const std::string& comment) {
  if (model.enabled().empty()) throw ValidationError("refusing to write an empty model");
  std::istringstream lines(comment);
  std::string c;
  while (std::getline(lines, c)) out << "# " << c << '\n';
  for (Feature f : kAllFeatures) {
    if (!model.has(f)) continue;
    const GaussianParams& g = model.at(f);
    const std::string k(feature_key(f));
    out << k << ".h1.mean = " << exact(g.h1_mean) << '\n';
    out << k << ".h1.var = " << exact(g.h1_var) << '\n';
    out << k << ".h0.mean = " << exact(g.h0_mean) << '\n';
    out << k << ".h0.var = " << exact(g.h0_var) << '\n';
  }
}

void write_model(const GaussianModel& model, const std::filesystem::path& path,
                 const std::string& comment) {
  std::ofstream out = open_out(path, std::ios::binary);
  write_model(model, out, comment);
  finish(out, path);
}

// ---------------------------------------------------------------------------
// Manifest

CorpusManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  CorpusManifest manifest;
  manifest.base_dir = path.parent_path().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_commas(t);
    if (fields.size() != 5) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": expected 5 columns");
    }
    const auto mvf = parse_number(fields[2]);
    if (!mvf) {
      if (line_no == 1) continue;
      throw FormatError("manifest line " + std::to_string(line_no) + ": bad mvf_true_hz");
    }
    ManifestEntry e;
    e.wav_path = fields[0];
    e.f0_path = fields[1];
    e.mvf_true_hz = *mvf;
    e.split = parse_split(fields[3]);
    e.voice_class = parse_voice_class(fields[4]);
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

void write_manifest(const CorpusManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out = open_out(path, std::ios::binary);
  out << "wav_path,f0_path,mvf_true_hz,split,voice_class\n";
  for (const ManifestEntry& e : manifest.entries) {
    out << e.wav_path << ',' << e.f0_path << ',' << fixed6(e.mvf_true_hz) << ','
        << to_string(e.split) << ',' << to_string(e.voice_class) << '\n';
  }
  finish(out, path);
}

}  // namespace mvf::io
