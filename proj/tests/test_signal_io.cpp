#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "mvf/error.hpp"
#include "mvf/signal_io.hpp"
#include "support.hpp"

using namespace mvf;

namespace {

void put16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}
void put32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Hand-built canonical PCM16 file, independent of write_wav.
std::string pcm16_wav(const std::vector<std::int16_t>& samples, int fs, int channels = 1) {
  std::string data;
  for (std::int16_t v : samples) put16(data, static_cast<std::uint16_t>(v));
  std::string s = "RIFF";
  put32(s, static_cast<std::uint32_t>(36 + data.size()));
  s += "WAVEfmt ";
  put32(s, 16);
  put16(s, 1);
  put16(s, static_cast<std::uint16_t>(channels));
  put32(s, static_cast<std::uint32_t>(fs));
  put32(s, static_cast<std::uint32_t>(fs * channels * 2));
  put16(s, static_cast<std::uint16_t>(channels * 2));
  put16(s, 16);
  s += "data";
  put32(s, static_cast<std::uint32_t>(data.size()));
  return s + data;
}

}  // namespace

TEST_CASE("one second of PCM16 silence reads as 16000 zeros") {
  test::TempDir dir("io");
  test::write_file(dir / "s.wav", pcm16_wav(std::vector<std::int16_t>(16000, 0), 16000));
  const AudioBuffer a = io::read_wav(dir / "s.wav");
  CHECK(a.sample_rate == 16000);
  REQUIRE(a.samples.size() == 16000);
  for (double v : a.samples) CHECK(v == 0.0);
}

TEST_CASE("PCM16 full scale maps to 32767/32768") {
  test::TempDir dir("io");
  test::write_file(dir / "f.wav", pcm16_wav({32767, -32768, 1}, 8000));
  const AudioBuffer a = io::read_wav(dir / "f.wav");
  REQUIRE(a.samples.size() == 3);
  CHECK(a.samples[0] == 32767.0 / 32768.0);
  CHECK(a.samples[1] == -1.0);
  CHECK(a.samples[2] == 1.0 / 32768.0);
}

TEST_CASE("stereo keeps the first channel") {
  test::TempDir dir("io");
  test::write_file(dir / "st.wav", pcm16_wav({100, -5, 200, -6}, 8000, 2));
  const AudioBuffer a = io::read_wav(dir / "st.wav");
  REQUIRE(a.samples.size() == 2);
  CHECK(a.samples[0] == 100.0 / 32768.0);
  CHECK(a.samples[1] == 200.0 / 32768.0);
}

TEST_CASE("wav round trip is sample-identical") {
  test::TempDir dir("io");
  const AudioBuffer src = test::white_noise(4000, 16000, 3, 0.2);

  SUBCASE("float32") {
    io::write_wav(src, dir / "a.wav", io::WavEncoding::kFloat32);
    const AudioBuffer once = io::read_wav(dir / "a.wav");
    for (std::size_t i = 0; i < src.samples.size(); ++i) {
      CHECK(once.samples[i] == static_cast<double>(static_cast<float>(src.samples[i])));
    }
    io::write_wav(once, dir / "b.wav", io::WavEncoding::kFloat32);
    CHECK(test::read_file(dir / "a.wav") == test::read_file(dir / "b.wav"));
  }
  SUBCASE("pcm16") {
    io::write_wav(src, dir / "a.wav", io::WavEncoding::kPcm16);
    const AudioBuffer once = io::read_wav(dir / "a.wav");
    for (std::size_t i = 0; i < src.samples.size(); ++i) {
      CHECK(std::fabs(once.samples[i] - src.samples[i]) <= 0.5 / 32768.0 + 1e-15);
    }
    io::write_wav(once, dir / "b.wav", io::WavEncoding::kPcm16);
    const AudioBuffer twice = io::read_wav(dir / "b.wav");
    CHECK(twice.samples == once.samples);
  }
}

TEST_CASE("malformed wav input") {
  test::TempDir dir("io");
  test::write_file(dir / "junk.wav", "not a wave file at all");
  CHECK_THROWS_AS(io::read_wav(dir / "junk.wav"), FormatError);
  test::write_file(dir / "empty.wav", pcm16_wav({}, 16000));
  CHECK_THROWS_AS(io::read_wav(dir / "empty.wav"), InputError);
  CHECK_THROWS_AS(io::read_wav(dir / "missing.wav"), IoError);
}

TEST_CASE("f0 csv parsing") {
  SUBCASE("direct parse") {
    std::istringstream in("time_s,f0_hz\n0.00,0\n0.01,120\n0.02,121\n");
    const F0Track t = io::parse_f0_csv(in);
    CHECK(t.frame_shift == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(t.values == std::vector<double>{0, 120, 121});
  }
  SUBCASE("headerless") {
    std::istringstream in("0.5,100\n0.51,101\n");
    const F0Track t = io::parse_f0_csv(in);
    CHECK(t.start_time == doctest::Approx(0.5));
    CHECK(t.size() == 2);
  }
  SUBCASE("non-uniform spacing") {
    std::istringstream in("0.000,0\n0.010,120\n0.021,121\n");
    CHECK_THROWS_AS(io::parse_f0_csv(in), FormatError);
  }
  SUBCASE("empty") {
    std::istringstream in("");
    CHECK_THROWS_AS(io::parse_f0_csv(in), InputError);
  }
  SUBCASE("negative f0") {
    std::istringstream in("0.00,0\n0.01,-5\n");
    CHECK_THROWS_AS(io::parse_f0_csv(in), InputError);
  }
  SUBCASE("non-finite value") {
    std::istringstream in("0.00,0\n0.01,nan\n");
    CHECK_THROWS(io::parse_f0_csv(in));
  }
}

TEST_CASE("f0 csv round trip") {
  test::TempDir dir("io");
  F0Track t;
  t.frame_shift = 0.01;
  t.values = {0, 0, 150.25, 151.125, 0};
  io::write_f0_csv(t, dir / "t.csv");
  const F0Track back = io::read_f0_csv(dir / "t.csv");
  REQUIRE(back.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(back.values[i] == doctest::Approx(t.values[i]).epsilon(1e-9));
}

TEST_CASE("contour csv format") {
  MvfContour c;
  c.frame_shift = 0.01;
  c.values = {0, 3000};
  c.voiced = {false, true};
  std::ostringstream out;
  io::write_contour_csv(c, out);
  CHECK(out.str() == "time_s,mvf_hz\n0.000000,0.000000\n0.010000,3000.000000\n");

  MvfContour empty;
  std::ostringstream out2;
  io::write_contour_csv(empty, out2);
  CHECK(out2.str() == "time_s,mvf_hz\n");
}

TEST_CASE("contour csv round trip within 1e-6 Hz") {
  test::TempDir dir("io");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 8000.0);
  MvfContour c;
  c.frame_shift = 0.01;
  for (int i = 0; i < 200; ++i) {
    const bool v = i % 7 != 0;
    c.values.push_back(v ? u(rng) : 0.0);
    c.voiced.push_back(v);
  }
  io::write_contour_csv(c, dir / "c.csv");
  const MvfContour back = io::read_contour_csv(dir / "c.csv");
  REQUIRE(back.size() == c.size());
  CHECK(back.frame_shift == doctest::Approx(0.01));
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(std::fabs(back.values[i] - c.values[i]) <= 1e-6);
    CHECK(back.voiced[i] == c.voiced[i]);
  }
}

TEST_CASE("model text format") {
  GaussianModel m;
  m.set(Feature::kAs, {20.0, 25.0, 2.0, 9.0});

  SUBCASE("round trip") {
    std::ostringstream out;
    io::write_model(m, out);
    int keyed = 0;
    std::istringstream lines(out.str());
    for (std::string l; std::getline(lines, l);) {
      if (!l.empty() && l[0] != '#') ++keyed;
    }
    CHECK(keyed == 4);
    std::istringstream in(out.str());
    CHECK(io::parse_model(in) == m);
  }
  SUBCASE("round trip of awkward values to 12 digits") {
    GaussianModel w;
    w.set(Feature::kIhpc, {1.0 / 3.0, 1e-9 / 7.0, -2.0 / 3.0, 12345.678901234});
    std::ostringstream out;
    io::write_model(w, out, "line one\nline two");
    std::istringstream in(out.str());
    const GaussianModel back = io::parse_model(in);
    CHECK(back.at(Feature::kIhpc).h1_var == doctest::Approx(1e-9 / 7.0).epsilon(1e-12));
    CHECK(back == w);
  }
  SUBCASE("missing H0 lines") {
    std::istringstream in("as.h1.mean = 20\nas.h1.var = 25\n");
    CHECK_THROWS_AS(io::parse_model(in), FormatError);
  }
  SUBCASE("zero variance") {
    std::istringstream in("as.h1.mean = 20\nas.h1.var = 25\nas.h0.mean = 2\nas.h0.var = 0\n");
    CHECK_THROWS_AS(io::parse_model(in), ValidationError);
  }
  SUBCASE("unknown key") {
    std::istringstream in("as.h2.mean = 1\n");
    CHECK_THROWS_AS(io::parse_model(in), FormatError);
  }
  SUBCASE("comments and spacing") {
    std::istringstream in("# header\n\n ihpc.h1.mean=0.0132\nihpc.h1.var = 1e-6 # note\n"
                          "ihpc.h0.mean = 0\nihpc.h0.var = 1e-3\n");
    const GaussianModel p = io::parse_model(in);
    CHECK(p.enabled() == FeatureSet{Feature::kIhpc});
    CHECK(p.at(Feature::kIhpc).h1_mean == 0.0132);
  }
}

TEST_CASE("manifest round trip resolves relative paths") {
  test::TempDir dir("io");
  CorpusManifest m;
  m.entries.push_back({"a.wav", "a.f0.csv", 3000.0, Split::kDev, VoiceClass::kLowPitch});
  m.entries.push_back({"b.wav", "b.f0.csv", 1000.0, Split::kTest, VoiceClass::kHighPitch});
  io::write_manifest(m, dir / "manifest.csv");
  const CorpusManifest back = io::read_manifest(dir / "manifest.csv");
  CHECK(back.entries == m.entries);
  CHECK(std::filesystem::path(back.resolve("a.wav")) == dir.path() / "a.wav");
}
