// Copyright 2026 The Rhythmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <doctest.h>

#include "rhythmkit/error.hpp"
#include "rhythmkit/signal_io.hpp"
#include "test_util.hpp"

using rhythmkit::AudioBuffer;
using rhythmkit::ErrorCode;
using rhythmkit::SegmentList;
using testutil::CodeOf;
using testutil::TempDir;

namespace {

AudioBuffer MakeSine(double freq_hz, double duration_s, int rate,
                     double amp = 0.5) {
  AudioBuffer a;
  a.sample_rate_hz = rate;
  a.source_id = "sine";
  const auto n = static_cast<std::size_t>(duration_s * rate);
  a.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.samples[i] =
        amp * std::sin(2.0 * std::numbers::pi * freq_hz * i / rate);
  }
  return a;
}

void PutU16(std::string* out, std::uint16_t v) {
  out->push_back(static_cast<char>(v & 0xFF));
  out->push_back(static_cast<char>((v >> 8) & 0xFF));
}

void PutU32(std::string* out, std::uint32_t v) {
  out->push_back(static_cast<char>(v & 0xFF));
  out->push_back(static_cast<char>((v >> 8) & 0xFF));
  out->push_back(static_cast<char>((v >> 16) & 0xFF));
  out->push_back(static_cast<char>((v >> 24) & 0xFF));
}

// Minimal two-channel PCM16 WAV with the given interleaved frames.
std::string StereoWavBytes(const std::vector<std::int16_t>& interleaved,
                           std::uint32_t rate) {
  const auto data_size = static_cast<std::uint32_t>(interleaved.size() * 2);
  std::string out = "RIFF";
  PutU32(&out, 36 + data_size);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, 1);  // PCM
  PutU16(&out, 2);  // stereo
  PutU32(&out, rate);
  PutU32(&out, rate * 4);
  PutU16(&out, 4);  // block align
  PutU16(&out, 16);
  out += "data";
  PutU32(&out, data_size);
  for (std::int16_t v : interleaved) {
    PutU16(&out, static_cast<std::uint16_t>(v));
  }
  return out;
}

}  // namespace

TEST_CASE("pcm16 wav round trip preserves samples to quantization") {
  TempDir tmp("wav_roundtrip");
  const AudioBuffer src = MakeSine(440.0, 0.05, 16000);
  const std::string path = tmp.Path("tone.wav");
  rhythmkit::WriteWavPcm16(path, src);

  const AudioBuffer back = rhythmkit::LoadWav(path);
  REQUIRE(back.sample_rate_hz == 16000);
  REQUIRE(back.samples.size() == src.samples.size());
  CHECK(back.source_id == "tone");
  double max_err = 0.0;
  for (std::size_t i = 0; i < src.samples.size(); ++i) {
    max_err = std::max(max_err, std::fabs(back.samples[i] - src.samples[i]));
  }
  CHECK(max_err <= 1.0 / 32768.0 + 1e-12);
}

TEST_CASE("stereo wav is downmixed by channel mean") {
  TempDir tmp("wav_stereo");
  // Frames: (L, R) pairs; mean of (16384, -16384) is 0, of (8192, 8192)
  // is 8192/32768.
  const std::vector<std::int16_t> frames = {16384, -16384, 8192, 8192};
  const std::string path = tmp.Path("stereo.wav");
  testutil::WriteAll(path, StereoWavBytes(frames, 16000));

  const AudioBuffer a = rhythmkit::LoadWav(path);
  REQUIRE(a.samples.size() == 2);
  CHECK(a.samples[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a.samples[1] == doctest::Approx(8192.0 / 32768.0).epsilon(1e-12));
}

TEST_CASE("wav loader rejects bad inputs with typed errors") {
  TempDir tmp("wav_errors");
  CHECK(CodeOf([&] { rhythmkit::LoadWav(tmp.Path("absent.wav")); }) ==
        ErrorCode::kFileNotFound);

  const std::string junk = tmp.Path("junk.wav");
  testutil::WriteAll(junk, "definitely not a riff file");
  CHECK(CodeOf([&] { rhythmkit::LoadWav(junk); }) ==
        ErrorCode::kUnsupportedFormat);

  // 4000 Hz is below the supported range.
  const std::string slow = tmp.Path("slow.wav");
  testutil::WriteAll(slow, StereoWavBytes({0, 0}, 4000));
  CHECK(CodeOf([&] { rhythmkit::LoadWav(slow); }) ==
        ErrorCode::kUnsupportedFormat);
}

TEST_CASE("segment csv is parsed, validated, and sorted by start time") {
  TempDir tmp("segments");
  const std::string path = tmp.Path("segments.csv");
  testutil::WriteAll(path,
                     "start_s,end_s,speaker\n"
                     "2.0,3.0,PAR\n"
                     "0.5,1.0,INV\n"
                     "1.0,2.0,PAR\n");
  const SegmentList list = rhythmkit::LoadSegmentsCsv(path);
  REQUIRE(list.entries.size() == 3);
  CHECK(list.entries[0].start_s == 0.5);
  CHECK(list.entries[1].speaker == "PAR");
  CHECK(list.entries[2].start_s == 2.0);

  testutil::WriteAll(tmp.Path("bad_header.csv"), "a,b,c\n1,2,PAR\n");
  CHECK(CodeOf([&] {
          rhythmkit::LoadSegmentsCsv(tmp.Path("bad_header.csv"));
        }) == ErrorCode::kMalformedCsv);

  testutil::WriteAll(tmp.Path("bad_row.csv"),
                     "start_s,end_s,speaker\n3.0,2.0,PAR\n");
  CHECK(CodeOf([&] { rhythmkit::LoadSegmentsCsv(tmp.Path("bad_row.csv")); }) ==
        ErrorCode::kMalformedRow);
}

TEST_CASE("speaker extraction concatenates segments in time order") {
  AudioBuffer a;
  a.sample_rate_hz = 1000;
  a.source_id = "clip";
  a.samples.resize(1000);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    a.samples[i] = static_cast<double>(i);
  }
  SegmentList list;
  list.entries = {{0.100, 0.200, "PAR"},
                  {0.200, 0.300, "INV"},
                  {0.400, 0.450, "PAR"}};

  const AudioBuffer out = rhythmkit::ExtractSpeakerSegments(a, list, "PAR");
  REQUIRE(out.samples.size() == 150);
  CHECK(out.source_id == "clip#PAR");
  CHECK(out.samples.front() == 100.0);
  CHECK(out.samples[99] == 199.0);
  CHECK(out.samples[100] == 400.0);
  CHECK(out.samples.back() == 449.0);

  CHECK(CodeOf([&] { rhythmkit::ExtractSpeakerSegments(a, list, "DOC"); }) ==
        ErrorCode::kNoMatchingSegments);

  SegmentList overrun;
  overrun.entries = {{0.9, 1.5, "PAR"}};
  CHECK(CodeOf([&] { rhythmkit::ExtractSpeakerSegments(a, overrun, "PAR"); }) ==
        ErrorCode::kSegmentOutOfRange);
}

TEST_CASE("peak normalization hits exactly one and is idempotent") {
  AudioBuffer a;
  a.sample_rate_hz = 8000;
  a.samples = {0.1, -0.4, 0.25, 0.0};
  const AudioBuffer n1 = rhythmkit::NormalizePeak(a);
  double peak = 0.0;
  for (double x : n1.samples) peak = std::max(peak, std::fabs(x));
  CHECK(peak == 1.0);

  const AudioBuffer n2 = rhythmkit::NormalizePeak(n1);
  CHECK(n2.samples == n1.samples);

  AudioBuffer zeros;
  zeros.sample_rate_hz = 8000;
  zeros.samples = {0.0, 0.0, 0.0};
  CHECK(CodeOf([&] { rhythmkit::NormalizePeak(zeros); }) ==
        ErrorCode::kDegenerateSignal);
}
