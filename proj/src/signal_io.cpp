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

#include "rhythmkit/signal_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "rhythmkit/csv.hpp"
#include "rhythmkit/error.hpp"

namespace rhythmkit {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
}

void PutU32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

}  // namespace

AudioBuffer LoadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Raise(ErrorCode::kFileNotFound, "cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  Require(bytes.size() >= 12, ErrorCode::kUnsupportedFormat,
          path + " is too small to be a WAV file");
  Require(std::memcmp(bytes.data(), "RIFF", 4) == 0 &&
              std::memcmp(bytes.data() + 8, "WAVE", 4) == 0,
          ErrorCode::kUnsupportedFormat, path + " is not RIFF/WAVE");

  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t data_offset = 0, data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    std::uint32_t chunk_size = ReadU32(hdr + 4);
    std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      chunk_size = static_cast<std::uint32_t>(bytes.size() - body);
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      Require(chunk_size >= 16, ErrorCode::kUnsupportedFormat,
              "fmt chunk truncated in " + path);
      const unsigned char* f = bytes.data() + body;
      format = ReadU16(f);
      channels = ReadU16(f + 2);
      rate = ReadU32(f + 4);
      block_align = ReadU16(f + 12);
      bits = ReadU16(f + 14);
      if (format == kFormatExtensible) {
        Require(chunk_size >= 40, ErrorCode::kUnsupportedFormat,
                "extensible fmt chunk truncated in " + path);
        format = ReadU16(f + 24);  // first two bytes of the SubFormat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_offset = body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word aligned
  }

  Require(have_fmt, ErrorCode::kUnsupportedFormat, "no fmt chunk in " + path);
  Require(channels >= 1, ErrorCode::kUnsupportedFormat,
          "zero channels in " + path);
  const bool pcm16 = (format == kFormatPcm && bits == 16);
  const bool float32 = (format == kFormatIeeeFloat && bits == 32);
  if (!pcm16 && !float32) {
    Raise(ErrorCode::kUnsupportedFormat,
          path + ": only PCM 16-bit and IEEE float 32-bit are supported (got format " +
              std::to_string(format) + ", " + std::to_string(bits) + " bits)");
  }
  Require(rate >= 8000, ErrorCode::kUnsupportedFormat,
          path + ": sample rate " + std::to_string(rate) + " below 8000 Hz");

  const std::size_t bytes_per_sample = bits / 8;
  if (block_align == 0) {
    block_align = static_cast<std::uint16_t>(bytes_per_sample * channels);
  }
  const std::size_t n_frames = block_align > 0 ? data_size / block_align : 0;
  Require(n_frames > 0, ErrorCode::kEmptyAudio, path + " has zero frames");

  AudioBuffer audio;
  audio.sample_rate_hz = static_cast<int>(rate);
  audio.source_id = std::filesystem::path(path).stem().string();
  audio.samples.resize(n_frames);

  const unsigned char* data = bytes.data() + data_offset;
  const double inv_channels = 1.0 / channels;
  for (std::size_t i = 0; i < n_frames; ++i) {
    const unsigned char* frame = data + i * block_align;
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const unsigned char* s = frame + c * bytes_per_sample;
      if (pcm16) {
        std::int16_t v = static_cast<std::int16_t>(ReadU16(s));
        acc += v / 32768.0;
      } else {
        float v = std::bit_cast<float>(ReadU32(s));
        acc += std::clamp(static_cast<double>(v), -1.0, 1.0);
      }
    }
    audio.samples[i] = acc * inv_channels;
  }
  return audio;
}

void WriteWavPcm16(const std::string& path, const AudioBuffer& audio) {
  Require(!audio.samples.empty(), ErrorCode::kEmptyAudio,
          "refusing to write empty audio to " + path);
  Require(audio.sample_rate_hz > 0, ErrorCode::kInvalidArgument,
          "sample rate must be positive");

  const std::uint32_t n = static_cast<std::uint32_t>(audio.samples.size());
  const std::uint32_t data_size = n * 2;
  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);  // mono
  PutU32(out, static_cast<std::uint32_t>(audio.sample_rate_hz));
  PutU32(out, static_cast<std::uint32_t>(audio.sample_rate_hz) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(out, data_size);
  for (double x : audio.samples) {
    double clipped = std::clamp(x, -1.0, 1.0);
    auto v = static_cast<std::int16_t>(std::lrint(clipped * 32767.0));
    PutU16(out, static_cast<std::uint16_t>(v));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) Raise(ErrorCode::kIoError, "cannot write " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  Require(f.good(), ErrorCode::kIoError, "short write to " + path);
}

SegmentList LoadSegmentsCsv(const std::string& path) {
  csv::File file = csv::ReadFile(path);
  Require(!file.rows.empty(), ErrorCode::kMalformedCsv,
          path + " has no header row");
  const auto& header = file.rows[0];
  Require(header.size() == 3 && header[0] == "start_s" &&
              header[1] == "end_s" && header[2] == "speaker",
          ErrorCode::kMalformedCsv,
          path + ": expected header start_s,end_s,speaker");

  SegmentList list;
  for (std::size_t i = 1; i < file.rows.size(); ++i) {
    const auto& row = file.rows[i];
    Require(row.size() == 3, ErrorCode::kMalformedRow,
            path + " row " + std::to_string(i + 1) + ": expected 3 fields");
    Segment seg;
    seg.start_s = csv::ParseDouble(row[0], "start_s");
    seg.end_s = csv::ParseDouble(row[1], "end_s");
    seg.speaker = row[2];
    Require(seg.start_s >= 0.0, ErrorCode::kMalformedRow,
            path + " row " + std::to_string(i + 1) + ": start_s < 0");
    Require(seg.end_s > seg.start_s, ErrorCode::kMalformedRow,
            path + " row " + std::to_string(i + 1) + ": end_s <= start_s");
    list.entries.push_back(std::move(seg));
  }
  std::stable_sort(list.entries.begin(), list.entries.end(),
                   [](const Segment& a, const Segment& b) {
                     return a.start_s < b.start_s;
                   });
  return list;
}

AudioBuffer ExtractSpeakerSegments(const AudioBuffer& audio,
                                   const SegmentList& segments,
                                   const std::string& speaker) {
  const auto len = static_cast<long long>(audio.samples.size());
  const double rate = audio.sample_rate_hz;

  AudioBuffer out;
  out.sample_rate_hz = audio.sample_rate_hz;
  out.source_id = audio.source_id + "#" + speaker;

  bool matched = false;
  for (const Segment& seg : segments.entries) {
    if (seg.speaker != speaker) continue;
    matched = true;
    long long s = std::llround(seg.start_s * rate);
    long long e = std::llround(seg.end_s * rate);
    if (s < 0 || e > len) {
      Raise(ErrorCode::kSegmentOutOfRange,
            "segment [" + std::to_string(seg.start_s) + ", " +
                std::to_string(seg.end_s) + ") exceeds audio of " +
                std::to_string(audio.duration_s()) + " s");
    }
    out.samples.insert(out.samples.end(), audio.samples.begin() + s,
                       audio.samples.begin() + e);
  }
  if (!matched) {
    Raise(ErrorCode::kNoMatchingSegments,
          "no segments for speaker '" + speaker + "'");
  }
  return out;
}

AudioBuffer NormalizePeak(const AudioBuffer& audio) {
  double peak = 0.0;
  for (double x : audio.samples) peak = std::max(peak, std::fabs(x));
  Require(peak > 0.0, ErrorCode::kDegenerateSignal,
          "cannot peak-normalize an all-zero signal");
  AudioBuffer out = audio;
  // Dividing by the peak itself keeps the extremum at exactly +-1.0 and
  // makes the operation idempotent sample for sample.
  for (double& x : out.samples) x /= peak;
  return out;
}

}  // namespace rhythmkit
