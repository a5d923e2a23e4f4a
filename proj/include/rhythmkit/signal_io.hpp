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

#ifndef RHYTHMKIT_SIGNAL_IO_HPP_
#define RHYTHMKIT_SIGNAL_IO_HPP_

#include <string>
#include <vector>

namespace rhythmkit {

// Mono PCM signal in [-1, 1]. All downstream analysis consumes this type;
// multi-channel input is downmixed at load time.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate_hz = 0;
  std::string source_id;

  double duration_s() const {
    return sample_rate_hz > 0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

struct Segment {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string speaker;
};

// Ordered by start_s (the loader sorts).
struct SegmentList {
  std::vector<Segment> entries;
};

// RIFF/WAVE reader for PCM 16-bit and IEEE float 32-bit (plain or
// WAVE_FORMAT_EXTENSIBLE). Any channel count; channels are averaged
// per frame. Rates below 8 kHz are rejected.
AudioBuffer LoadWav(const std::string& path);

// 16-bit PCM mono writer. Values are clipped to [-1, 1] and scaled by
// 32767; the reader divides by 32768, so a round trip is within 1/32768.
void WriteWavPcm16(const std::string& path, const AudioBuffer& audio);

// Segment timestamps, CSV with header `start_s,end_s,speaker`.
SegmentList LoadSegmentsCsv(const std::string& path);

// Concatenates, in temporal order, the sample ranges whose speaker matches.
// Boundaries are converted with round(t * rate).
AudioBuffer ExtractSpeakerSegments(const AudioBuffer& audio,
                                   const SegmentList& segments,
                                   const std::string& speaker);

// Scales so that max |sample| == 1.0 exactly. Idempotent.
AudioBuffer NormalizePeak(const AudioBuffer& audio);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_SIGNAL_IO_HPP_
