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

#ifndef RHYTHMKIT_ENVELOPE_HPP_
#define RHYTHMKIT_ENVELOPE_HPP_

#include <span>
#include <vector>

#include "rhythmkit/signal_io.hpp"

namespace rhythmkit {

enum class EnvelopeKind { kAm, kFm };

const char* EnvelopeKindName(EnvelopeKind kind);

// Uniformly sampled modulation envelope. AM values are analytic-signal
// magnitudes of the (peak normalized) waveform; FM values are F0 in Hz
// with unvoiced frames carrying exactly 0.
struct EnvelopeSeries {
  std::vector<double> values;
  double rate_hz = 0.0;
  EnvelopeKind kind = EnvelopeKind::kAm;

  double duration_s() const {
    return rate_hz > 0.0 ? values.size() / rate_hz : 0.0;
  }
};

struct F0Config {
  double f0_min_hz = 60.0;
  double f0_max_hz = 400.0;
  double frame_s = 0.025;
  double hop_s = 0.010;
  double voicing_threshold = 0.3;
};

// Centered moving average with the window truncated at the edges, so the
// output has no group delay (cross-correlation with the input peaks at
// lag 0). Window is forced odd.
std::vector<double> ZeroPhaseMovingAverage(std::span<const double> x,
                                           std::size_t window);

// Magnitude of the analytic signal, smoothed by a zero-phase moving
// average of smooth_s, then decimated to target_rate_hz. Output length is
// floor(duration * target_rate_hz).
EnvelopeSeries AmEnvelope(const AudioBuffer& audio,
                          double target_rate_hz = 100.0,
                          double smooth_s = 0.020);

// Frame-wise F0 by normalized cross-correlation (NCCF) over the lag range
// [rate/f0_max, rate/f0_min] with dynamic-programming continuity
// smoothing. One value per hop; unvoiced frames are 0. Output length is
// floor((len - frame) / hop) + 1.
EnvelopeSeries EstimateF0(const AudioBuffer& audio, const F0Config& cfg = {});

// Median filter (window 5) applied independently to each voiced run of an
// F0 contour; zeros (pauses, voiceless stretches) pass through verbatim.
std::vector<double> MedianFilterVoicedRuns(std::span<const double> contour,
                                           std::size_t window);

// EstimateF0 followed by the voiced-run median filter; kind = FM.
EnvelopeSeries FmEnvelope(const AudioBuffer& audio, const F0Config& cfg = {});

}  // namespace rhythmkit

#endif  // RHYTHMKIT_ENVELOPE_HPP_
