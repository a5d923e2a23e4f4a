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

#ifndef RHYTHMKIT_SYNTH_HPP_
#define RHYTHMKIT_SYNTH_HPP_

#include <cstdint>
#include <string>

#include "rhythmkit/dataset.hpp"
#include "rhythmkit/signal_io.hpp"

namespace rhythmkit {

// Amplitude-modulated tone with known modulation frequency, the ground
// truth for the AM pipeline. mod_switch_hz != 0 switches the modulator
// to that frequency at half time (phase-continuously).
struct AmToneSpec {
  double carrier_hz = 220.0;
  double mod_hz = 3.0;
  double mod_switch_hz = 0.0;  // 0 disables the half-time switch
  double depth = 0.8;          // [0, 1]
  double duration_s = 8.0;
  int sample_rate_hz = 16000;
};

// x(t) = [(1 - depth) + depth (1 + sin 2 pi mod t) / 2] sin(2 pi carrier t),
// peak-normalized. Modulation must stay below the 10 Hz analysis band.
AudioBuffer GenAmTone(const AmToneSpec& spec);

// Glottal-style pulse train with a controlled F0 trajectory, the ground
// truth for the FM pipeline. F0(t) = base + vibrato_depth sin(2 pi
// vibrato t); pulses are placed at fractional sample positions and
// smoothed with a 2 ms Hann pulse. gap_every_s > 0 silences the last
// gap_len_s of every gap_every_s period to emulate pauses.
struct PulseTrainSpec {
  double base_hz = 120.0;
  double vibrato_hz = 0.0;
  double vibrato_depth_hz = 0.0;
  double gap_every_s = 0.0;  // 0 disables gaps
  double gap_len_s = 0.0;
  double duration_s = 8.0;
  int sample_rate_hz = 16000;
};

AudioBuffer GenPulseTrain(const PulseTrainSpec& spec);

// Two-class corpus: AD utterances are AM tones modulated at 2.0 +- 0.2 Hz,
// HC at 5.0 +- 0.2 Hz (seeded jitter); the synthetic MMSE target is an
// affine function of the true modulation frequency plus seeded noise.
// Writes <utt_id>.wav files plus manifest.csv into out_dir and returns
// the manifest (with resolved paths).
struct CorpusSpec {
  int n_per_class = 20;
  std::uint64_t seed = 42;
  double duration_s = 8.0;
  int sample_rate_hz = 16000;
};

Manifest GenTwoClassCorpus(const CorpusSpec& spec, const std::string& out_dir);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_SYNTH_HPP_
