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

#ifndef RHYTHMKIT_PIPELINE_HPP_
#define RHYTHMKIT_PIPELINE_HPP_

#include <string>

#include "rhythmkit/config.hpp"
#include "rhythmkit/features.hpp"
#include "rhythmkit/rhythm_spectrogram.hpp"
#include "rhythmkit/signal_io.hpp"

namespace rhythmkit {

// Load, optionally cut to the speaker's segments, and peak-normalize.
// An empty segments_path means the whole file is the utterance.
AudioBuffer LoadUtteranceAudio(const std::string& wav_path,
                               const std::string& segments_path,
                               const std::string& speaker);

struct SpectrogramPair {
  RhythmSpectrogram am;
  RhythmSpectrogram fm;
};

SpectrogramPair ComputeSpectrograms(const AudioBuffer& audio,
                                    const RunConfig& config);

FeatureVector ExtractUtteranceFeatures(const AudioBuffer& audio,
                                       const RunConfig& config);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_PIPELINE_HPP_
