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

#include "rhythmkit/pipeline.hpp"

#include "rhythmkit/envelope.hpp"

namespace rhythmkit {

AudioBuffer LoadUtteranceAudio(const std::string& wav_path,
                               const std::string& segments_path,
                               const std::string& speaker) {
  AudioBuffer audio = LoadWav(wav_path);
  if (!segments_path.empty()) {
    const SegmentList segments = LoadSegmentsCsv(segments_path);
    audio = ExtractSpeakerSegments(audio, segments, speaker);
  }
  return NormalizePeak(audio);
}

SpectrogramPair ComputeSpectrograms(const AudioBuffer& audio,
                                    const RunConfig& config) {
  SpectrogramPair pair;
  const EnvelopeSeries am =
      AmEnvelope(audio, config.am_rate_hz, config.am_smooth_s);
  pair.am = ComputeRhythmSpectrogram(am, config.spectrogram);
  const EnvelopeSeries fm = FmEnvelope(audio, config.f0);
  pair.fm = ComputeRhythmSpectrogram(fm, config.spectrogram);
  return pair;
}

FeatureVector ExtractUtteranceFeatures(const AudioBuffer& audio,
                                       const RunConfig& config) {
  const SpectrogramPair pair = ComputeSpectrograms(audio, config);
  return CombinedFeatures(pair.am, pair.fm, config.n_formants,
                          config.dct_order, config.peaks);
}

}  // namespace rhythmkit
