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

#ifndef RHYTHMKIT_CONFIG_HPP_
#define RHYTHMKIT_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rhythmkit/envelope.hpp"
#include "rhythmkit/features.hpp"
#include "rhythmkit/rhythm_spectrogram.hpp"

namespace rhythmkit {

// Every tunable of the pipeline with its documented default. The
// effective config is echoed into output artifacts for provenance.
struct RunConfig {
  F0Config f0;
  double am_rate_hz = 100.0;
  double am_smooth_s = 0.020;
  SpectrogramConfig spectrogram;
  PeakPickConfig peaks;
  int n_formants = 6;
  int dct_order = 3;
  int k_folds = 5;
  std::uint64_t seed = 42;
  std::string speaker = "PAR";
  int synth_n_per_class = 20;
  double synth_duration_s = 8.0;
  int synth_sample_rate_hz = 16000;
};

// JSON object mirroring the struct, grouped by pipeline stage.
std::string RunConfigToJson(const RunConfig& config);

// Defaults overridden by the keys present in the file; unknown keys are
// rejected so typos cannot silently fall back to defaults.
RunConfig LoadRunConfig(const std::string& path);
RunConfig ParseRunConfig(const std::string& json_text);

// FNV-1a 64-bit content hash, lowercase hex.
std::string HashFileHex(const std::string& path);

struct ProvenanceInput {
  std::string path;
  std::string fnv1a64;
};

// One-object provenance blob: effective config plus input hashes.
std::string ProvenanceJson(const RunConfig& config,
                           const std::vector<ProvenanceInput>& inputs);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_CONFIG_HPP_
