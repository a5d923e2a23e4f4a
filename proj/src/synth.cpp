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

#include "rhythmkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <vector>

#include "rhythmkit/error.hpp"
#include "rhythmkit/rng.hpp"

namespace rhythmkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void RequireCommon(double duration_s, int sample_rate_hz) {
  Require(duration_s > 0.0, ErrorCode::kInvalidSpec,
          "duration must be positive");
  Require(sample_rate_hz >= 8000, ErrorCode::kInvalidSpec,
          "sample rate must be >= 8000");
}

}  // namespace

AudioBuffer GenAmTone(const AmToneSpec& spec) {
  RequireCommon(spec.duration_s, spec.sample_rate_hz);
  Require(spec.carrier_hz > 0.0, ErrorCode::kInvalidSpec,
          "carrier must be positive");
  Require(spec.mod_hz >= 0.0 && spec.mod_hz < 10.0, ErrorCode::kInvalidSpec,
          "modulation must lie in [0, 10) Hz");
  Require(spec.mod_switch_hz == 0.0 ||
              (spec.mod_switch_hz > 0.0 && spec.mod_switch_hz < 10.0),
          ErrorCode::kInvalidSpec, "switched modulation must lie in (0, 10) Hz");
  Require(spec.depth >= 0.0 && spec.depth <= 1.0, ErrorCode::kInvalidSpec,
          "depth must lie in [0, 1]");

  const double fs = static_cast<double>(spec.sample_rate_hz);
  const std::size_t n =
      static_cast<std::size_t>(std::llround(spec.duration_s * fs));
  Require(n > 0, ErrorCode::kInvalidSpec, "duration too short");

  AudioBuffer audio;
  audio.sample_rate_hz = spec.sample_rate_hz;
  audio.source_id = "am_tone";
  audio.samples.resize(n);
  const double switch_t = 0.5 * spec.duration_s;
  // Phase offset keeps the modulator continuous across the switch.
  const double switch_phase =
      kTwoPi * (spec.mod_hz - spec.mod_switch_hz) * switch_t;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    double mod_arg;
    if (spec.mod_switch_hz != 0.0 && t >= switch_t) {
      mod_arg = kTwoPi * spec.mod_switch_hz * t + switch_phase;
    } else {
      mod_arg = kTwoPi * spec.mod_hz * t;
    }
    const double envelope =
        (1.0 - spec.depth) + spec.depth * (1.0 + std::sin(mod_arg)) / 2.0;
    audio.samples[i] = envelope * std::sin(kTwoPi * spec.carrier_hz * t);
  }
  return NormalizePeak(audio);
}

AudioBuffer GenPulseTrain(const PulseTrainSpec& spec) {
  RequireCommon(spec.duration_s, spec.sample_rate_hz);
  Require(spec.base_hz > 0.0, ErrorCode::kInvalidSpec,
          "base F0 must be positive");
  Require(spec.vibrato_depth_hz >= 0.0 && spec.vibrato_hz >= 0.0,
          ErrorCode::kInvalidSpec, "vibrato parameters must be non-negative");
  Require(spec.base_hz - spec.vibrato_depth_hz >= 60.0 &&
              spec.base_hz + spec.vibrato_depth_hz <= 400.0,
          ErrorCode::kInvalidSpec,
          "F0 trajectory leaves the 60..400 Hz tracker range");
  Require(spec.gap_every_s >= 0.0 && spec.gap_len_s >= 0.0 &&
              (spec.gap_every_s == 0.0 || spec.gap_len_s < spec.gap_every_s),
          ErrorCode::kInvalidSpec, "gap length must be shorter than its period");

  const double fs = static_cast<double>(spec.sample_rate_hz);
  const std::size_t n =
      static_cast<std::size_t>(std::llround(spec.duration_s * fs));
  Require(n > 0, ErrorCode::kInvalidSpec, "duration too short");

  // Impulses at fractional positions, linearly split across neighbours.
  std::vector<double> impulses(n, 0.0);
  double t = 0.0;
  while (t < spec.duration_s) {
    const double f0 =
        spec.base_hz +
        spec.vibrato_depth_hz * std::sin(kTwoPi * spec.vibrato_hz * t);
    const double pos = t * fs;
    const std::size_t idx = static_cast<std::size_t>(pos);
    if (idx + 1 < n) {
      const double frac = pos - static_cast<double>(idx);
      impulses[idx] += 1.0 - frac;
      impulses[idx + 1] += frac;
    }
    t += 1.0 / f0;
  }

  // 2 ms Hann pulse as a crude glottal shape / low-pass.
  std::size_t pulse_len =
      static_cast<std::size_t>(std::llround(0.002 * fs)) | 1u;
  std::vector<double> pulse(pulse_len);
  for (std::size_t j = 0; j < pulse_len; ++j) {
    pulse[j] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(j) /
                                     static_cast<double>(pulse_len - 1)));
  }

  AudioBuffer audio;
  audio.sample_rate_hz = spec.sample_rate_hz;
  audio.source_id = "pulse_train";
  audio.samples.assign(n, 0.0);
  const std::size_t half = pulse_len / 2;
  for (std::size_t i = 0; i < n; ++i) {
    if (impulses[i] == 0.0) continue;
    for (std::size_t j = 0; j < pulse_len; ++j) {
      const long long k = static_cast<long long>(i) +
                          static_cast<long long>(j) -
                          static_cast<long long>(half);
      if (k >= 0 && k < static_cast<long long>(n)) {
        audio.samples[static_cast<std::size_t>(k)] += impulses[i] * pulse[j];
      }
    }
  }

  if (spec.gap_every_s > 0.0 && spec.gap_len_s > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ts = static_cast<double>(i) / fs;
      const double phase = std::fmod(ts, spec.gap_every_s);
      if (phase >= spec.gap_every_s - spec.gap_len_s) {
        audio.samples[i] = 0.0;
      }
    }
  }
  return NormalizePeak(audio);
}

Manifest GenTwoClassCorpus(const CorpusSpec& spec,
                           const std::string& out_dir) {
  Require(spec.n_per_class >= 5, ErrorCode::kInvalidSpec,
          "need at least 5 utterances per class");
  RequireCommon(spec.duration_s, spec.sample_rate_hz);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  Require(!ec, ErrorCode::kIoError, "cannot create directory: " + out_dir);

  // Class AD modulates at 2.0 Hz, HC at 5.0 Hz; the synthetic MMSE is
  // affine in the true modulation frequency so a correct pipeline can
  // regress it from the dominant rhythm formant.
  struct ClassDef {
    const char* prefix;
    const char* label;
    double mod_hz;
  };
  const ClassDef classes[2] = {{"ad", "AD", 2.0}, {"hc", "HC", 5.0}};

  Manifest manifest;
  for (const ClassDef& cls : classes) {
    for (int i = 0; i < spec.n_per_class; ++i) {
      char suffix[16];
      std::snprintf(suffix, sizeof(suffix), "%03d", i);
      const std::string utt_id = std::string(cls.prefix) + "_" + suffix;
      Rng rng(spec.seed ^ Fnv1a64(utt_id.data(), utt_id.size()));

      AmToneSpec tone;
      tone.mod_hz = cls.mod_hz + rng.Uniform(-0.2, 0.2);
      tone.duration_s = spec.duration_s;
      tone.sample_rate_hz = spec.sample_rate_hz;
      const AudioBuffer audio = GenAmTone(tone);

      const std::string wav_name = utt_id + ".wav";
      const std::string wav_path =
          (std::filesystem::path(out_dir) / wav_name).string();
      WriteWavPcm16(wav_path, audio);

      const double noisy =
          1.6 + 5.33 * tone.mod_hz + 0.7 * rng.NextGaussian();
      const int mmse = static_cast<int>(
          std::clamp(std::llround(noisy), 0ll, 30ll));

      ManifestRow row;
      row.utt_id = utt_id;
      row.wav_path = wav_name;  // relative to the manifest location
      row.label = cls.label;
      row.mmse = mmse;
      manifest.rows.push_back(std::move(row));
    }
  }

  const std::string manifest_path =
      (std::filesystem::path(out_dir) / "manifest.csv").string();
  WriteManifest(manifest_path, manifest);
  // Hand back resolved paths so callers can use the rows directly.
  return LoadManifest(manifest_path);
}

}  // namespace rhythmkit
