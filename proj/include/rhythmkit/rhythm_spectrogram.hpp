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

#ifndef RHYTHMKIT_RHYTHM_SPECTROGRAM_HPP_
#define RHYTHMKIT_RHYTHM_SPECTROGRAM_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rhythmkit/envelope.hpp"
#include "rhythmkit/matrix.hpp"

namespace rhythmkit {

struct SpectrogramConfig {
  double window_s = 5.0;
  int n_slices = 100;
  double fmax_hz = 10.0;
  int zero_pad_factor = 4;
};

// Low-frequency rhythm spectrogram: n_slices overlapping windows of the
// envelope, each transformed to a magnitude spectrum restricted to
// (0, fmax] (DC excluded) and normalized to its own maximum.
struct RhythmSpectrogram {
  Matrix magnitudes;                  // n_slices x K
  std::vector<double> freq_axis_hz;   // K bins, uniform, all in (0, fmax]
  std::vector<double> slice_times_s;  // window-center time per slice
  EnvelopeKind kind = EnvelopeKind::kAm;
};

// Window start indices: starts[i] = round(i * (env_len - window) / (n - 1)).
// First window starts at 0, last ends flush with the envelope, and the
// count is fixed regardless of envelope duration.
std::vector<std::size_t> SegmentStarts(std::size_t env_len, std::size_t window,
                                       int n_slices);

// Spectrum of one window: mean subtraction, Hann window, zero padding to
// zero_pad_factor * window, real FFT magnitude. Returns only the bins with
// 0 < f <= fmax.
void LfSpectrum(std::span<const double> segment, double rate_hz,
                const SpectrogramConfig& cfg, std::vector<double>* freqs,
                std::vector<double>* magnitudes);

RhythmSpectrogram ComputeRhythmSpectrogram(const EnvelopeSeries& env,
                                           const SpectrogramConfig& cfg = {});

// CSV layout: optional '#' provenance comments, then a header row of
// frequencies, then one row of magnitudes per slice.
void WriteSpectrogramCsv(const std::string& path, const RhythmSpectrogram& spec,
                         const std::string& provenance_json);

struct SpectrogramCsv {
  std::vector<double> freq_axis_hz;
  Matrix magnitudes;
  std::string provenance_json;  // empty if none
};

SpectrogramCsv ReadSpectrogramCsv(const std::string& path);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_RHYTHM_SPECTROGRAM_HPP_
