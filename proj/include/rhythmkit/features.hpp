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

#ifndef RHYTHMKIT_FEATURES_HPP_
#define RHYTHMKIT_FEATURES_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rhythmkit/matrix.hpp"
#include "rhythmkit/rhythm_spectrogram.hpp"

namespace rhythmkit {

// Peak picking over a 1-D series. A plateau counts once, at its middle
// sample. Prominence of a peak is its height minus the higher of the two
// base minima, where each base is the lowest value between the peak and
// the nearest strictly higher sample (or the signal edge).
struct Peak {
  std::size_t index = 0;
  double height = 0.0;
  double prominence = 0.0;
};

std::vector<Peak> FindPeaks(std::span<const double> values);

// Keeps peaks at least min_distance indices apart. Higher peaks win;
// equal heights prefer the lower index.
std::vector<Peak> FilterByDistance(std::vector<Peak> peaks,
                                   std::size_t min_distance);

struct PeakPickConfig {
  double prominence_min = 0.05;
  double min_separation_hz = 0.3;
};

// The n strongest rhythm peaks of one spectrogram slice, as frequencies
// sorted ascending. Always returns exactly n values, falling back in
// order: prominent separated maxima, then any separated maxima, then the
// strongest unused nonzero bins that keep the separation, then repeated
// copies of the slice argmax.
std::vector<double> PickFormants(std::span<const double> magnitudes,
                                 std::span<const double> freqs_hz, int n,
                                 const PeakPickConfig& cfg = {});

struct FormantTrajectories {
  Matrix freqs_hz;  // n_slices x n_formants, rows sorted ascending
  int n_formants = 0;
  EnvelopeKind kind = EnvelopeKind::kAm;
};

FormantTrajectories FormantTracks(const RhythmSpectrogram& spec, int n,
                                  const PeakPickConfig& cfg = {});

// Population variance (divide by slice count) of each trajectory, Hz^2.
std::vector<double> TrajectoryVariance(const FormantTrajectories& traj);

// Orthonormal DCT-II across rows then columns, and its exact inverse.
Matrix Dct2(const Matrix& m);
Matrix Idct2(const Matrix& m);

// Top-left c x c block of Dct2(m), flattened row-major.
std::vector<double> Dct2Block(const Matrix& m, int c);

struct FeatureVector {
  std::vector<double> values;
  std::vector<std::pair<std::string, std::size_t>> layout;
  int n_formants = 0;
  int dct_order = 0;
};

// Layout [am_var(N), fm_var(N), am_dct(C^2), fm_dct(C^2)], 2N + 2C^2 long.
FeatureVector CombinedFeatures(const RhythmSpectrogram& am,
                               const RhythmSpectrogram& fm, int n, int c,
                               const PeakPickConfig& cfg = {});

// Feature CSV: '#' provenance comments, header utt_id,label,mmse,f_0..,
// one row per utterance. Empty label/mmse fields mean absent.
struct FeatureRow {
  std::string utt_id;
  std::string label;  // empty if absent
  std::optional<double> mmse;
  std::vector<double> values;
};

struct FeatureTable {
  std::size_t n_features = 0;
  std::vector<FeatureRow> rows;
  std::string provenance_json;  // empty if none
};

void WriteFeatureCsv(const std::string& path, const FeatureTable& table,
                     const std::string& provenance_json);

FeatureTable ReadFeatureCsv(const std::string& path);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_FEATURES_HPP_
