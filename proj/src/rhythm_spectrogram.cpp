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

#include "rhythmkit/rhythm_spectrogram.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rhythmkit/csv.hpp"
#include "rhythmkit/error.hpp"
#include "rhythmkit/fft.hpp"

namespace rhythmkit {

std::vector<std::size_t> SegmentStarts(std::size_t env_len, std::size_t window,
                                       int n_slices) {
  Require(n_slices >= 2, ErrorCode::kTooFewSlices,
          "need at least 2 slices, got " + std::to_string(n_slices));
  Require(window >= 1, ErrorCode::kInvalidArgument, "window must be >= 1");
  Require(env_len >= window, ErrorCode::kTooShort,
          "envelope length " + std::to_string(env_len) +
              " shorter than analysis window " + std::to_string(window));
  const double span = static_cast<double>(env_len - window);
  const double denom = static_cast<double>(n_slices - 1);
  std::vector<std::size_t> starts(static_cast<std::size_t>(n_slices));
  for (int i = 0; i < n_slices; ++i) {
    starts[static_cast<std::size_t>(i)] =
        static_cast<std::size_t>(std::llround(i * span / denom));
  }
  return starts;
}

namespace {

// Symmetric Hann; a single-sample window degenerates to 1.
std::vector<double> HannWindow(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  const double denom = static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                 static_cast<double>(j) / denom));
  }
  return w;
}

}  // namespace

void LfSpectrum(std::span<const double> segment, double rate_hz,
                const SpectrogramConfig& cfg, std::vector<double>* freqs,
                std::vector<double>* magnitudes) {
  Require(!segment.empty(), ErrorCode::kEmptySlice, "empty analysis slice");
  Require(rate_hz > 0.0, ErrorCode::kInvalidArgument, "rate must be positive");
  Require(cfg.zero_pad_factor >= 1, ErrorCode::kInvalidArgument,
          "zero_pad_factor must be >= 1");
  Require(cfg.fmax_hz > 0.0, ErrorCode::kInvalidArgument,
          "fmax must be positive");

  const std::size_t w = segment.size();
  const double mean =
      std::accumulate(segment.begin(), segment.end(), 0.0) /
      static_cast<double>(w);
  const std::vector<double> hann = HannWindow(w);
  std::vector<double> windowed(w);
  for (std::size_t j = 0; j < w; ++j) {
    windowed[j] = (segment[j] - mean) * hann[j];
  }

  const std::size_t n_fft = w * static_cast<std::size_t>(cfg.zero_pad_factor);
  const std::vector<std::complex<double>> bins = fft::RealFft(windowed, n_fft);
  const double df = rate_hz / static_cast<double>(n_fft);

  freqs->clear();
  magnitudes->clear();
  for (std::size_t k = 1; k < bins.size(); ++k) {
    const double f = static_cast<double>(k) * df;
    if (f > cfg.fmax_hz * (1.0 + 1e-12)) break;
    freqs->push_back(f);
    magnitudes->push_back(std::abs(bins[k]));
  }
  Require(!freqs->empty(), ErrorCode::kInvalidArgument,
          "no analysis bins at or below fmax; increase window or fmax");
}

RhythmSpectrogram ComputeRhythmSpectrogram(const EnvelopeSeries& env,
                                           const SpectrogramConfig& cfg) {
  Require(env.rate_hz > 0.0, ErrorCode::kInvalidArgument,
          "envelope rate must be positive");
  const std::size_t window =
      static_cast<std::size_t>(std::llround(cfg.window_s * env.rate_hz));
  Require(window >= 2, ErrorCode::kInvalidArgument,
          "analysis window shorter than 2 samples");
  const std::vector<std::size_t> starts =
      SegmentStarts(env.values.size(), window, cfg.n_slices);

  RhythmSpectrogram out;
  out.kind = env.kind;
  out.slice_times_s.reserve(starts.size());

  std::vector<double> freqs;
  std::vector<double> mags;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::span<const double> seg(env.values.data() + starts[i], window);
    LfSpectrum(seg, env.rate_hz, cfg, &freqs, &mags);
    if (i == 0) {
      out.freq_axis_hz = freqs;
      out.magnitudes = Matrix(starts.size(), freqs.size());
    }
    const double peak = *std::max_element(mags.begin(), mags.end());
    std::span<double> row = out.magnitudes.row(i);
    if (peak > 0.0) {
      for (std::size_t k = 0; k < mags.size(); ++k) row[k] = mags[k] / peak;
    } else {
      // A constant slice has no rhythm content; its row stays zero.
      std::fill(row.begin(), row.end(), 0.0);
    }
    out.slice_times_s.push_back(
        (static_cast<double>(starts[i]) + 0.5 * static_cast<double>(window)) /
        env.rate_hz);
  }
  return out;
}

void WriteSpectrogramCsv(const std::string& path, const RhythmSpectrogram& spec,
                         const std::string& provenance_json) {
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), ErrorCode::kIoError, "cannot open for writing: " + path);
  if (!provenance_json.empty()) {
    out << "# provenance: " << provenance_json << "\n";
  }
  out << "# kind: " << EnvelopeKindName(spec.kind) << "\n";
  for (std::size_t k = 0; k < spec.freq_axis_hz.size(); ++k) {
    if (k != 0) out << ',';
    out << csv::FormatDouble(spec.freq_axis_hz[k]);
  }
  out << '\n';
  for (std::size_t i = 0; i < spec.magnitudes.rows(); ++i) {
    const std::span<const double> row = spec.magnitudes.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k != 0) out << ',';
      out << csv::FormatDouble(row[k]);
    }
    out << '\n';
  }
  Require(out.good(), ErrorCode::kIoError, "write failed: " + path);
}

SpectrogramCsv ReadSpectrogramCsv(const std::string& path) {
  const csv::File file = csv::ReadFile(path);
  SpectrogramCsv out;
  const std::string kProvenanceTag = "provenance:";
  for (const std::string& comment : file.comments) {
    const std::string body = csv::Trim(comment);
    if (body.rfind(kProvenanceTag, 0) == 0) {
      out.provenance_json = csv::Trim(body.substr(kProvenanceTag.size()));
    }
  }
  Require(file.rows.size() >= 2, ErrorCode::kMalformedCsv,
          "spectrogram csv needs a frequency header and at least one row: " +
              path);
  for (const std::string& cell : file.rows[0]) {
    out.freq_axis_hz.push_back(csv::ParseDouble(cell, "frequency header"));
  }
  const std::size_t n_rows = file.rows.size() - 1;
  const std::size_t n_cols = out.freq_axis_hz.size();
  out.magnitudes = Matrix(n_rows, n_cols);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const std::vector<std::string>& cells = file.rows[i + 1];
    Require(cells.size() == n_cols, ErrorCode::kMalformedCsv,
            "row " + std::to_string(i + 2) + " has " +
                std::to_string(cells.size()) + " cells, expected " +
                std::to_string(n_cols));
    for (std::size_t k = 0; k < n_cols; ++k) {
      out.magnitudes.at(i, k) =
          csv::ParseDouble(cells[k], "magnitude row " + std::to_string(i + 2));
    }
  }
  return out;
}

}  // namespace rhythmkit
