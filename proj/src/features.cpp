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

#include "rhythmkit/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>

#include "rhythmkit/csv.hpp"
#include "rhythmkit/error.hpp"

namespace rhythmkit {

std::vector<Peak> FindPeaks(std::span<const double> values) {
  std::vector<Peak> peaks;
  const std::size_t n = values.size();
  if (n < 3) return peaks;

  // Local maxima with plateau middles.
  std::size_t i = 1;
  while (i < n - 1) {
    if (values[i - 1] < values[i]) {
      std::size_t ahead = i + 1;
      while (ahead < n - 1 && values[ahead] == values[i]) ++ahead;
      if (values[ahead] < values[i]) {
        Peak p;
        p.index = (i + ahead - 1) / 2;
        p.height = values[i];
        peaks.push_back(p);
        i = ahead;
        continue;
      }
      i = ahead;
      continue;
    }
    ++i;
  }

  // Prominence: lowest value between the peak and the nearest strictly
  // higher sample (or edge) on each side; prominence is height minus the
  // higher of the two minima.
  for (Peak& p : peaks) {
    double left_min = p.height;
    for (std::size_t j = p.index; ; --j) {
      if (values[j] > p.height) break;
      left_min = std::min(left_min, values[j]);
      if (j == 0) break;
    }
    double right_min = p.height;
    for (std::size_t j = p.index; j < n; ++j) {
      if (values[j] > p.height) break;
      right_min = std::min(right_min, values[j]);
    }
    p.prominence = p.height - std::max(left_min, right_min);
  }
  return peaks;
}

std::vector<Peak> FilterByDistance(std::vector<Peak> peaks,
                                   std::size_t min_distance) {
  if (min_distance <= 1 || peaks.size() < 2) return peaks;
  std::vector<std::size_t> order(peaks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (peaks[a].height != peaks[b].height) {
                       return peaks[a].height > peaks[b].height;
                     }
                     return peaks[a].index < peaks[b].index;
                   });
  std::vector<bool> keep(peaks.size(), true);
  for (std::size_t oi : order) {
    if (!keep[oi]) continue;
    for (std::size_t oj = 0; oj < peaks.size(); ++oj) {
      if (oj == oi || !keep[oj]) continue;
      const std::size_t a = peaks[oi].index;
      const std::size_t b = peaks[oj].index;
      const std::size_t gap = a > b ? a - b : b - a;
      if (gap < min_distance) keep[oj] = false;
    }
  }
  std::vector<Peak> out;
  for (std::size_t k = 0; k < peaks.size(); ++k) {
    if (keep[k]) out.push_back(peaks[k]);
  }
  return out;
}

namespace {

// Sorts indices by (magnitude desc, index asc); ties prefer lower frequency.
std::vector<std::size_t> ByMagnitudeDesc(std::span<const double> magnitudes,
                                         const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> order = idx;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (magnitudes[a] != magnitudes[b]) {
                       return magnitudes[a] > magnitudes[b];
                     }
                     return a < b;
                   });
  return order;
}

}  // namespace

std::vector<double> PickFormants(std::span<const double> magnitudes,
                                 std::span<const double> freqs_hz, int n,
                                 const PeakPickConfig& cfg) {
  Require(!magnitudes.empty(), ErrorCode::kEmptySlice, "empty slice");
  Require(magnitudes.size() == freqs_hz.size(), ErrorCode::kLengthMismatch,
          "slice and frequency axis differ in length");
  Require(n >= 1, ErrorCode::kInvalidArgument, "need n >= 1 formants");

  const std::size_t count = static_cast<std::size_t>(n);
  const double df = freqs_hz.size() >= 2 ? freqs_hz[1] - freqs_hz[0]
                                         : cfg.min_separation_hz;
  const std::size_t min_distance = static_cast<std::size_t>(
      std::ceil(cfg.min_separation_hz / df - 1e-9));

  const std::vector<Peak> separated =
      FilterByDistance(FindPeaks(magnitudes), min_distance);

  std::vector<std::size_t> chosen;
  std::vector<bool> used(magnitudes.size(), false);
  auto take = [&](std::size_t idx) {
    chosen.push_back(idx);
    used[idx] = true;
  };

  // Stage 1: prominent separated maxima, strongest first.
  {
    std::vector<std::size_t> idx;
    for (const Peak& p : separated) {
      if (p.prominence >= cfg.prominence_min) idx.push_back(p.index);
    }
    for (std::size_t i : ByMagnitudeDesc(magnitudes, idx)) {
      if (chosen.size() == count) break;
      take(i);
    }
  }
  // Stage 2: remaining separated maxima with prominence relaxed to zero.
  if (chosen.size() < count) {
    std::vector<std::size_t> idx;
    for (const Peak& p : separated) {
      if (!used[p.index]) idx.push_back(p.index);
    }
    for (std::size_t i : ByMagnitudeDesc(magnitudes, idx)) {
      if (chosen.size() == count) break;
      take(i);
    }
  }
  // Stage 3: strongest unused nonzero bins that keep the separation.
  if (chosen.size() < count) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < magnitudes.size(); ++i) {
      if (!used[i] && magnitudes[i] > 0.0) idx.push_back(i);
    }
    for (std::size_t i : ByMagnitudeDesc(magnitudes, idx)) {
      if (chosen.size() == count) break;
      bool far_enough = true;
      for (std::size_t c : chosen) {
        const std::size_t gap = i > c ? i - c : c - i;
        if (gap < min_distance) {
          far_enough = false;
          break;
        }
      }
      if (far_enough) take(i);
    }
  }
  // Stage 4: repeat the slice argmax until the count is met.
  if (chosen.size() < count) {
    const std::size_t argmax = static_cast<std::size_t>(std::distance(
        magnitudes.begin(),
        std::max_element(magnitudes.begin(), magnitudes.end())));
    while (chosen.size() < count) chosen.push_back(argmax);
  }

  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i : chosen) out.push_back(freqs_hz[i]);
  std::sort(out.begin(), out.end());
  return out;
}

FormantTrajectories FormantTracks(const RhythmSpectrogram& spec, int n,
                                  const PeakPickConfig& cfg) {
  Require(spec.magnitudes.rows() > 0, ErrorCode::kEmptySlice,
          "spectrogram has no slices");
  FormantTrajectories traj;
  traj.n_formants = n;
  traj.kind = spec.kind;
  traj.freqs_hz =
      Matrix(spec.magnitudes.rows(), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < spec.magnitudes.rows(); ++i) {
    const std::vector<double> picked =
        PickFormants(spec.magnitudes.row(i), spec.freq_axis_hz, n, cfg);
    std::copy(picked.begin(), picked.end(), traj.freqs_hz.row(i).begin());
  }
  return traj;
}

std::vector<double> TrajectoryVariance(const FormantTrajectories& traj) {
  const std::size_t rows = traj.freqs_hz.rows();
  Require(rows >= 2, ErrorCode::kTooFewSlices,
          "variance needs at least 2 slices");
  const std::size_t cols = traj.freqs_hz.cols();
  std::vector<double> var(cols, 0.0);
  for (std::size_t k = 0; k < cols; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < rows; ++i) mean += traj.freqs_hz.at(i, k);
    mean /= static_cast<double>(rows);
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const double d = traj.freqs_hz.at(i, k) - mean;
      acc += d * d;
    }
    var[k] = acc / static_cast<double>(rows);
  }
  return var;
}

namespace {

// Orthonormal DCT-II basis: basis[k][j] = s(k) cos(pi (2j+1) k / (2M)),
// s(0) = sqrt(1/M), s(k>0) = sqrt(2/M). Rows are orthonormal, so the
// inverse transform is multiplication by the transpose.
Matrix DctBasis(std::size_t m) {
  Matrix basis(m, m);
  const double s0 = std::sqrt(1.0 / static_cast<double>(m));
  const double sk = std::sqrt(2.0 / static_cast<double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const double scale = k == 0 ? s0 : sk;
    for (std::size_t j = 0; j < m; ++j) {
      basis.at(k, j) =
          scale * std::cos(std::numbers::pi *
                           (2.0 * static_cast<double>(j) + 1.0) *
                           static_cast<double>(k) /
                           (2.0 * static_cast<double>(m)));
    }
  }
  return basis;
}

enum class Axis { kRows, kCols };

// Applies a basis along one axis: rows means out[k][c] = sum_j B[k][j] m[j][c].
Matrix ApplyBasis(const Matrix& basis, const Matrix& m, Axis axis,
                  bool transpose_basis) {
  Matrix out(m.rows(), m.cols());
  const std::size_t span = axis == Axis::kRows ? m.rows() : m.cols();
  for (std::size_t k = 0; k < span; ++k) {
    for (std::size_t other = 0;
         other < (axis == Axis::kRows ? m.cols() : m.rows()); ++other) {
      double acc = 0.0;
      for (std::size_t j = 0; j < span; ++j) {
        const double b = transpose_basis ? basis.at(j, k) : basis.at(k, j);
        acc += b * (axis == Axis::kRows ? m.at(j, other) : m.at(other, j));
      }
      if (axis == Axis::kRows) {
        out.at(k, other) = acc;
      } else {
        out.at(other, k) = acc;
      }
    }
  }
  return out;
}

}  // namespace

Matrix Dct2(const Matrix& m) {
  Require(m.rows() > 0 && m.cols() > 0, ErrorCode::kInvalidArgument,
          "empty matrix");
  const Matrix row_basis = DctBasis(m.rows());
  const Matrix col_basis = DctBasis(m.cols());
  const Matrix t = ApplyBasis(row_basis, m, Axis::kRows, false);
  return ApplyBasis(col_basis, t, Axis::kCols, false);
}

Matrix Idct2(const Matrix& m) {
  Require(m.rows() > 0 && m.cols() > 0, ErrorCode::kInvalidArgument,
          "empty matrix");
  const Matrix row_basis = DctBasis(m.rows());
  const Matrix col_basis = DctBasis(m.cols());
  const Matrix t = ApplyBasis(col_basis, m, Axis::kCols, true);
  return ApplyBasis(row_basis, t, Axis::kRows, true);
}

std::vector<double> Dct2Block(const Matrix& m, int c) {
  Require(c >= 1, ErrorCode::kInvalidArgument, "block order must be >= 1");
  const std::size_t order = static_cast<std::size_t>(c);
  Require(order <= std::min(m.rows(), m.cols()), ErrorCode::kOrderTooLarge,
          "block order " + std::to_string(c) + " exceeds matrix extent " +
              std::to_string(std::min(m.rows(), m.cols())));
  const Matrix full = Dct2(m);
  std::vector<double> block;
  block.reserve(order * order);
  for (std::size_t i = 0; i < order; ++i) {
    for (std::size_t j = 0; j < order; ++j) {
      block.push_back(full.at(i, j));
    }
  }
  return block;
}

FeatureVector CombinedFeatures(const RhythmSpectrogram& am,
                               const RhythmSpectrogram& fm, int n, int c,
                               const PeakPickConfig& cfg) {
  Require(n >= 0 && c >= 0, ErrorCode::kInvalidArgument,
          "feature orders must be non-negative");
  Require(n > 0 || c > 0, ErrorCode::kInvalidArgument,
          "feature vector would be empty");
  FeatureVector fv;
  fv.n_formants = n;
  fv.dct_order = c;

  std::vector<double> am_var;
  std::vector<double> fm_var;
  if (n > 0) {
    am_var = TrajectoryVariance(FormantTracks(am, n, cfg));
    fm_var = TrajectoryVariance(FormantTracks(fm, n, cfg));
  }
  std::vector<double> am_dct;
  std::vector<double> fm_dct;
  if (c > 0) {
    am_dct = Dct2Block(am.magnitudes, c);
    fm_dct = Dct2Block(fm.magnitudes, c);
  }

  fv.values.reserve(am_var.size() + fm_var.size() + am_dct.size() +
                    fm_dct.size());
  auto append = [&fv](const std::string& name, const std::vector<double>& v) {
    fv.layout.emplace_back(name, v.size());
    fv.values.insert(fv.values.end(), v.begin(), v.end());
  };
  append("am_var", am_var);
  append("fm_var", fm_var);
  append("am_dct", am_dct);
  append("fm_dct", fm_dct);

  for (double v : fv.values) {
    Require(std::isfinite(v), ErrorCode::kInvalidArgument,
            "non-finite feature value");
  }
  return fv;
}

void WriteFeatureCsv(const std::string& path, const FeatureTable& table,
                     const std::string& provenance_json) {
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), ErrorCode::kIoError, "cannot open for writing: " + path);
  if (!provenance_json.empty()) {
    out << "# provenance: " << provenance_json << "\n";
  }
  out << "utt_id,label,mmse";
  for (std::size_t k = 0; k < table.n_features; ++k) {
    out << ",f_" << k;
  }
  out << '\n';
  for (const FeatureRow& row : table.rows) {
    Require(row.values.size() == table.n_features,
            ErrorCode::kDimensionMismatch,
            "feature row " + row.utt_id + " has " +
                std::to_string(row.values.size()) + " values, expected " +
                std::to_string(table.n_features));
    out << row.utt_id << ',' << row.label << ',';
    if (row.mmse.has_value()) out << csv::FormatDouble(*row.mmse);
    for (double v : row.values) {
      out << ',' << csv::FormatDouble(v);
    }
    out << '\n';
  }
  Require(out.good(), ErrorCode::kIoError, "write failed: " + path);
}

FeatureTable ReadFeatureCsv(const std::string& path) {
  const csv::File file = csv::ReadFile(path);
  FeatureTable table;
  const std::string kProvenanceTag = "provenance:";
  for (const std::string& comment : file.comments) {
    const std::string body = csv::Trim(comment);
    if (body.rfind(kProvenanceTag, 0) == 0) {
      table.provenance_json = csv::Trim(body.substr(kProvenanceTag.size()));
    }
  }
  Require(!file.rows.empty(), ErrorCode::kMalformedCsv,
          "feature csv has no header: " + path);
  const std::vector<std::string>& header = file.rows[0];
  Require(header.size() >= 4 && header[0] == "utt_id" &&
              header[1] == "label" && header[2] == "mmse",
          ErrorCode::kMalformedCsv,
          "feature csv header must start with utt_id,label,mmse: " + path);
  table.n_features = header.size() - 3;
  for (std::size_t k = 0; k < table.n_features; ++k) {
    Require(header[k + 3] == "f_" + std::to_string(k),
            ErrorCode::kMalformedCsv,
            "feature column " + std::to_string(k) + " is named '" +
                header[k + 3] + "', expected f_" + std::to_string(k));
  }
  for (std::size_t r = 1; r < file.rows.size(); ++r) {
    const std::vector<std::string>& cells = file.rows[r];
    Require(cells.size() == header.size(), ErrorCode::kMalformedRow,
            "feature row " + std::to_string(r + 1) + " has " +
                std::to_string(cells.size()) + " cells, expected " +
                std::to_string(header.size()));
    FeatureRow row;
    row.utt_id = cells[0];
    row.label = cells[1];
    row.mmse = csv::ParseOptionalDouble(cells[2], "mmse");
    row.values.reserve(table.n_features);
    for (std::size_t k = 0; k < table.n_features; ++k) {
      row.values.push_back(
          csv::ParseDouble(cells[k + 3], "feature f_" + std::to_string(k)));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace rhythmkit
