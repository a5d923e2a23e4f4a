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

#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "rhythmkit/error.hpp"
#include "rhythmkit/features.hpp"
#include "rhythmkit/rhythm_spectrogram.hpp"
#include "rhythmkit/rng.hpp"
#include "test_util.hpp"

using rhythmkit::ErrorCode;
using rhythmkit::FeatureRow;
using rhythmkit::FeatureTable;
using rhythmkit::Matrix;
using rhythmkit::Peak;
using rhythmkit::RhythmSpectrogram;
using testutil::CodeOf;
using testutil::TempDir;

namespace {

// 200-bin axis at 0.05 Hz steps, matching the default spectrogram grid.
std::vector<double> DefaultAxis() {
  std::vector<double> f(200);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = 0.05 * static_cast<double>(i + 1);
  }
  return f;
}

RhythmSpectrogram SyntheticSpectrogram(double peak_hz, std::size_t n_slices) {
  RhythmSpectrogram spec;
  spec.freq_axis_hz = DefaultAxis();
  spec.magnitudes = Matrix(n_slices, spec.freq_axis_hz.size());
  for (std::size_t r = 0; r < n_slices; ++r) {
    for (std::size_t c = 0; c < spec.freq_axis_hz.size(); ++c) {
      const double d = spec.freq_axis_hz[c] - peak_hz;
      spec.magnitudes.at(r, c) = std::exp(-d * d / 0.02);
    }
    double mx = 0.0;
    for (std::size_t c = 0; c < spec.freq_axis_hz.size(); ++c) {
      mx = std::max(mx, spec.magnitudes.at(r, c));
    }
    for (std::size_t c = 0; c < spec.freq_axis_hz.size(); ++c) {
      spec.magnitudes.at(r, c) /= mx;
    }
  }
  spec.slice_times_s.assign(n_slices, 0.0);
  return spec;
}

}  // namespace

TEST_CASE("peak detection finds maxima, plateau middles, and prominences") {
  const std::vector<double> v = {0.0, 3.0, 1.0, 2.0, 2.0, 0.0, 5.0, 0.0};
  const std::vector<Peak> peaks = rhythmkit::FindPeaks(v);
  REQUIRE(peaks.size() == 3);

  CHECK(peaks[0].index == 1);
  CHECK(peaks[0].height == 3.0);
  CHECK(peaks[0].prominence == 3.0);

  // The plateau at indices 3..4 is reported at its (lower) middle; its
  // bases are 1.0 on the left and 0.0 on the right.
  CHECK(peaks[1].index == 3);
  CHECK(peaks[1].height == 2.0);
  CHECK(peaks[1].prominence == 1.0);

  CHECK(peaks[2].index == 6);
  CHECK(peaks[2].prominence == 5.0);

  // Edge samples are never peaks.
  CHECK(rhythmkit::FindPeaks(std::vector<double>{5.0, 1.0, 4.0}).empty());
}

TEST_CASE("distance filtering keeps the taller of two close peaks") {
  std::vector<Peak> peaks;
  peaks.push_back({10, 5.0, 5.0});
  peaks.push_back({12, 4.0, 4.0});
  peaks.push_back({20, 3.0, 3.0});
  const std::vector<Peak> kept = rhythmkit::FilterByDistance(peaks, 3);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].index == 10);
  CHECK(kept[1].index == 20);
}

TEST_CASE("formant picking falls back in documented stages") {
  const std::vector<double> freqs = DefaultAxis();
  std::vector<double> mags(freqs.size(), 0.0);
  mags[39] = 1.0;   // 2.0 Hz
  mags[99] = 0.8;   // 5.0 Hz
  mags[159] = 0.6;  // 8.0 Hz

  // Three isolated spikes and no other nonzero bins: the remaining three
  // slots repeat the slice argmax.
  const std::vector<double> got = rhythmkit::PickFormants(mags, freqs, 6);
  CHECK(got == std::vector<double>{2.0, 2.0, 2.0, 2.0, 5.0, 8.0});

  // All-zero slice: every slot lands on the first bin.
  const std::vector<double> zeros(freqs.size(), 0.0);
  const std::vector<double> flat = rhythmkit::PickFormants(zeros, freqs, 6);
  for (double f : flat) CHECK(f == doctest::Approx(0.05));

  // Result is sorted ascending and respects the 0.3 Hz separation when
  // enough distinct peaks exist.
  const std::vector<double> three = rhythmkit::PickFormants(mags, freqs, 3);
  CHECK(three == std::vector<double>{2.0, 5.0, 8.0});
}

TEST_CASE("trajectory variance matches the two-pass oracle") {
  rhythmkit::FormantTrajectories traj;
  traj.n_formants = 2;
  traj.freqs_hz = Matrix(5, 2);
  rhythmkit::Rng rng(11);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      traj.freqs_hz.at(i, k) = rng.Uniform(0.0, 10.0);
    }
  }
  const std::vector<double> var = rhythmkit::TrajectoryVariance(traj);
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<double> column(5);
    for (std::size_t i = 0; i < 5; ++i) column[i] = traj.freqs_hz.at(i, k);
    CHECK(var[k] == doctest::Approx(oracles::TwoPassVariance(column))
                        .epsilon(1e-12));
  }
}

TEST_CASE("2d dct matches the direct oracle and inverts exactly") {
  rhythmkit::Rng rng(3);
  Matrix m(8, 8);
  for (double& v : m.data()) v = rng.Uniform(-1.0, 1.0);

  const Matrix fast = rhythmkit::Dct2(m);
  const Matrix slow = oracles::DirectDct2(m);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(fast.at(i, j) == doctest::Approx(slow.at(i, j)).epsilon(1e-10));
    }
  }

  const Matrix back = rhythmkit::Idct2(fast);
  double max_err = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      max_err = std::max(max_err, std::fabs(back.at(i, j) - m.at(i, j)));
    }
  }
  CHECK(max_err < 1e-9);

  // Non-square case at production sizes.
  Matrix big(100, 200);
  for (double& v : big.data()) v = rng.Uniform(0.0, 1.0);
  const Matrix round = rhythmkit::Idct2(rhythmkit::Dct2(big));
  max_err = 0.0;
  for (std::size_t i = 0; i < big.rows(); ++i) {
    for (std::size_t j = 0; j < big.cols(); ++j) {
      max_err = std::max(max_err, std::fabs(round.at(i, j) - big.at(i, j)));
    }
  }
  CHECK(max_err < 1e-9);
}

TEST_CASE("dct of a constant matrix concentrates all energy at (0,0)") {
  const double v = 3.25;
  Matrix m(7, 5);
  for (double& x : m.data()) x = v;
  const Matrix d = rhythmkit::Dct2(m);
  CHECK(d.at(0, 0) == doctest::Approx(v * std::sqrt(35.0)).epsilon(1e-12));
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (i == 0 && j == 0) continue;
      CHECK(std::fabs(d.at(i, j)) < 1e-9);
    }
  }
}

TEST_CASE("dct block is the row-major top-left corner") {
  rhythmkit::Rng rng(5);
  Matrix m(6, 9);
  for (double& v : m.data()) v = rng.Uniform(-2.0, 2.0);
  const Matrix full = rhythmkit::Dct2(m);
  const std::vector<double> block = rhythmkit::Dct2Block(m, 3);
  REQUIRE(block.size() == 9);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(block[i * 3 + j] == full.at(i, j));
    }
  }
  CHECK(CodeOf([&] { rhythmkit::Dct2Block(m, 7); }) ==
        ErrorCode::kOrderTooLarge);
}

TEST_CASE("combined feature vector has the documented layout and size") {
  const RhythmSpectrogram am = SyntheticSpectrogram(2.0, 10);
  const RhythmSpectrogram fm = SyntheticSpectrogram(5.0, 10);

  for (int c : {2, 3, 4}) {
    const rhythmkit::FeatureVector fv =
        rhythmkit::CombinedFeatures(am, fm, 6, c);
    CHECK(fv.values.size() == static_cast<std::size_t>(12 + 2 * c * c));
    REQUIRE(fv.layout.size() == 4);
    CHECK(fv.layout[0].first == "am_var");
    CHECK(fv.layout[0].second == 6);
    CHECK(fv.layout[1].first == "fm_var");
    CHECK(fv.layout[2].first == "am_dct");
    CHECK(fv.layout[2].second == static_cast<std::size_t>(c * c));
    CHECK(fv.layout[3].first == "fm_dct");
  }

  CHECK(CodeOf([&] { rhythmkit::CombinedFeatures(am, fm, 0, 0); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("feature csv round trip preserves rows, labels, and provenance") {
  TempDir tmp("feature_csv");
  FeatureTable table;
  table.n_features = 3;
  table.rows.push_back(FeatureRow{"u1", "AD", 21.0, {0.5, -1.25, 3.0}});
  table.rows.push_back(FeatureRow{"u2", "HC", std::nullopt, {1.0, 0.0, 2.5}});
  const std::string path = tmp.Path("features.csv");
  rhythmkit::WriteFeatureCsv(path, table, "{\"cfg\":1}");

  const FeatureTable back = rhythmkit::ReadFeatureCsv(path);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.n_features == 3);
  CHECK(back.provenance_json == "{\"cfg\":1}");
  CHECK(back.rows[0].utt_id == "u1");
  CHECK(back.rows[0].label == "AD");
  CHECK(back.rows[0].mmse == 21.0);
  CHECK(back.rows[0].values == table.rows[0].values);
  CHECK(!back.rows[1].mmse.has_value());
  CHECK(back.rows[1].values == table.rows[1].values);

  // Misnamed feature columns are rejected.
  testutil::WriteAll(tmp.Path("bad.csv"),
                     "utt_id,label,mmse,f_0,f_2\nu1,AD,20,1,2\n");
  CHECK(CodeOf([&] { rhythmkit::ReadFeatureCsv(tmp.Path("bad.csv")); }) ==
        ErrorCode::kMalformedCsv);
}
