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
#include "rhythmkit/fft.hpp"
#include "rhythmkit/rhythm_spectrogram.hpp"
#include "rhythmkit/rng.hpp"
#include "test_util.hpp"

using rhythmkit::EnvelopeSeries;
using rhythmkit::ErrorCode;
using rhythmkit::RhythmSpectrogram;
using rhythmkit::SpectrogramConfig;
using testutil::CodeOf;
using testutil::TempDir;

namespace {

constexpr double kPi = std::numbers::pi;

EnvelopeSeries SineEnvelope(double freq_hz, double offset, double amp,
                            double duration_s, double rate) {
  EnvelopeSeries env;
  env.rate_hz = rate;
  env.kind = rhythmkit::EnvelopeKind::kAm;
  const auto n = static_cast<std::size_t>(duration_s * rate);
  env.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    env.values[i] = offset + amp * std::sin(2.0 * kPi * freq_hz * i / rate);
  }
  return env;
}

}  // namespace

TEST_CASE("real fft matches the direct dft oracle") {
  rhythmkit::Rng rng(7);
  for (std::size_t n : {std::size_t{128}, std::size_t{37}}) {
    std::vector<double> x(n);
    for (double& v : x) v = rng.Uniform(-1.0, 1.0);
    for (std::size_t n_fft : {n, 4 * n}) {
      const auto fast = rhythmkit::fft::RealFft(x, n_fft);
      const auto slow = oracles::DirectDft(x, n_fft);
      REQUIRE(fast.size() == slow.size());
      for (std::size_t k = 0; k < fast.size(); ++k) {
        CHECK(std::abs(fast[k] - slow[k]) < 1e-9 * static_cast<double>(n_fft));
      }
    }
  }
}

TEST_CASE("segment starts cover the envelope with even spacing") {
  const auto starts = rhythmkit::SegmentStarts(1000, 500, 100);
  REQUIRE(starts.size() == 100);
  CHECK(starts.front() == 0);
  CHECK(starts.back() == 500);
  for (std::size_t i = 1; i < starts.size(); ++i) {
    CHECK(starts[i] >= starts[i - 1]);
  }

  // Envelope exactly one window long: every slice starts at zero.
  const auto pinned = rhythmkit::SegmentStarts(500, 500, 100);
  for (std::size_t s : pinned) CHECK(s == 0);

  CHECK(CodeOf([] { rhythmkit::SegmentStarts(499, 500, 100); }) ==
        ErrorCode::kTooShort);
  CHECK(CodeOf([] { rhythmkit::SegmentStarts(1000, 500, 1); }) ==
        ErrorCode::kTooFewSlices);
}

TEST_CASE("low-frequency spectrum peaks at the envelope rhythm") {
  const EnvelopeSeries env = SineEnvelope(3.0, 0.6, 0.4, 5.0, 100.0);
  std::vector<double> freqs, mags;
  rhythmkit::LfSpectrum(env.values, env.rate_hz, SpectrogramConfig{}, &freqs,
                        &mags);
  REQUIRE(freqs.size() == 200);  // 0.05 Hz grid up to 10 Hz
  CHECK(freqs.front() == doctest::Approx(0.05));
  CHECK(freqs.back() == doctest::Approx(10.0));

  std::size_t argmax = 0;
  for (std::size_t i = 1; i < mags.size(); ++i) {
    if (mags[i] > mags[argmax]) argmax = i;
  }
  CHECK(freqs[argmax] == doctest::Approx(3.0).epsilon(1e-9));
  // Raw magnitudes: unit-max scaling is applied per slice downstream.
  CHECK(mags[argmax] > 0.0);
}

TEST_CASE("rhythm spectrogram invariants hold on a synthetic envelope") {
  const EnvelopeSeries env = SineEnvelope(3.0, 0.6, 0.4, 10.0, 100.0);
  const RhythmSpectrogram spec = rhythmkit::ComputeRhythmSpectrogram(env);

  REQUIRE(spec.magnitudes.rows() == 100);
  REQUIRE(spec.magnitudes.cols() == spec.freq_axis_hz.size());
  REQUIRE(spec.slice_times_s.size() == 100);

  for (double f : spec.freq_axis_hz) {
    CHECK(f > 0.0);
    CHECK(f <= 10.0 + 1e-12);
  }
  for (std::size_t r = 0; r < spec.magnitudes.rows(); ++r) {
    double mx = 0.0;
    std::size_t argmax = 0;
    for (std::size_t c = 0; c < spec.magnitudes.cols(); ++c) {
      CHECK(spec.magnitudes.at(r, c) >= 0.0);
      if (spec.magnitudes.at(r, c) > mx) {
        mx = spec.magnitudes.at(r, c);
        argmax = c;
      }
    }
    CHECK(mx == doctest::Approx(1.0));
    CHECK(spec.freq_axis_hz[argmax] == doctest::Approx(3.0).epsilon(1e-9));
  }
  // Slice centers advance monotonically across the envelope.
  CHECK(spec.slice_times_s.front() == doctest::Approx(2.5));
  CHECK(spec.slice_times_s.back() == doctest::Approx(7.5));
}

TEST_CASE("all-zero slices stay zero after per-slice normalization") {
  EnvelopeSeries env = SineEnvelope(2.0, 0.5, 0.3, 15.0, 100.0);
  // Silence the head so early windows see only zeros.
  for (std::size_t i = 0; i < 600; ++i) env.values[i] = 0.0;
  const RhythmSpectrogram spec = rhythmkit::ComputeRhythmSpectrogram(env);

  bool zero_row_seen = false;
  bool unit_row_seen = false;
  for (std::size_t r = 0; r < spec.magnitudes.rows(); ++r) {
    double mx = 0.0;
    for (std::size_t c = 0; c < spec.magnitudes.cols(); ++c) {
      mx = std::max(mx, spec.magnitudes.at(r, c));
    }
    if (mx == 0.0) zero_row_seen = true;
    if (mx == doctest::Approx(1.0)) unit_row_seen = true;
  }
  CHECK(zero_row_seen);
  CHECK(unit_row_seen);
}

TEST_CASE("spectrogram csv round trip is lossless and deterministic") {
  TempDir tmp("spec_csv");
  EnvelopeSeries env = SineEnvelope(4.0, 0.5, 0.4, 6.0, 100.0);
  SpectrogramConfig cfg;
  cfg.n_slices = 5;
  const RhythmSpectrogram spec = rhythmkit::ComputeRhythmSpectrogram(env, cfg);

  const std::string path1 = tmp.Path("a.csv");
  const std::string path2 = tmp.Path("b.csv");
  const std::string prov = "{\"tool\":\"rhythmkit\"}";
  rhythmkit::WriteSpectrogramCsv(path1, spec, prov);
  rhythmkit::WriteSpectrogramCsv(path2, spec, prov);
  CHECK(testutil::ReadAll(path1) == testutil::ReadAll(path2));

  const rhythmkit::SpectrogramCsv back = rhythmkit::ReadSpectrogramCsv(path1);
  REQUIRE(back.magnitudes.rows() == spec.magnitudes.rows());
  REQUIRE(back.magnitudes.cols() == spec.magnitudes.cols());
  CHECK(back.magnitudes == spec.magnitudes);  // exact: shortest round trip
  CHECK(back.freq_axis_hz == spec.freq_axis_hz);
  CHECK(back.provenance_json == prov);
}
