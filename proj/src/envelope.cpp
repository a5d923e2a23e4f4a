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

#include "rhythmkit/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rhythmkit/error.hpp"
#include "rhythmkit/fft.hpp"

namespace rhythmkit {

namespace {

// Tracker cost weights. The lag term biases candidate selection toward
// the shortest lag among near-equal correlation peaks, which is what
// keeps the path off subharmonics (lag 2T correlates exactly as well as
// the true period T for any periodic frame).
constexpr double kLagWeight = 0.3;
constexpr double kFreqJumpWeight = 0.5;
constexpr double kVoicingSwitchCost = 0.2;
constexpr int kMaxCandidates = 8;

bool AllZero(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

struct F0Candidate {
  double f0 = 0.0;       // 0 means the unvoiced state
  double local_cost = 0.0;
};

// Parabolic peak interpolation on three equidistant points; returns the
// sub-sample offset in [-0.5, 0.5] and the interpolated peak value.
void RefinePeak(double left, double mid, double right, double* offset,
                double* value) {
  double denom = left - 2.0 * mid + right;
  if (std::fabs(denom) < 1e-30) {
    *offset = 0.0;
    *value = mid;
    return;
  }
  double d = 0.5 * (left - right) / denom;
  d = std::clamp(d, -0.5, 0.5);
  *offset = d;
  *value = mid - 0.25 * (left - right) * d;
}

}  // namespace

const char* EnvelopeKindName(EnvelopeKind kind) {
  return kind == EnvelopeKind::kAm ? "am" : "fm";
}

std::vector<double> ZeroPhaseMovingAverage(std::span<const double> x,
                                           std::size_t window) {
  if (window < 2 || x.empty()) return std::vector<double>(x.begin(), x.end());
  if (window % 2 == 0) ++window;
  const std::size_t n = x.size();
  const std::size_t half = window / 2;

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i >= half ? i - half : 0;
    std::size_t hi = std::min(n - 1, i + half);
    out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
  }
  return out;
}

EnvelopeSeries AmEnvelope(const AudioBuffer& audio, double target_rate_hz,
                          double smooth_s) {
  Require(target_rate_hz >= 25.0, ErrorCode::kInvalidArgument,
          "AM envelope rate must be >= 25 Hz to keep 10 Hz below Nyquist");
  Require(smooth_s >= 0.0, ErrorCode::kInvalidArgument,
          "smoothing window must be non-negative");
  Require(!AllZero(audio.samples), ErrorCode::kDegenerateSignal,
          "AM envelope of an all-zero signal");

  const double fs = audio.sample_rate_hz;
  std::size_t window =
      static_cast<std::size_t>(std::llround(smooth_s * fs)) | 1u;
  Require(audio.samples.size() >= 2 * window, ErrorCode::kTooShort,
          "audio shorter than two smoothing windows");

  auto analytic = fft::AnalyticSignal(audio.samples);
  std::vector<double> magnitude(analytic.size());
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    magnitude[i] = std::abs(analytic[i]);
  }
  std::vector<double> smoothed = ZeroPhaseMovingAverage(magnitude, window);

  const std::size_t n = smoothed.size();
  const auto out_len = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * target_rate_hz / fs + 1e-9));
  Require(out_len >= 1, ErrorCode::kTooShort,
          "audio too short for the requested envelope rate");

  EnvelopeSeries env;
  env.rate_hz = target_rate_hz;
  env.kind = EnvelopeKind::kAm;
  env.values.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    auto src = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * fs / target_rate_hz));
    env.values[i] = smoothed[std::min(src, n - 1)];
  }
  return env;
}

EnvelopeSeries EstimateF0(const AudioBuffer& audio, const F0Config& cfg) {
  const double fs = audio.sample_rate_hz;
  Require(cfg.f0_min_hz > 0.0 && cfg.f0_min_hz < cfg.f0_max_hz &&
              cfg.f0_max_hz < fs / 2.0,
          ErrorCode::kInvalidArgument, "F0 range must satisfy 0 < min < max < rate/2");
  Require(cfg.hop_s > 0.0 && cfg.hop_s <= cfg.frame_s,
          ErrorCode::kInvalidArgument, "hop must be positive and <= frame");
  Require(cfg.voicing_threshold > 0.0 && cfg.voicing_threshold < 1.0,
          ErrorCode::kInvalidArgument, "voicing threshold must be in (0, 1)");

  const auto frame = static_cast<std::size_t>(std::llround(cfg.frame_s * fs));
  const auto hop =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.hop_s * fs)));
  const std::size_t len = audio.samples.size();
  Require(len >= frame && frame >= 2, ErrorCode::kTooShort,
          "audio shorter than one F0 analysis frame");

  const auto lag_min =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(fs / cfg.f0_max_hz)));
  const auto lag_max = static_cast<std::size_t>(std::ceil(fs / cfg.f0_min_hz));
  Require(lag_max > lag_min, ErrorCode::kInvalidArgument,
          "degenerate lag range; widen the F0 search interval");

  const std::size_t n_frames = (len - frame) / hop + 1;
  const std::span<const double> x(audio.samples);

  // Prefix sums give window means and energies in O(1); samples past the
  // end of the signal are treated as zero.
  std::vector<double> sum1(len + 1, 0.0), sum2(len + 1, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    sum1[i + 1] = sum1[i] + x[i];
    sum2[i + 1] = sum2[i] + x[i] * x[i];
  }
  const double w = static_cast<double>(frame);
  auto window_stats = [&](std::size_t start, double* mean, double* energy) {
    std::size_t lo = std::min(start, len);
    std::size_t hi = std::min(start + frame, len);
    double s1 = sum1[hi] - sum1[lo];
    double s2 = sum2[hi] - sum2[lo];
    *mean = s1 / w;
    *energy = std::max(0.0, s2 - w * (*mean) * (*mean));
  };

  std::vector<double> nccf(lag_max + 1, 0.0);
  std::vector<std::vector<F0Candidate>> frames(n_frames);

  for (std::size_t fidx = 0; fidx < n_frames; ++fidx) {
    const std::size_t m = fidx * hop;
    double mean0, e0;
    window_stats(m, &mean0, &e0);

    for (std::size_t k = lag_min; k <= lag_max; ++k) {
      double cross = 0.0;
      const std::size_t j_hi = std::min(m + frame, len > k ? len - k : 0);
      for (std::size_t j = m; j < j_hi; ++j) cross += x[j] * x[j + k];
      double mean_k, e_k;
      window_stats(m + k, &mean_k, &e_k);
      double num = cross - w * mean0 * mean_k;
      nccf[k] = num / std::sqrt(e0 * e_k + 1e-9);
    }

    // Local maxima of the NCCF become voiced candidates.
    std::vector<std::pair<double, std::size_t>> peaks;  // (value, lag)
    for (std::size_t k = lag_min; k <= lag_max; ++k) {
      double v = nccf[k];
      if (v <= 0.0) continue;
      bool left_ok = (k == lag_min) || (nccf[k - 1] < v);
      bool right_ok = (k == lag_max) || (nccf[k + 1] <= v);
      if (left_ok && right_ok) peaks.emplace_back(v, k);
    }
    std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    if (peaks.size() > kMaxCandidates) peaks.resize(kMaxCandidates);

    auto& cands = frames[fidx];
    for (const auto& [value, k] : peaks) {
      double offset = 0.0, refined = value;
      if (k > lag_min && k < lag_max) {
        RefinePeak(nccf[k - 1], nccf[k], nccf[k + 1], &offset, &refined);
      }
      double lag = static_cast<double>(k) + offset;
      double f0 = std::clamp(fs / lag, cfg.f0_min_hz, cfg.f0_max_hz);
      refined = std::min(refined, 1.0);
      F0Candidate c;
      c.f0 = f0;
      c.local_cost = (1.0 - refined) +
                     kLagWeight * lag / static_cast<double>(lag_max);
      cands.push_back(c);
    }
    // The unvoiced state; its cost makes "peak NCCF below the voicing
    // threshold" the break-even point.
    F0Candidate unvoiced;
    unvoiced.f0 = 0.0;
    unvoiced.local_cost = 1.0 - cfg.voicing_threshold;
    cands.push_back(unvoiced);
  }

  // Viterbi over candidate sequences.
  std::vector<std::vector<double>> cost(n_frames);
  std::vector<std::vector<int>> back(n_frames);
  for (std::size_t t = 0; t < n_frames; ++t) {
    const auto& cands = frames[t];
    cost[t].assign(cands.size(), 0.0);
    back[t].assign(cands.size(), -1);
    for (std::size_t s = 0; s < cands.size(); ++s) {
      if (t == 0) {
        cost[t][s] = cands[s].local_cost;
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      int best_prev = -1;
      const auto& prev = frames[t - 1];
      for (std::size_t p = 0; p < prev.size(); ++p) {
        double trans;
        bool prev_voiced = prev[p].f0 > 0.0;
        bool cur_voiced = cands[s].f0 > 0.0;
        if (prev_voiced && cur_voiced) {
          trans = kFreqJumpWeight * std::fabs(std::log(cands[s].f0 / prev[p].f0));
        } else if (prev_voiced != cur_voiced) {
          trans = kVoicingSwitchCost;
        } else {
          trans = 0.0;
        }
        double total = cost[t - 1][p] + trans;
        if (total < best) {
          best = total;
          best_prev = static_cast<int>(p);
        }
      }
      cost[t][s] = best + cands[s].local_cost;
      back[t][s] = best_prev;
    }
  }

  EnvelopeSeries env;
  env.rate_hz = fs / static_cast<double>(hop);
  env.kind = EnvelopeKind::kFm;
  env.values.assign(n_frames, 0.0);

  std::size_t state = 0;
  for (std::size_t s = 1; s < cost[n_frames - 1].size(); ++s) {
    if (cost[n_frames - 1][s] < cost[n_frames - 1][state]) state = s;
  }
  for (std::size_t t = n_frames; t-- > 0;) {
    env.values[t] = frames[t][state].f0;
    if (t > 0) state = static_cast<std::size_t>(back[t][state]);
  }
  return env;
}

std::vector<double> MedianFilterVoicedRuns(std::span<const double> contour,
                                           std::size_t window) {
  std::vector<double> out(contour.begin(), contour.end());
  if (window < 2) return out;
  const std::size_t half = window / 2;

  std::size_t i = 0;
  const std::size_t n = contour.size();
  while (i < n) {
    if (contour[i] == 0.0) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end + 1 < n && contour[run_end + 1] != 0.0) ++run_end;

    for (std::size_t j = i; j <= run_end; ++j) {
      std::size_t lo = std::max(j >= half ? j - half : 0, i);
      std::size_t hi = std::min(j + half, run_end);
      std::vector<double> vals(contour.begin() + lo, contour.begin() + hi + 1);
      std::size_t mid = (vals.size() - 1) / 2;
      std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
      out[j] = vals[mid];
    }
    i = run_end + 1;
  }
  return out;
}

EnvelopeSeries FmEnvelope(const AudioBuffer& audio, const F0Config& cfg) {
  EnvelopeSeries env = EstimateF0(audio, cfg);
  env.values = MedianFilterVoicedRuns(env.values, 5);
  env.kind = EnvelopeKind::kFm;
  return env;
}

}  // namespace rhythmkit
