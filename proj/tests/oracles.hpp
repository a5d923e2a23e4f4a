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
//
// Slow reference implementations used only by tests. Each oracle computes
// the same quantity as a production routine via a different algorithm, so
// agreement is evidence of correctness rather than a tautology.

#ifndef RHYTHMKIT_TESTS_ORACLES_HPP_
#define RHYTHMKIT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "rhythmkit/matrix.hpp"

namespace oracles {

// O(n^2) discrete Fourier transform, one-sided bins 0..n_fft/2.
inline std::vector<std::complex<double>> DirectDft(std::span<const double> x,
                                                   std::size_t n_fft) {
  std::vector<std::complex<double>> out(n_fft / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t n = 0; n < n_fft; ++n) {
      const double sample = n < x.size() ? x[n] : 0.0;
      const double angle = -2.0 * std::numbers::pi *
                           static_cast<double>(k) * static_cast<double>(n) /
                           static_cast<double>(n_fft);
      acc += sample * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

// Population variance by the textbook two-pass formula.
inline double TwoPassVariance(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double acc = 0.0;
  for (double v : x) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(x.size());
}

// Orthonormal 2D DCT-II by the direct O(M^2 K^2) formula.
inline rhythmkit::Matrix DirectDct2(const rhythmkit::Matrix& x) {
  const std::size_t m_rows = x.rows();
  const std::size_t k_cols = x.cols();
  rhythmkit::Matrix y(m_rows, k_cols);
  const double pi = std::numbers::pi;
  for (std::size_t k = 0; k < m_rows; ++k) {
    const double sr = k == 0 ? std::sqrt(1.0 / static_cast<double>(m_rows))
                             : std::sqrt(2.0 / static_cast<double>(m_rows));
    for (std::size_t l = 0; l < k_cols; ++l) {
      const double sc = l == 0 ? std::sqrt(1.0 / static_cast<double>(k_cols))
                               : std::sqrt(2.0 / static_cast<double>(k_cols));
      double acc = 0.0;
      for (std::size_t m = 0; m < m_rows; ++m) {
        const double cm = std::cos(pi * static_cast<double>(k) *
                                   (2.0 * static_cast<double>(m) + 1.0) /
                                   (2.0 * static_cast<double>(m_rows)));
        for (std::size_t n = 0; n < k_cols; ++n) {
          const double cn = std::cos(pi * static_cast<double>(l) *
                                     (2.0 * static_cast<double>(n) + 1.0) /
                                     (2.0 * static_cast<double>(k_cols)));
          acc += x.at(m, n) * cm * cn;
        }
      }
      y.at(k, l) = sr * sc * acc;
    }
  }
  return y;
}

// Solves min 0.5 a^T Q a + p^T a  s.t.  sum_i signs_i a_i = 0, 0 <= a <= c
// by projected gradient descent. Projection onto the box-hyperplane
// intersection is a bisection on the hyperplane multiplier; the projected
// coordinate is clip(v_i - lambda * signs_i, 0, c), which makes
// sum_i signs_i a_i(lambda) monotone nonincreasing in lambda.
inline std::vector<double> ProjectedGradientBoxDual(
    const rhythmkit::Matrix& q, const std::vector<double>& p,
    const std::vector<double>& signs, double c, int iterations = 100000) {
  const std::size_t n = p.size();
  auto project = [&](const std::vector<double>& v) {
    auto point = [&](double lambda) {
      std::vector<double> a(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = std::clamp(v[i] - lambda * signs[i], 0.0, c);
      }
      return a;
    };
    auto residual = [&](double lambda) {
      const std::vector<double> a = point(lambda);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += signs[i] * a[i];
      return s;
    };
    double vmax = 0.0;
    for (double vi : v) vmax = std::max(vmax, std::abs(vi));
    double lo = -(vmax + c + 1.0);
    double hi = vmax + c + 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (residual(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return point(0.5 * (lo + hi));
  };

  // Fixed step 1/L with L an upper bound on the largest eigenvalue of Q.
  double l_bound = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) row_sum += std::abs(q.at(i, j));
    l_bound = std::max(l_bound, row_sum);
  }
  const double step = 1.0 / l_bound;

  std::vector<double> a = project(std::vector<double>(n, 0.0));
  std::vector<double> v(n);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double grad = p[i];
      for (std::size_t j = 0; j < n; ++j) grad += q.at(i, j) * a[j];
      v[i] = a[i] - step * grad;
    }
    a = project(v);
  }
  return a;
}

inline double OracleKernel(bool rbf, double gamma, std::span<const double> a,
                           std::span<const double> b) {
  if (rbf) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      d2 += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::exp(-gamma * d2);
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return dot;
}

// Reference soft-margin SVM classifier trained via the projected-gradient
// dual above; exposes the decision function for sign comparisons.
struct OracleSvc {
  rhythmkit::Matrix x;
  std::vector<int> y;
  std::vector<double> alpha;
  bool rbf = false;
  double gamma = 0.0;
  double bias = 0.0;

  double Decision(std::span<const double> row) const {
    double acc = bias;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0.0) continue;
      acc += alpha[i] * y[i] * OracleKernel(rbf, gamma, x.row(i), row);
    }
    return acc;
  }
};

inline OracleSvc TrainOracleSvc(const rhythmkit::Matrix& x,
                                const std::vector<int>& y, double c, bool rbf,
                                double gamma, int iterations = 100000) {
  const std::size_t n = x.rows();
  rhythmkit::Matrix q(n, n);
  std::vector<double> kmat(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      kmat[i * n + j] = OracleKernel(rbf, gamma, x.row(i), x.row(j));
      q.at(i, j) = y[i] * y[j] * kmat[i * n + j];
    }
  }
  const std::vector<double> p(n, -1.0);
  std::vector<double> signs(n);
  for (std::size_t i = 0; i < n; ++i) signs[i] = static_cast<double>(y[i]);
  OracleSvc model;
  model.x = x;
  model.y = y;
  model.rbf = rbf;
  model.gamma = gamma;
  model.alpha = ProjectedGradientBoxDual(q, p, signs, c, iterations);

  // KKT: free support vectors satisfy y_i * f(x_i) = 1 exactly.
  double bias_sum = 0.0;
  std::size_t bias_n = 0;
  const double slack = 1e-6 * c;
  for (std::size_t i = 0; i < n; ++i) {
    if (model.alpha[i] <= slack || model.alpha[i] >= c - slack) continue;
    double margin = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      margin += model.alpha[j] * y[j] * kmat[j * n + i];
    }
    bias_sum += y[i] - margin;
    ++bias_n;
  }
  if (bias_n > 0) {
    model.bias = bias_sum / static_cast<double>(bias_n);
  } else {
    // All multipliers at bounds: KKT gives one-sided inequalities per
    // sample; any bias inside the feasible band works, take its middle.
    double lo = -1e300;
    double hi = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
      double margin = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        margin += model.alpha[j] * y[j] * kmat[j * n + i];
      }
      const bool at_zero = model.alpha[i] <= slack;
      const double bound = y[i] - margin;
      if ((at_zero && y[i] > 0) || (!at_zero && y[i] < 0)) {
        lo = std::max(lo, bound);
      } else {
        hi = std::min(hi, bound);
      }
    }
    model.bias = 0.5 * (lo + hi);
  }
  return model;
}

}  // namespace oracles

#endif  // RHYTHMKIT_TESTS_ORACLES_HPP_
