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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "rhythmkit/error.hpp"
#include "rhythmkit/models.hpp"

namespace rhythmkit {

const char* KernelName(Kernel k) {
  return k == Kernel::kLinear ? "linear" : "rbf";
}

Kernel KernelFromName(const std::string& name) {
  if (name == "linear") return Kernel::kLinear;
  if (name == "rbf") return Kernel::kRbf;
  Raise(ErrorCode::kInvalidArgument, "unknown kernel: " + name);
}

double ResolveGamma(double gamma, std::size_t n_features) {
  Require(n_features > 0, ErrorCode::kInvalidArgument, "no features");
  if (gamma == 0.0) return 1.0 / static_cast<double>(n_features);
  Require(gamma > 0.0, ErrorCode::kInvalidArgument, "gamma must be positive");
  return gamma;
}

double KernelValue(Kernel kernel, double gamma, std::span<const double> a,
                   std::span<const double> b) {
  Require(a.size() == b.size(), ErrorCode::kDimensionMismatch,
          "kernel operands differ in dimension");
  if (kernel == Kernel::kLinear) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

namespace {

constexpr double kTau = 1e-12;
constexpr double kStopTolerance = 1e-4;
constexpr std::size_t kMaxIterations = 2000000;

// Box-constrained dual problem min 1/2 a'Qa + p'a s.t. y'a = 0,
// 0 <= a_i <= C, solved by SMO with maximal-violating-pair selection.
// Covers both the classifier dual and the expanded regression dual.
struct SmoResult {
  std::vector<double> alpha;
  double bias = 0.0;  // decision adds this bias directly
};

SmoResult SolveSmo(const Matrix& q, const std::vector<double>& p,
                   const std::vector<int>& y, double c) {
  const std::size_t n = p.size();
  SmoResult result;
  result.alpha.assign(n, 0.0);
  std::vector<double>& a = result.alpha;
  std::vector<double> grad = p;  // gradient of the objective at alpha = 0

  const auto in_up = [&](std::size_t t) {
    return (y[t] > 0 && a[t] < c) || (y[t] < 0 && a[t] > 0.0);
  };
  const auto in_low = [&](std::size_t t) {
    return (y[t] > 0 && a[t] > 0.0) || (y[t] < 0 && a[t] < c);
  };

  for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
    // Working pair: largest -y*grad among the "up" set against the
    // smallest among the "low" set.
    std::size_t i = n;
    std::size_t j = n;
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -static_cast<double>(y[t]) * grad[t];
      if (in_up(t) && v > m_up) {
        m_up = v;
        i = t;
      }
      if (in_low(t) && v < m_low) {
        m_low = v;
        j = t;
      }
    }
    if (i == n || j == n || m_up - m_low <= kStopTolerance) break;

    const double old_i = a[i];
    const double old_j = a[j];
    if (y[i] != y[j]) {
      double quad = q.at(i, i) + q.at(j, j) + 2.0 * q.at(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0.0) {
        if (a[j] < 0.0) {
          a[j] = 0.0;
          a[i] = diff;
        }
      } else {
        if (a[i] < 0.0) {
          a[i] = 0.0;
          a[j] = -diff;
        }
      }
      if (diff > 0.0) {
        if (a[i] > c) {
          a[i] = c;
          a[j] = c - diff;
        }
      } else {
        if (a[j] > c) {
          a[j] = c;
          a[i] = c + diff;
        }
      }
    } else {
      double quad = q.at(i, i) + q.at(j, j) - 2.0 * q.at(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > c) {
        if (a[i] > c) {
          a[i] = c;
          a[j] = sum - c;
        }
      } else {
        if (a[j] < 0.0) {
          a[j] = 0.0;
          a[i] = sum;
        }
      }
      if (sum > c) {
        if (a[j] > c) {
          a[j] = c;
          a[i] = sum - c;
        }
      } else {
        if (a[i] < 0.0) {
          a[i] = 0.0;
          a[j] = sum;
        }
      }
    }

    const double di = a[i] - old_i;
    const double dj = a[j] - old_j;
    if (di == 0.0 && dj == 0.0) break;  // numerically stuck pair
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += q.at(t, i) * di + q.at(t, j) * dj;
    }
  }

  // Bias from the KKT conditions: free points pin -y*grad exactly, and
  // otherwise the feasible interval's midpoint is used.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double v = -static_cast<double>(y[t]) * grad[t];
    if (a[t] > 0.0 && a[t] < c) {
      free_sum += v;
      ++free_count;
    }
    if (in_up(t)) lb = std::max(lb, v);
    if (in_low(t)) ub = std::min(ub, v);
  }
  result.bias = free_count > 0 ? free_sum / static_cast<double>(free_count)
                               : 0.5 * (ub + lb);
  return result;
}

Matrix KernelMatrix(const Matrix& x, Kernel kernel, double gamma) {
  const std::size_t n = x.rows();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = KernelValue(kernel, gamma, x.row(i), x.row(j));
      k.at(i, j) = v;
      k.at(j, i) = v;
    }
  }
  return k;
}

}  // namespace

SvmModel SvmTrain(const Matrix& x, const std::vector<int>& y, double c,
                  Kernel kernel, double gamma) {
  const std::size_t n = x.rows();
  Require(n >= 2, ErrorCode::kTooFewSamples, "need at least 2 samples");
  Require(y.size() == n, ErrorCode::kLengthMismatch,
          "labels and rows differ in count");
  Require(c > 0.0, ErrorCode::kInvalidArgument, "C must be positive");
  bool has_pos = false;
  bool has_neg = false;
  for (int label : y) {
    Require(label == 1 || label == -1, ErrorCode::kUnknownLabel,
            "labels must be +1 or -1");
    (label == 1 ? has_pos : has_neg) = true;
  }
  Require(has_pos && has_neg, ErrorCode::kSingleClass,
          "training set contains a single class");

  const double g = ResolveGamma(gamma, x.cols());
  const Matrix k = KernelMatrix(x, kernel, g);
  Matrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      q.at(i, j) = static_cast<double>(y[i] * y[j]) * k.at(i, j);
    }
  }
  const std::vector<double> p(n, -1.0);
  const SmoResult solved = SolveSmo(q, p, y, c);

  SvmModel model;
  model.kernel = kernel;
  model.c = c;
  model.gamma = g;
  model.bias = solved.bias;
  std::vector<std::size_t> sv;
  for (std::size_t i = 0; i < n; ++i) {
    if (solved.alpha[i] > 0.0) sv.push_back(i);
  }
  model.support_vectors = Matrix(sv.size(), x.cols());
  model.dual_coefs.reserve(sv.size());
  for (std::size_t s = 0; s < sv.size(); ++s) {
    const std::size_t i = sv[s];
    std::copy(x.row(i).begin(), x.row(i).end(),
              model.support_vectors.row(s).begin());
    model.dual_coefs.push_back(static_cast<double>(y[i]) * solved.alpha[i]);
  }
  if (kernel == Kernel::kLinear) {
    model.weights.assign(x.cols(), 0.0);
    for (std::size_t s = 0; s < sv.size(); ++s) {
      const std::span<const double> row = model.support_vectors.row(s);
      for (std::size_t d = 0; d < x.cols(); ++d) {
        model.weights[d] += model.dual_coefs[s] * row[d];
      }
    }
  }
  return model;
}

double SvmDecision(const SvmModel& model, std::span<const double> row) {
  if (model.kernel == Kernel::kLinear && !model.weights.empty()) {
    Require(row.size() == model.weights.size(), ErrorCode::kDimensionMismatch,
            "feature dimension mismatch");
    double acc = model.bias;
    for (std::size_t d = 0; d < row.size(); ++d) {
      acc += model.weights[d] * row[d];
    }
    return acc;
  }
  Require(model.support_vectors.cols() == row.size(),
          ErrorCode::kDimensionMismatch, "feature dimension mismatch");
  double acc = model.bias;
  for (std::size_t s = 0; s < model.support_vectors.rows(); ++s) {
    acc += model.dual_coefs[s] * KernelValue(model.kernel, model.gamma,
                                             model.support_vectors.row(s),
                                             row);
  }
  return acc;
}

int SvmPredictLabel(const SvmModel& model, std::span<const double> row) {
  return SvmDecision(model, row) < 0.0 ? -1 : 1;
}

SvrModel SvrTrain(const Matrix& x, const std::vector<double>& y, double c,
                  double epsilon, Kernel kernel, double gamma) {
  const std::size_t n = x.rows();
  Require(n >= 2, ErrorCode::kTooFewSamples, "need at least 2 samples");
  Require(y.size() == n, ErrorCode::kLengthMismatch,
          "targets and rows differ in count");
  Require(c > 0.0, ErrorCode::kInvalidArgument, "C must be positive");
  Require(epsilon >= 0.0, ErrorCode::kInvalidArgument,
          "epsilon must be non-negative");

  const double g = ResolveGamma(gamma, x.cols());
  const Matrix k = KernelMatrix(x, kernel, g);

  // Expanded variables [alpha; alpha*]: Q = [[K,-K],[-K,K]],
  // p = [eps - y; eps + y], signs [+1; -1].
  const std::size_t m = 2 * n;
  Matrix q(m, m);
  std::vector<double> p(m);
  std::vector<int> signs(m);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = epsilon - y[i];
    p[n + i] = epsilon + y[i];
    signs[i] = 1;
    signs[n + i] = -1;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = k.at(i, j);
      q.at(i, j) = v;
      q.at(n + i, n + j) = v;
      q.at(i, n + j) = -v;
      q.at(n + i, j) = -v;
    }
  }
  const SmoResult solved = SolveSmo(q, p, signs, c);

  // Complementarity cleanup: alpha_i * alpha*_i = 0 per sample; the
  // difference beta is unchanged by subtracting the common part.
  std::vector<double> beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double shared = std::min(solved.alpha[i], solved.alpha[n + i]);
    beta[i] = (solved.alpha[i] - shared) - (solved.alpha[n + i] - shared);
  }

  SvrModel model;
  model.kernel = kernel;
  model.c = c;
  model.gamma = g;
  model.epsilon = epsilon;
  model.bias = solved.bias;
  std::vector<std::size_t> sv;
  for (std::size_t i = 0; i < n; ++i) {
    if (beta[i] != 0.0) sv.push_back(i);
  }
  model.support_vectors = Matrix(sv.size(), x.cols());
  model.dual_coefs.reserve(sv.size());
  for (std::size_t s = 0; s < sv.size(); ++s) {
    const std::size_t i = sv[s];
    std::copy(x.row(i).begin(), x.row(i).end(),
              model.support_vectors.row(s).begin());
    model.dual_coefs.push_back(beta[i]);
  }
  if (kernel == Kernel::kLinear) {
    model.weights.assign(x.cols(), 0.0);
    for (std::size_t s = 0; s < sv.size(); ++s) {
      const std::span<const double> row = model.support_vectors.row(s);
      for (std::size_t d = 0; d < x.cols(); ++d) {
        model.weights[d] += model.dual_coefs[s] * row[d];
      }
    }
  }
  return model;
}

double SvrPredict(const SvrModel& model, std::span<const double> row) {
  if (model.kernel == Kernel::kLinear && !model.weights.empty()) {
    Require(row.size() == model.weights.size(), ErrorCode::kDimensionMismatch,
            "feature dimension mismatch");
    double acc = model.bias;
    for (std::size_t d = 0; d < row.size(); ++d) {
      acc += model.weights[d] * row[d];
    }
    return acc;
  }
  Require(model.support_vectors.cols() == row.size(),
          ErrorCode::kDimensionMismatch, "feature dimension mismatch");
  double acc = model.bias;
  for (std::size_t s = 0; s < model.support_vectors.rows(); ++s) {
    acc += model.dual_coefs[s] * KernelValue(model.kernel, model.gamma,
                                             model.support_vectors.row(s),
                                             row);
  }
  return acc;
}

}  // namespace rhythmkit
