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
#include <numeric>
#include <vector>

#include "rhythmkit/error.hpp"
#include "rhythmkit/models.hpp"

namespace rhythmkit {

namespace {

constexpr double kMinGain = 1e-12;

struct Split {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

double SumSquaredError(const std::vector<double>& y,
                       const std::vector<std::size_t>& idx) {
  double sum = 0.0;
  for (std::size_t i : idx) sum += y[i];
  const double mean = sum / static_cast<double>(idx.size());
  double sse = 0.0;
  for (std::size_t i : idx) {
    const double d = y[i] - mean;
    sse += d * d;
  }
  return sse;
}

// Best SSE-reducing (feature, midpoint) split; enumeration over features
// ascending and thresholds ascending with a strict improvement test makes
// ties resolve to the lowest feature, then the lowest threshold.
Split FindBestSplit(const Matrix& x, const std::vector<double>& y,
                    const std::vector<std::size_t>& idx,
                    int min_samples_leaf) {
  Split best;
  const std::size_t n = idx.size();
  const double parent_sse = SumSquaredError(y, idx);
  const std::size_t min_leaf = static_cast<std::size_t>(min_samples_leaf);

  std::vector<std::size_t> order(n);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return x.at(idx[a], f) < x.at(idx[b], f);
                     });
    // Prefix sums over the sorted order give each candidate's left SSE.
    std::vector<double> prefix_y(n + 1, 0.0);
    std::vector<double> prefix_y2(n + 1, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const double v = y[idx[order[r]]];
      prefix_y[r + 1] = prefix_y[r] + v;
      prefix_y2[r + 1] = prefix_y2[r] + v * v;
    }
    const double total_y = prefix_y[n];
    const double total_y2 = prefix_y2[n];

    for (std::size_t r = 1; r < n; ++r) {
      const double lo = x.at(idx[order[r - 1]], f);
      const double hi = x.at(idx[order[r]], f);
      if (lo == hi) continue;
      const double threshold = 0.5 * (lo + hi);
      // Midpoints can round onto a sample value; such a split would not
      // separate the sorted prefix cleanly, so skip it.
      if (threshold <= lo || threshold >= hi) continue;
      const std::size_t n_left = r;
      const std::size_t n_right = n - r;
      if (n_left < min_leaf || n_right < min_leaf) continue;
      const double left_y = prefix_y[r];
      const double left_y2 = prefix_y2[r];
      const double right_y = total_y - left_y;
      const double right_y2 = total_y2 - left_y2;
      const double sse_left =
          left_y2 - left_y * left_y / static_cast<double>(n_left);
      const double sse_right =
          right_y2 - right_y * right_y / static_cast<double>(n_right);
      const double gain = parent_sse - sse_left - sse_right;
      if (gain > best.gain + kMinGain ||
          (!best.found && gain > kMinGain)) {
        best.found = true;
        best.feature = f;
        best.threshold = threshold;
        best.gain = gain;
      }
    }
  }
  return best;
}

int BuildNode(const Matrix& x, const std::vector<double>& y,
              const std::vector<std::size_t>& idx, int depth, int max_depth,
              int min_samples_leaf, std::vector<TreeNode>* nodes) {
  const int node_id = static_cast<int>(nodes->size());
  nodes->push_back(TreeNode{});
  double mean = 0.0;
  for (std::size_t i : idx) mean += y[i];
  mean /= static_cast<double>(idx.size());
  (*nodes)[static_cast<std::size_t>(node_id)].value = mean;

  if (depth >= max_depth ||
      idx.size() < 2 * static_cast<std::size_t>(min_samples_leaf)) {
    return node_id;
  }
  const Split split = FindBestSplit(x, y, idx, min_samples_leaf);
  if (!split.found) return node_id;

  std::vector<std::size_t> left_idx;
  std::vector<std::size_t> right_idx;
  for (std::size_t i : idx) {
    (x.at(i, split.feature) <= split.threshold ? left_idx : right_idx)
        .push_back(i);
  }
  const int left = BuildNode(x, y, left_idx, depth + 1, max_depth,
                             min_samples_leaf, nodes);
  const int right = BuildNode(x, y, right_idx, depth + 1, max_depth,
                              min_samples_leaf, nodes);
  TreeNode& node = (*nodes)[static_cast<std::size_t>(node_id)];
  node.feature = static_cast<int>(split.feature);
  node.threshold = split.threshold;
  node.left = left;
  node.right = right;
  return node_id;
}

}  // namespace

TreeModel DtTrain(const Matrix& x, const std::vector<double>& y, int max_depth,
                  int min_samples_leaf) {
  Require(x.rows() >= 1, ErrorCode::kTooFewSamples, "need at least 1 sample");
  Require(y.size() == x.rows(), ErrorCode::kLengthMismatch,
          "targets and rows differ in count");
  Require(max_depth >= 0, ErrorCode::kInvalidArgument,
          "max_depth must be >= 0");
  Require(min_samples_leaf >= 1, ErrorCode::kInvalidArgument,
          "min_samples_leaf must be >= 1");

  TreeModel model;
  model.max_depth = max_depth;
  model.min_samples_leaf = min_samples_leaf;
  model.n_features = x.cols();
  std::vector<std::size_t> idx(x.rows());
  std::iota(idx.begin(), idx.end(), 0);
  BuildNode(x, y, idx, 0, max_depth, min_samples_leaf, &model.nodes);
  return model;
}

double DtPredict(const TreeModel& model, std::span<const double> row) {
  Require(row.size() == model.n_features, ErrorCode::kDimensionMismatch,
          "feature dimension mismatch");
  std::size_t at = 0;
  while (true) {
    const TreeNode& node = model.nodes[at];
    if (node.feature < 0) return node.value;
    at = static_cast<std::size_t>(
        row[static_cast<std::size_t>(node.feature)] <= node.threshold
            ? node.left
            : node.right);
  }
}

}  // namespace rhythmkit
