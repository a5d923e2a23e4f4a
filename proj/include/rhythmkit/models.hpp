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

#ifndef RHYTHMKIT_MODELS_HPP_
#define RHYTHMKIT_MODELS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rhythmkit/matrix.hpp"

namespace rhythmkit {

// Per-feature z-standardization. Features with zero spread keep std 1 so
// the transform is well defined everywhere.
struct Scaler {
  std::vector<double> means;
  std::vector<double> stds;
};

Scaler FitScaler(const Matrix& x);
Matrix ApplyScaler(const Scaler& scaler, const Matrix& x);
std::vector<double> ApplyScaler(const Scaler& scaler,
                                std::span<const double> row);

enum class Kernel { kLinear, kRbf };
const char* KernelName(Kernel k);
Kernel KernelFromName(const std::string& name);

// gamma == 0 is the "auto" sentinel, resolved to 1/n_features at fit time.
double ResolveGamma(double gamma, std::size_t n_features);

double KernelValue(Kernel kernel, double gamma, std::span<const double> a,
                   std::span<const double> b);

struct SvmModel {
  Kernel kernel = Kernel::kLinear;
  double c = 1.0;
  double gamma = 0.0;  // resolved value
  Matrix support_vectors;          // n_sv x d
  std::vector<double> dual_coefs;  // y_i * alpha_i per support vector
  double bias = 0.0;
  std::vector<double> weights;     // primal, linear kernel only
};

// SMO with maximal-violating-pair working-set selection; stops when the
// KKT gap falls below 1e-4.
SvmModel SvmTrain(const Matrix& x, const std::vector<int>& y, double c,
                  Kernel kernel, double gamma);

double SvmDecision(const SvmModel& model, std::span<const double> row);
// Label is the sign of the decision value; an exact zero maps to +1.
int SvmPredictLabel(const SvmModel& model, std::span<const double> row);

struct SvrModel {
  Kernel kernel = Kernel::kLinear;
  double c = 1.0;
  double gamma = 0.0;
  double epsilon = 0.1;
  Matrix support_vectors;
  std::vector<double> dual_coefs;  // beta_i = alpha_i - alpha*_i
  double bias = 0.0;
  std::vector<double> weights;     // primal, linear kernel only
};

SvrModel SvrTrain(const Matrix& x, const std::vector<double>& y, double c,
                  double epsilon, Kernel kernel, double gamma);
double SvrPredict(const SvrModel& model, std::span<const double> row);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  double value = 0.0;  // leaf prediction (mean of training targets)
  int left = -1;
  int right = -1;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // root at index 0
  int max_depth = 0;
  int min_samples_leaf = 1;
  std::size_t n_features = 0;
};

// CART regression: greedy best sum-of-squared-error split over all
// (feature, midpoint-threshold) pairs; ties prefer the lowest feature
// index, then the lowest threshold. Samples with x <= threshold go left.
TreeModel DtTrain(const Matrix& x, const std::vector<double>& y, int max_depth,
                  int min_samples_leaf);
double DtPredict(const TreeModel& model, std::span<const double> row);

// Fold combination. Linear SVM/SVR fold models collapse to the mean of
// their primal weights and biases; rbf models and trees keep all members
// and average decision scores at prediction time.
enum class AveragingMode { kPrimalMean, kScoreEnsemble };
const char* AveragingModeName(AveragingMode m);

struct AveragedSvm {
  AveragingMode mode = AveragingMode::kScoreEnsemble;
  std::vector<SvmModel> members;   // score ensemble
  std::vector<double> weights;     // primal mean
  double bias = 0.0;
  Kernel kernel = Kernel::kLinear;
};

struct AveragedSvr {
  AveragingMode mode = AveragingMode::kScoreEnsemble;
  std::vector<SvrModel> members;
  std::vector<double> weights;
  double bias = 0.0;
  Kernel kernel = Kernel::kLinear;
};

struct AveragedTree {
  std::vector<TreeModel> members;
};

AveragedSvm AverageFoldModels(const std::vector<SvmModel>& models);
AveragedSvr AverageFoldModels(const std::vector<SvrModel>& models);
AveragedTree AverageFoldModels(const std::vector<TreeModel>& models);

double Decision(const AveragedSvm& model, std::span<const double> row);
int PredictLabel(const AveragedSvm& model, std::span<const double> row);
double Predict(const AveragedSvr& model, std::span<const double> row);
double Predict(const AveragedTree& model, std::span<const double> row);

// Metrics. Positive class is +1; F1 is the positive-class score.
struct ClassificationMetrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

ClassificationMetrics ComputeClassificationMetrics(
    const std::vector<int>& y_true, const std::vector<int>& y_pred);

struct RegressionMetrics {
  double rmse = 0.0;
  std::optional<double> pearson_rho;  // absent when not computable
};

double Rmse(const std::vector<double>& y_true,
            const std::vector<double>& y_pred);
// Sample Pearson correlation; needs >= 3 points and nonzero spread on
// both sides, otherwise raises ZeroVariance / TooFewSamples.
double PearsonRho(const std::vector<double>& y_true,
                  const std::vector<double>& y_pred);

struct FoldMetrics {
  std::size_t n = 0;
  double accuracy = 0.0;
  double f1 = 0.0;
  double rmse = 0.0;
  std::optional<double> pearson_rho;
};

struct EvalReport {
  std::string task;  // "clf" | "reg"
  std::vector<FoldMetrics> per_fold;
  FoldMetrics pooled;  // all held-out predictions concatenated
};

// Hyperparameter grids. Enumeration order defines tie-breaking: the
// first configuration with the best mean validation metric wins, so
// linear precedes rbf, C ascends, and epsilon descends (larger first).
struct SvmGrid {
  std::vector<double> c_values = {0.1, 1.0, 10.0, 100.0};
  std::vector<double> gamma_values = {0.0, 0.01, 0.1};  // 0 = 1/D
  std::vector<Kernel> kernels = {Kernel::kLinear, Kernel::kRbf};
  std::vector<double> epsilon_values = {1.0, 0.1};  // SVR only
};

struct TreeGrid {
  std::vector<int> max_depths = {2, 3, 4, 5, 6, 7, 8};
  std::vector<int> min_samples_leaf = {1, 3, 5};
};

struct HyperConfig {
  Kernel kernel = Kernel::kLinear;
  double c = 1.0;
  double gamma = 0.0;  // grid value; 0 = auto
  double epsilon = 0.1;
  int max_depth = 0;
  int min_samples_leaf = 1;
};

struct ModelArtifact {
  std::string schema = "rhythm-model/1";
  std::string task;        // "clf" | "reg"
  std::string model_type;  // "svm" | "svr" | "dt"
  int n_formants = 0;
  int dct_order = 0;
  std::size_t n_features = 0;
  int k_folds = 0;
  std::uint64_t seed = 0;
  HyperConfig chosen;
  Scaler scaler;  // fitted on the full training set for the final refit
  AveragingMode averaging = AveragingMode::kScoreEnsemble;
  std::vector<SvmModel> svm_members;
  std::vector<SvrModel> svr_members;
  std::vector<TreeModel> tree_members;
  std::vector<double> mean_weights;  // primal mean path
  double mean_bias = 0.0;
  std::string provenance_json;  // effective run config + input hash
};

// Applies the artifact's scaler and averaged model to one raw feature row.
double ArtifactScore(const ModelArtifact& artifact,
                     std::span<const double> row);
int ArtifactPredictLabel(const ModelArtifact& artifact,
                         std::span<const double> row);

std::string SerializeArtifact(const ModelArtifact& artifact);
ModelArtifact DeserializeArtifact(const std::string& json_text);
void WriteArtifact(const std::string& path, const ModelArtifact& artifact);
ModelArtifact LoadArtifact(const std::string& path);

struct TrainOptions {
  std::string task;        // "clf" | "reg"
  std::string model_type;  // "svm" | "svr" | "dt"
  int k = 5;
  std::uint64_t seed = 42;
  int n_formants = 0;  // layout provenance, recorded in the artifact
  int dct_order = 0;
};

struct TrainResult {
  ModelArtifact artifact;
  EvalReport report;
};

// Grid-search k-fold cross-validation. fold_of_sample[i] in [0, k) gives
// the held-out fold of sample i. For each grid point every fold fits a
// scaler and model on its train part and scores the held-out part; the
// best mean metric (accuracy up, RMSE down) picks the configuration,
// ties going to the earliest grid point. The final artifact standardizes
// with a full-data scaler, refits the chosen configuration once per fold
// in that common space, and averages the fold models.
TrainResult TrainWithCv(const Matrix& x, const std::vector<double>& targets,
                        const std::vector<int>& fold_of_sample,
                        const TrainOptions& options);

std::string SerializeReport(const EvalReport& report);
std::string FormatReportTable(const EvalReport& report);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_MODELS_HPP_
