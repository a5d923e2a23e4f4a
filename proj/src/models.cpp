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

#include "rhythmkit/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "rhythmkit/error.hpp"

namespace rhythmkit {

using nlohmann::json;

Scaler FitScaler(const Matrix& x) {
  Require(x.rows() > 0 && x.cols() > 0, ErrorCode::kTooFewSamples,
          "cannot fit a scaler on an empty matrix");
  Scaler s;
  s.means.assign(x.cols(), 0.0);
  s.stds.assign(x.cols(), 1.0);
  const double n = static_cast<double>(x.rows());
  for (std::size_t d = 0; d < x.cols(); ++d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) mean += x.at(i, d);
    mean /= n;
    double acc = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double diff = x.at(i, d) - mean;
      acc += diff * diff;
    }
    const double std = std::sqrt(acc / n);
    s.means[d] = mean;
    s.stds[d] = std > 0.0 ? std : 1.0;
  }
  return s;
}

std::vector<double> ApplyScaler(const Scaler& scaler,
                                std::span<const double> row) {
  Require(row.size() == scaler.means.size(), ErrorCode::kDimensionMismatch,
          "scaler dimension mismatch");
  std::vector<double> out(row.size());
  for (std::size_t d = 0; d < row.size(); ++d) {
    out[d] = (row[d] - scaler.means[d]) / scaler.stds[d];
  }
  return out;
}

Matrix ApplyScaler(const Scaler& scaler, const Matrix& x) {
  Require(x.cols() == scaler.means.size(), ErrorCode::kDimensionMismatch,
          "scaler dimension mismatch");
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t d = 0; d < x.cols(); ++d) {
      out.at(i, d) = (x.at(i, d) - scaler.means[d]) / scaler.stds[d];
    }
  }
  return out;
}

const char* AveragingModeName(AveragingMode m) {
  return m == AveragingMode::kPrimalMean ? "primal_mean" : "score_ensemble";
}

namespace {

AveragingMode AveragingModeFromName(const std::string& name) {
  if (name == "primal_mean") return AveragingMode::kPrimalMean;
  if (name == "score_ensemble") return AveragingMode::kScoreEnsemble;
  Raise(ErrorCode::kInvalidArgument, "unknown averaging mode: " + name);
}

template <typename Model>
void RequireHomogeneous(const std::vector<Model>& models) {
  Require(!models.empty(), ErrorCode::kTooFewSamples,
          "no fold models to average");
  const Model& first = models.front();
  for (const Model& m : models) {
    Require(m.kernel == first.kernel && m.c == first.c &&
                m.gamma == first.gamma &&
                m.support_vectors.cols() == first.support_vectors.cols(),
            ErrorCode::kHeterogeneousModels,
            "fold models differ in kernel or hyperparameters");
  }
}

}  // namespace

AveragedSvm AverageFoldModels(const std::vector<SvmModel>& models) {
  RequireHomogeneous(models);
  AveragedSvm avg;
  avg.kernel = models.front().kernel;
  if (avg.kernel == Kernel::kLinear) {
    avg.mode = AveragingMode::kPrimalMean;
    avg.weights.assign(models.front().weights.size(), 0.0);
    for (const SvmModel& m : models) {
      Require(m.weights.size() == avg.weights.size(),
              ErrorCode::kHeterogeneousModels,
              "fold models differ in dimension");
      for (std::size_t d = 0; d < avg.weights.size(); ++d) {
        avg.weights[d] += m.weights[d];
      }
      avg.bias += m.bias;
    }
    const double k = static_cast<double>(models.size());
    for (double& w : avg.weights) w /= k;
    avg.bias /= k;
  } else {
    avg.mode = AveragingMode::kScoreEnsemble;
    avg.members = models;
  }
  return avg;
}

AveragedSvr AverageFoldModels(const std::vector<SvrModel>& models) {
  RequireHomogeneous(models);
  for (const SvrModel& m : models) {
    Require(m.epsilon == models.front().epsilon,
            ErrorCode::kHeterogeneousModels,
            "fold models differ in epsilon");
  }
  AveragedSvr avg;
  avg.kernel = models.front().kernel;
  if (avg.kernel == Kernel::kLinear) {
    avg.mode = AveragingMode::kPrimalMean;
    avg.weights.assign(models.front().weights.size(), 0.0);
    for (const SvrModel& m : models) {
      Require(m.weights.size() == avg.weights.size(),
              ErrorCode::kHeterogeneousModels,
              "fold models differ in dimension");
      for (std::size_t d = 0; d < avg.weights.size(); ++d) {
        avg.weights[d] += m.weights[d];
      }
      avg.bias += m.bias;
    }
    const double k = static_cast<double>(models.size());
    for (double& w : avg.weights) w /= k;
    avg.bias /= k;
  } else {
    avg.mode = AveragingMode::kScoreEnsemble;
    avg.members = models;
  }
  return avg;
}

AveragedTree AverageFoldModels(const std::vector<TreeModel>& models) {
  Require(!models.empty(), ErrorCode::kTooFewSamples,
          "no fold models to average");
  const TreeModel& first = models.front();
  for (const TreeModel& m : models) {
    Require(m.max_depth == first.max_depth &&
                m.min_samples_leaf == first.min_samples_leaf &&
                m.n_features == first.n_features,
            ErrorCode::kHeterogeneousModels,
            "fold trees differ in hyperparameters");
  }
  return AveragedTree{models};
}

double Decision(const AveragedSvm& model, std::span<const double> row) {
  if (model.mode == AveragingMode::kPrimalMean) {
    Require(row.size() == model.weights.size(), ErrorCode::kDimensionMismatch,
            "feature dimension mismatch");
    double acc = model.bias;
    for (std::size_t d = 0; d < row.size(); ++d) {
      acc += model.weights[d] * row[d];
    }
    return acc;
  }
  double acc = 0.0;
  for (const SvmModel& m : model.members) acc += SvmDecision(m, row);
  return acc / static_cast<double>(model.members.size());
}

int PredictLabel(const AveragedSvm& model, std::span<const double> row) {
  return Decision(model, row) < 0.0 ? -1 : 1;
}

double Predict(const AveragedSvr& model, std::span<const double> row) {
  if (model.mode == AveragingMode::kPrimalMean) {
    Require(row.size() == model.weights.size(), ErrorCode::kDimensionMismatch,
            "feature dimension mismatch");
    double acc = model.bias;
    for (std::size_t d = 0; d < row.size(); ++d) {
      acc += model.weights[d] * row[d];
    }
    return acc;
  }
  double acc = 0.0;
  for (const SvrModel& m : model.members) acc += SvrPredict(m, row);
  return acc / static_cast<double>(model.members.size());
}

double Predict(const AveragedTree& model, std::span<const double> row) {
  Require(!model.members.empty(), ErrorCode::kTooFewSamples,
          "empty tree ensemble");
  double acc = 0.0;
  for (const TreeModel& m : model.members) acc += DtPredict(m, row);
  return acc / static_cast<double>(model.members.size());
}

ClassificationMetrics ComputeClassificationMetrics(
    const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  Require(y_true.size() == y_pred.size(), ErrorCode::kLengthMismatch,
          "prediction and truth differ in length");
  Require(y_true.size() >= 2, ErrorCode::kTooFewSamples,
          "metrics need at least 2 samples");
  ClassificationMetrics m;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool truth = y_true[i] > 0;
    const bool pred = y_pred[i] > 0;
    if (truth && pred) ++m.tp;
    if (!truth && pred) ++m.fp;
    if (truth && !pred) ++m.fn;
    if (!truth && !pred) ++m.tn;
  }
  m.accuracy = static_cast<double>(m.tp + m.tn) /
               static_cast<double>(y_true.size());
  const double denom = static_cast<double>(2 * m.tp + m.fp + m.fn);
  // No positives anywhere makes F1 undefined; report 0 by convention.
  m.f1 = denom > 0.0 ? 2.0 * static_cast<double>(m.tp) / denom : 0.0;
  return m;
}

double Rmse(const std::vector<double>& y_true,
            const std::vector<double>& y_pred) {
  Require(y_true.size() == y_pred.size(), ErrorCode::kLengthMismatch,
          "prediction and truth differ in length");
  Require(y_true.size() >= 2, ErrorCode::kTooFewSamples,
          "metrics need at least 2 samples");
  double acc = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double d = y_true[i] - y_pred[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(y_true.size()));
}

double PearsonRho(const std::vector<double>& y_true,
                  const std::vector<double>& y_pred) {
  Require(y_true.size() == y_pred.size(), ErrorCode::kLengthMismatch,
          "prediction and truth differ in length");
  const std::size_t n = y_true.size();
  Require(n >= 3, ErrorCode::kTooFewSamples,
          "correlation needs at least 3 samples");
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += y_true[i];
    mean_b += y_pred[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double saa = 0.0;
  double sbb = 0.0;
  double sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = y_true[i] - mean_a;
    const double db = y_pred[i] - mean_b;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  Require(saa > 0.0 && sbb > 0.0, ErrorCode::kZeroVariance,
          "correlation undefined for a constant series");
  return sab / std::sqrt(saa * sbb);
}

namespace {

json ScalerToJson(const Scaler& s) {
  return json{{"means", s.means}, {"stds", s.stds}};
}

Scaler ScalerFromJson(const json& j) {
  Scaler s;
  s.means = j.at("means").get<std::vector<double>>();
  s.stds = j.at("stds").get<std::vector<double>>();
  return s;
}

json MatrixToJson(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix MatrixFromJson(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const std::vector<double> data = j.at("data").get<std::vector<double>>();
  Require(data.size() == m.rows() * m.cols(), ErrorCode::kMalformedRow,
          "matrix payload size mismatch");
  std::copy(data.begin(), data.end(), m.data().begin());
  return m;
}

json SvmToJson(const SvmModel& m) {
  return json{{"kernel", KernelName(m.kernel)},
              {"c", m.c},
              {"gamma", m.gamma},
              {"bias", m.bias},
              {"dual_coefs", m.dual_coefs},
              {"support_vectors", MatrixToJson(m.support_vectors)},
              {"weights", m.weights}};
}

SvmModel SvmFromJson(const json& j) {
  SvmModel m;
  m.kernel = KernelFromName(j.at("kernel").get<std::string>());
  m.c = j.at("c").get<double>();
  m.gamma = j.at("gamma").get<double>();
  m.bias = j.at("bias").get<double>();
  m.dual_coefs = j.at("dual_coefs").get<std::vector<double>>();
  m.support_vectors = MatrixFromJson(j.at("support_vectors"));
  m.weights = j.at("weights").get<std::vector<double>>();
  return m;
}

json SvrToJson(const SvrModel& m) {
  json j = SvmToJson(SvmModel{m.kernel, m.c, m.gamma, m.support_vectors,
                              m.dual_coefs, m.bias, m.weights});
  j["epsilon"] = m.epsilon;
  return j;
}

SvrModel SvrFromJson(const json& j) {
  const SvmModel base = SvmFromJson(j);
  SvrModel m;
  m.kernel = base.kernel;
  m.c = base.c;
  m.gamma = base.gamma;
  m.epsilon = j.at("epsilon").get<double>();
  m.support_vectors = base.support_vectors;
  m.dual_coefs = base.dual_coefs;
  m.bias = base.bias;
  m.weights = base.weights;
  return m;
}

json TreeToJson(const TreeModel& m) {
  json nodes = json::array();
  for (const TreeNode& n : m.nodes) {
    nodes.push_back(json{{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"value", n.value},
                         {"left", n.left},
                         {"right", n.right}});
  }
  return json{{"max_depth", m.max_depth},
              {"min_samples_leaf", m.min_samples_leaf},
              {"n_features", m.n_features},
              {"nodes", nodes}};
}

TreeModel TreeFromJson(const json& j) {
  TreeModel m;
  m.max_depth = j.at("max_depth").get<int>();
  m.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  m.n_features = j.at("n_features").get<std::size_t>();
  for (const json& n : j.at("nodes")) {
    m.nodes.push_back(TreeNode{n.at("feature").get<int>(),
                               n.at("threshold").get<double>(),
                               n.at("value").get<double>(),
                               n.at("left").get<int>(),
                               n.at("right").get<int>()});
  }
  return m;
}

json HyperToJson(const HyperConfig& h) {
  return json{{"kernel", KernelName(h.kernel)},
              {"c", h.c},
              {"gamma", h.gamma},
              {"epsilon", h.epsilon},
              {"max_depth", h.max_depth},
              {"min_samples_leaf", h.min_samples_leaf}};
}

HyperConfig HyperFromJson(const json& j) {
  HyperConfig h;
  h.kernel = KernelFromName(j.at("kernel").get<std::string>());
  h.c = j.at("c").get<double>();
  h.gamma = j.at("gamma").get<double>();
  h.epsilon = j.at("epsilon").get<double>();
  h.max_depth = j.at("max_depth").get<int>();
  h.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  return h;
}

}  // namespace

std::string SerializeArtifact(const ModelArtifact& artifact) {
  json j;
  j["schema"] = artifact.schema;
  j["task"] = artifact.task;
  j["model_type"] = artifact.model_type;
  j["n_formants"] = artifact.n_formants;
  j["dct_order"] = artifact.dct_order;
  j["n_features"] = artifact.n_features;
  j["k_folds"] = artifact.k_folds;
  j["seed"] = artifact.seed;
  j["chosen"] = HyperToJson(artifact.chosen);
  j["scaler"] = ScalerToJson(artifact.scaler);
  j["averaging"] = AveragingModeName(artifact.averaging);
  j["mean_weights"] = artifact.mean_weights;
  j["mean_bias"] = artifact.mean_bias;
  json svm_members = json::array();
  for (const SvmModel& m : artifact.svm_members) {
    svm_members.push_back(SvmToJson(m));
  }
  j["svm_members"] = svm_members;
  json svr_members = json::array();
  for (const SvrModel& m : artifact.svr_members) {
    svr_members.push_back(SvrToJson(m));
  }
  j["svr_members"] = svr_members;
  json tree_members = json::array();
  for (const TreeModel& m : artifact.tree_members) {
    tree_members.push_back(TreeToJson(m));
  }
  j["tree_members"] = tree_members;
  if (!artifact.provenance_json.empty()) {
    j["provenance"] = json::parse(artifact.provenance_json);
  }
  return j.dump(2) + "\n";
}

ModelArtifact DeserializeArtifact(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Raise(ErrorCode::kMalformedRow,
          std::string("model artifact is not valid JSON: ") + e.what());
  }
  ModelArtifact a;
  try {
    a.schema = j.at("schema").get<std::string>();
    Require(a.schema == "rhythm-model/1", ErrorCode::kUnsupportedFormat,
            "unsupported artifact schema: " + a.schema);
    a.task = j.at("task").get<std::string>();
    a.model_type = j.at("model_type").get<std::string>();
    a.n_formants = j.at("n_formants").get<int>();
    a.dct_order = j.at("dct_order").get<int>();
    a.n_features = j.at("n_features").get<std::size_t>();
    a.k_folds = j.at("k_folds").get<int>();
    a.seed = j.at("seed").get<std::uint64_t>();
    a.chosen = HyperFromJson(j.at("chosen"));
    a.scaler = ScalerFromJson(j.at("scaler"));
    a.averaging = AveragingModeFromName(j.at("averaging").get<std::string>());
    a.mean_weights = j.at("mean_weights").get<std::vector<double>>();
    a.mean_bias = j.at("mean_bias").get<double>();
    for (const json& m : j.at("svm_members")) {
      a.svm_members.push_back(SvmFromJson(m));
    }
    for (const json& m : j.at("svr_members")) {
      a.svr_members.push_back(SvrFromJson(m));
    }
    for (const json& m : j.at("tree_members")) {
      a.tree_members.push_back(TreeFromJson(m));
    }
    if (j.contains("provenance")) {
      a.provenance_json = j.at("provenance").dump();
    }
  } catch (const json::exception& e) {
    Raise(ErrorCode::kMalformedRow,
          std::string("model artifact is missing fields: ") + e.what());
  }
  return a;
}

void WriteArtifact(const std::string& path, const ModelArtifact& artifact) {
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), ErrorCode::kIoError, "cannot open for writing: " + path);
  out << SerializeArtifact(artifact);
  Require(out.good(), ErrorCode::kIoError, "write failed: " + path);
}

ModelArtifact LoadArtifact(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kFileNotFound, "cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return DeserializeArtifact(buf.str());
}

double ArtifactScore(const ModelArtifact& artifact,
                     std::span<const double> row) {
  const std::vector<double> z = ApplyScaler(artifact.scaler, row);
  if (artifact.averaging == AveragingMode::kPrimalMean) {
    Require(z.size() == artifact.mean_weights.size(),
            ErrorCode::kDimensionMismatch, "feature dimension mismatch");
    double acc = artifact.mean_bias;
    for (std::size_t d = 0; d < z.size(); ++d) {
      acc += artifact.mean_weights[d] * z[d];
    }
    return acc;
  }
  if (!artifact.svm_members.empty()) {
    double acc = 0.0;
    for (const SvmModel& m : artifact.svm_members) acc += SvmDecision(m, z);
    return acc / static_cast<double>(artifact.svm_members.size());
  }
  if (!artifact.svr_members.empty()) {
    double acc = 0.0;
    for (const SvrModel& m : artifact.svr_members) acc += SvrPredict(m, z);
    return acc / static_cast<double>(artifact.svr_members.size());
  }
  Require(!artifact.tree_members.empty(), ErrorCode::kMalformedRow,
          "artifact holds no models");
  double acc = 0.0;
  for (const TreeModel& m : artifact.tree_members) acc += DtPredict(m, z);
  return acc / static_cast<double>(artifact.tree_members.size());
}

int ArtifactPredictLabel(const ModelArtifact& artifact,
                         std::span<const double> row) {
  return ArtifactScore(artifact, row) < 0.0 ? -1 : 1;
}

namespace {

struct FoldIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> dev;
};

std::vector<FoldIndices> SplitByFold(const std::vector<int>& fold_of_sample,
                                     int k) {
  std::vector<FoldIndices> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < fold_of_sample.size(); ++i) {
    const int f = fold_of_sample[i];
    Require(f >= 0 && f < k, ErrorCode::kInvalidArgument,
            "fold index out of range");
    for (int g = 0; g < k; ++g) {
      (g == f ? folds[static_cast<std::size_t>(g)].dev
              : folds[static_cast<std::size_t>(g)].train)
          .push_back(i);
    }
  }
  for (const FoldIndices& f : folds) {
    Require(!f.dev.empty() && f.train.size() >= 2, ErrorCode::kTooFewSamples,
            "a fold has too few samples");
  }
  return folds;
}

Matrix Gather(const Matrix& x, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), x.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    std::copy(x.row(idx[r]).begin(), x.row(idx[r]).end(),
              out.row(r).begin());
  }
  return out;
}

std::vector<double> Gather(const std::vector<double>& v,
                           const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(v[i]);
  return out;
}

std::vector<HyperConfig> EnumerateConfigs(const std::string& model_type) {
  std::vector<HyperConfig> configs;
  if (model_type == "dt") {
    const TreeGrid grid;
    for (int depth : grid.max_depths) {
      for (int leaf : grid.min_samples_leaf) {
        HyperConfig h;
        h.max_depth = depth;
        h.min_samples_leaf = leaf;
        configs.push_back(h);
      }
    }
    return configs;
  }
  const SvmGrid grid;
  for (Kernel kernel : grid.kernels) {
    for (double c : grid.c_values) {
      const std::vector<double> gammas =
          kernel == Kernel::kRbf ? grid.gamma_values
                                 : std::vector<double>{0.0};
      for (double gamma : gammas) {
        if (model_type == "svr") {
          for (double eps : grid.epsilon_values) {
            HyperConfig h;
            h.kernel = kernel;
            h.c = c;
            h.gamma = gamma;
            h.epsilon = eps;
            configs.push_back(h);
          }
        } else {
          HyperConfig h;
          h.kernel = kernel;
          h.c = c;
          h.gamma = gamma;
          configs.push_back(h);
        }
      }
    }
  }
  return configs;
}

// Held-out predictions of one configuration on one fold.
std::vector<double> FoldPredict(const Matrix& x,
                                const std::vector<double>& targets,
                                const FoldIndices& fold,
                                const std::string& task,
                                const std::string& model_type,
                                const HyperConfig& config) {
  const Matrix x_train_raw = Gather(x, fold.train);
  const Scaler scaler = FitScaler(x_train_raw);
  const Matrix x_train = ApplyScaler(scaler, x_train_raw);
  const Matrix x_dev = ApplyScaler(scaler, Gather(x, fold.dev));
  const std::vector<double> y_train = Gather(targets, fold.train);

  std::vector<double> preds;
  preds.reserve(fold.dev.size());
  if (model_type == "svm") {
    std::vector<int> labels;
    labels.reserve(y_train.size());
    for (double t : y_train) labels.push_back(t > 0.0 ? 1 : -1);
    const SvmModel m =
        SvmTrain(x_train, labels, config.c, config.kernel, config.gamma);
    for (std::size_t i = 0; i < x_dev.rows(); ++i) {
      preds.push_back(task == "clf"
                          ? static_cast<double>(SvmPredictLabel(m, x_dev.row(i)))
                          : SvmDecision(m, x_dev.row(i)));
    }
  } else if (model_type == "svr") {
    const SvrModel m = SvrTrain(x_train, y_train, config.c, config.epsilon,
                                config.kernel, config.gamma);
    for (std::size_t i = 0; i < x_dev.rows(); ++i) {
      preds.push_back(SvrPredict(m, x_dev.row(i)));
    }
  } else {
    const TreeModel m =
        DtTrain(x_train, y_train, config.max_depth, config.min_samples_leaf);
    for (std::size_t i = 0; i < x_dev.rows(); ++i) {
      preds.push_back(DtPredict(m, x_dev.row(i)));
    }
  }
  return preds;
}

FoldMetrics MetricsFor(const std::string& task,
                       const std::vector<double>& y_true,
                       const std::vector<double>& y_pred) {
  FoldMetrics fm;
  fm.n = y_true.size();
  if (task == "clf") {
    std::vector<int> truth;
    std::vector<int> pred;
    truth.reserve(y_true.size());
    pred.reserve(y_pred.size());
    for (double t : y_true) truth.push_back(t > 0.0 ? 1 : -1);
    for (double p : y_pred) pred.push_back(p > 0.0 ? 1 : -1);
    const ClassificationMetrics cm = ComputeClassificationMetrics(truth, pred);
    fm.accuracy = cm.accuracy;
    fm.f1 = cm.f1;
  } else {
    fm.rmse = Rmse(y_true, y_pred);
    try {
      fm.pearson_rho = PearsonRho(y_true, y_pred);
    } catch (const Error&) {
      fm.pearson_rho = std::nullopt;  // constant series or too few points
    }
  }
  return fm;
}

}  // namespace

TrainResult TrainWithCv(const Matrix& x, const std::vector<double>& targets,
                        const std::vector<int>& fold_of_sample,
                        const TrainOptions& options) {
  Require(options.task == "clf" || options.task == "reg",
          ErrorCode::kInvalidArgument, "task must be clf or reg");
  Require(options.model_type == "svm" || options.model_type == "svr" ||
              options.model_type == "dt",
          ErrorCode::kInvalidArgument, "model must be svm, svr, or dt");
  Require((options.task == "clf") == (options.model_type == "svm"),
          ErrorCode::kInvalidArgument,
          "classification uses svm; regression uses svr or dt");
  Require(options.k >= 2, ErrorCode::kInvalidArgument, "need k >= 2 folds");
  Require(x.rows() == targets.size() && x.rows() == fold_of_sample.size(),
          ErrorCode::kLengthMismatch,
          "features, targets, and fold labels differ in count");

  const std::vector<FoldIndices> folds = SplitByFold(fold_of_sample, options.k);
  const std::vector<HyperConfig> configs = EnumerateConfigs(options.model_type);

  // Grid search: mean held-out metric per configuration; accuracy is
  // maximized, RMSE minimized; strict comparison keeps the earliest
  // grid point on ties.
  std::size_t best_idx = 0;
  double best_score = options.task == "clf"
                          ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    double mean_metric = 0.0;
    for (const FoldIndices& fold : folds) {
      const std::vector<double> preds = FoldPredict(
          x, targets, fold, options.task, options.model_type, configs[ci]);
      const FoldMetrics fm =
          MetricsFor(options.task, Gather(targets, fold.dev), preds);
      mean_metric += options.task == "clf" ? fm.accuracy : fm.rmse;
    }
    mean_metric /= static_cast<double>(folds.size());
    const bool better = options.task == "clf" ? mean_metric > best_score
                                              : mean_metric < best_score;
    if (better) {
      best_score = mean_metric;
      best_idx = ci;
    }
  }
  const HyperConfig chosen = configs[best_idx];

  // Report for the chosen configuration: per-fold and pooled held-out
  // metrics, pooled in sample order.
  TrainResult result;
  result.report.task = options.task;
  std::vector<double> pooled_true(x.rows(), 0.0);
  std::vector<double> pooled_pred(x.rows(), 0.0);
  for (const FoldIndices& fold : folds) {
    const std::vector<double> preds = FoldPredict(
        x, targets, fold, options.task, options.model_type, chosen);
    result.report.per_fold.push_back(
        MetricsFor(options.task, Gather(targets, fold.dev), preds));
    for (std::size_t r = 0; r < fold.dev.size(); ++r) {
      pooled_true[fold.dev[r]] = targets[fold.dev[r]];
      pooled_pred[fold.dev[r]] = preds[r];
    }
  }
  result.report.pooled = MetricsFor(options.task, pooled_true, pooled_pred);

  // Final artifact: one scaler on the full training set, the chosen
  // configuration refit per fold in that shared space, fold models
  // averaged.
  ModelArtifact& artifact = result.artifact;
  artifact.task = options.task;
  artifact.model_type = options.model_type;
  artifact.n_formants = options.n_formants;
  artifact.dct_order = options.dct_order;
  artifact.n_features = x.cols();
  artifact.k_folds = options.k;
  artifact.seed = options.seed;
  artifact.chosen = chosen;
  artifact.scaler = FitScaler(x);
  const Matrix xs = ApplyScaler(artifact.scaler, x);

  if (options.model_type == "svm") {
    std::vector<SvmModel> members;
    for (const FoldIndices& fold : folds) {
      const Matrix x_train = Gather(xs, fold.train);
      std::vector<int> labels;
      for (std::size_t i : fold.train) {
        labels.push_back(targets[i] > 0.0 ? 1 : -1);
      }
      members.push_back(
          SvmTrain(x_train, labels, chosen.c, chosen.kernel, chosen.gamma));
    }
    const AveragedSvm avg = AverageFoldModels(members);
    artifact.averaging = avg.mode;
    if (avg.mode == AveragingMode::kPrimalMean) {
      artifact.mean_weights = avg.weights;
      artifact.mean_bias = avg.bias;
    } else {
      artifact.svm_members = avg.members;
    }
  } else if (options.model_type == "svr") {
    std::vector<SvrModel> members;
    for (const FoldIndices& fold : folds) {
      members.push_back(SvrTrain(Gather(xs, fold.train),
                                 Gather(targets, fold.train), chosen.c,
                                 chosen.epsilon, chosen.kernel, chosen.gamma));
    }
    const AveragedSvr avg = AverageFoldModels(members);
    artifact.averaging = avg.mode;
    if (avg.mode == AveragingMode::kPrimalMean) {
      artifact.mean_weights = avg.weights;
      artifact.mean_bias = avg.bias;
    } else {
      artifact.svr_members = avg.members;
    }
  } else {
    std::vector<TreeModel> members;
    for (const FoldIndices& fold : folds) {
      members.push_back(DtTrain(Gather(xs, fold.train),
                                Gather(targets, fold.train), chosen.max_depth,
                                chosen.min_samples_leaf));
    }
    artifact.averaging = AveragingMode::kScoreEnsemble;
    artifact.tree_members = AverageFoldModels(members).members;
  }
  return result;
}

namespace {

json FoldMetricsToJson(const std::string& task, const FoldMetrics& fm) {
  json j;
  j["n"] = fm.n;
  if (task == "clf") {
    j["accuracy"] = fm.accuracy;
    j["f1"] = fm.f1;
  } else {
    j["rmse"] = fm.rmse;
    if (fm.pearson_rho.has_value()) {
      j["pearson_rho"] = *fm.pearson_rho;
    } else {
      j["pearson_rho"] = nullptr;
    }
  }
  return j;
}

}  // namespace

std::string SerializeReport(const EvalReport& report) {
  json j;
  j["task"] = report.task;
  json folds = json::array();
  for (const FoldMetrics& fm : report.per_fold) {
    folds.push_back(FoldMetricsToJson(report.task, fm));
  }
  j["per_fold"] = folds;
  j["pooled"] = FoldMetricsToJson(report.task, report.pooled);
  return j.dump(2) + "\n";
}

std::string FormatReportTable(const EvalReport& report) {
  std::ostringstream out;
  const bool clf = report.task == "clf";
  out << (clf ? "fold        n  accuracy        f1\n"
              : "fold        n      rmse       rho\n");
  char line[128];
  for (std::size_t i = 0; i < report.per_fold.size(); ++i) {
    const FoldMetrics& fm = report.per_fold[i];
    if (clf) {
      std::snprintf(line, sizeof(line), "%4zu  %7zu  %8.4f  %8.4f\n", i + 1,
                    fm.n, fm.accuracy, fm.f1);
    } else if (fm.pearson_rho.has_value()) {
      std::snprintf(line, sizeof(line), "%4zu  %7zu  %8.4f  %8.4f\n", i + 1,
                    fm.n, fm.rmse, *fm.pearson_rho);
    } else {
      std::snprintf(line, sizeof(line), "%4zu  %7zu  %8.4f       n/a\n",
                    i + 1, fm.n, fm.rmse);
    }
    out << line;
  }
  const FoldMetrics& p = report.pooled;
  if (clf) {
    std::snprintf(line, sizeof(line), "pool  %7zu  %8.4f  %8.4f\n", p.n,
                  p.accuracy, p.f1);
  } else if (p.pearson_rho.has_value()) {
    std::snprintf(line, sizeof(line), "pool  %7zu  %8.4f  %8.4f\n", p.n,
                  p.rmse, *p.pearson_rho);
  } else {
    std::snprintf(line, sizeof(line), "pool  %7zu  %8.4f       n/a\n", p.n,
                  p.rmse);
  }
  out << line;
  return out.str();
}

}  // namespace rhythmkit
