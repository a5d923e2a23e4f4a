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

#ifndef RHYTHMKIT_DATASET_HPP_
#define RHYTHMKIT_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rhythmkit {

struct ManifestRow {
  std::string utt_id;
  std::string wav_path;
  std::string segments_path;         // empty means whole-file utterance
  std::optional<std::string> label;  // "HC" or "AD" after normalization
  std::optional<int> mmse;           // 0..30
};

struct Manifest {
  std::vector<ManifestRow> rows;
};

// CSV with header utt_id,wav_path,segments_path,label,mmse. Labels are
// case-insensitive HC/AD; empty label and mmse fields mean absent.
Manifest LoadManifest(const std::string& path);
void WriteManifest(const std::string& path, const Manifest& manifest);

// "AD" is the positive class (+1), "HC" the negative (-1).
std::string NormalizeLabel(const std::string& raw);
double LabelTarget(const std::string& label);

struct Fold {
  std::vector<std::string> train_ids;
  std::vector<std::string> dev_ids;
};

struct FoldPlan {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<Fold> folds;
};

// Deterministic stratified k-fold: items grouped by key, each group
// shuffled with the seed, then dealt round-robin to dev folds with a
// counter that continues across groups, so dev sizes differ by at most
// one overall and per group.
FoldPlan StratifiedKfold(const std::vector<std::string>& ids,
                         const std::vector<std::string>& group_keys, int k,
                         std::uint64_t seed);

// Grouping helpers: classification stratifies by label, regression by
// quartile of the target (rank-based, ties broken by id).
std::vector<std::string> QuartileKeys(const std::vector<std::string>& ids,
                                      const std::vector<double>& values);

// Dev-fold index per id, aligned with ids; unknown ids are an error.
std::vector<int> FoldOfIds(const FoldPlan& plan,
                           const std::vector<std::string>& ids);

std::string SerializeFoldPlan(const FoldPlan& plan);
void WriteFoldPlan(const std::string& path, const FoldPlan& plan);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_DATASET_HPP_
