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

#include "rhythmkit/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include <json.hpp>

#include "rhythmkit/csv.hpp"
#include "rhythmkit/error.hpp"
#include "rhythmkit/rng.hpp"

namespace rhythmkit {

using nlohmann::json;

std::string NormalizeLabel(const std::string& raw) {
  std::string up;
  for (char c : raw) {
    up.push_back(static_cast<char>(
        std::toupper(static_cast<unsigned char>(c))));
  }
  if (up == "HC" || up == "AD") return up;
  Raise(ErrorCode::kUnknownLabel, "label must be HC or AD, got '" + raw + "'");
}

double LabelTarget(const std::string& label) {
  if (label == "AD") return 1.0;
  if (label == "HC") return -1.0;
  Raise(ErrorCode::kUnknownLabel, "unnormalized label '" + label + "'");
}

namespace {

// Relative paths in a manifest are relative to the manifest file, so a
// generated corpus stays valid when the directory moves.
std::string ResolveAgainst(const std::filesystem::path& base,
                           const std::string& raw) {
  if (raw.empty()) return raw;
  const std::filesystem::path p(raw);
  if (p.is_absolute()) return raw;
  return (base / p).lexically_normal().string();
}

}  // namespace

Manifest LoadManifest(const std::string& path) {
  const csv::File file = csv::ReadFile(path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  Require(!file.rows.empty(), ErrorCode::kMalformedCsv,
          "manifest has no header: " + path);
  const std::vector<std::string> expected = {"utt_id", "wav_path",
                                             "segments_path", "label", "mmse"};
  Require(file.rows[0] == expected, ErrorCode::kMalformedCsv,
          "manifest header must be utt_id,wav_path,segments_path,label,mmse");

  Manifest manifest;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < file.rows.size(); ++r) {
    const std::vector<std::string>& cells = file.rows[r];
    Require(cells.size() == expected.size(), ErrorCode::kMalformedRow,
            "manifest row " + std::to_string(r + 1) + " has " +
                std::to_string(cells.size()) + " cells, expected 5");
    ManifestRow row;
    row.utt_id = csv::Trim(cells[0]);
    Require(!row.utt_id.empty(), ErrorCode::kMalformedRow,
            "manifest row " + std::to_string(r + 1) + " has an empty utt_id");
    Require(seen.insert(row.utt_id).second, ErrorCode::kDuplicateId,
            "duplicate utt_id '" + row.utt_id + "'");
    row.wav_path = csv::Trim(cells[1]);
    Require(!row.wav_path.empty(), ErrorCode::kMalformedRow,
            "manifest row " + std::to_string(r + 1) + " has an empty wav_path");
    row.wav_path = ResolveAgainst(base, row.wav_path);
    row.segments_path = ResolveAgainst(base, csv::Trim(cells[2]));
    const std::string label = csv::Trim(cells[3]);
    if (!label.empty()) row.label = NormalizeLabel(label);
    const std::string mmse = csv::Trim(cells[4]);
    if (!mmse.empty()) {
      const long long value =
          csv::ParseInt(mmse, "mmse in row " + std::to_string(r + 1));
      Require(value >= 0 && value <= 30, ErrorCode::kMalformedRow,
              "mmse must be in 0..30, got " + mmse);
      row.mmse = static_cast<int>(value);
    }
    manifest.rows.push_back(std::move(row));
  }
  return manifest;
}

void WriteManifest(const std::string& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), ErrorCode::kIoError, "cannot open for writing: " + path);
  out << "utt_id,wav_path,segments_path,label,mmse\n";
  for (const ManifestRow& row : manifest.rows) {
    out << row.utt_id << ',' << row.wav_path << ',' << row.segments_path
        << ',' << (row.label ? *row.label : "") << ',';
    if (row.mmse) out << *row.mmse;
    out << '\n';
  }
  Require(out.good(), ErrorCode::kIoError, "write failed: " + path);
}

FoldPlan StratifiedKfold(const std::vector<std::string>& ids,
                         const std::vector<std::string>& group_keys, int k,
                         std::uint64_t seed) {
  Require(k >= 2, ErrorCode::kInvalidArgument, "need k >= 2 folds");
  Require(ids.size() == group_keys.size(), ErrorCode::kLengthMismatch,
          "ids and group keys differ in count");
  Require(ids.size() >= static_cast<std::size_t>(k),
          ErrorCode::kTooFewSamples,
          "need at least k items for k folds");
  {
    std::set<std::string> unique(ids.begin(), ids.end());
    Require(unique.size() == ids.size(), ErrorCode::kDuplicateId,
            "ids must be unique");
  }

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    groups[group_keys[i]].push_back(i);
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.folds.resize(static_cast<std::size_t>(k));
  std::vector<int> fold_of(ids.size(), -1);
  Rng rng(seed);
  std::size_t counter = 0;
  for (auto& [key, members] : groups) {
    rng.Shuffle(members);
    for (std::size_t idx : members) {
      const int fold = static_cast<int>(counter % static_cast<std::size_t>(k));
      fold_of[idx] = fold;
      plan.folds[static_cast<std::size_t>(fold)].dev_ids.push_back(ids[idx]);
      ++counter;
    }
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (int f = 0; f < k; ++f) {
      if (fold_of[i] != f) {
        plan.folds[static_cast<std::size_t>(f)].train_ids.push_back(ids[i]);
      }
    }
  }
  return plan;
}

std::vector<std::string> QuartileKeys(const std::vector<std::string>& ids,
                                      const std::vector<double>& values) {
  Require(ids.size() == values.size(), ErrorCode::kLengthMismatch,
          "ids and values differ in count");
  const std::size_t n = ids.size();
  Require(n > 0, ErrorCode::kTooFewSamples, "no items to stratify");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (values[a] != values[b]) return values[a] < values[b];
                     return ids[a] < ids[b];
                   });
  std::vector<std::string> keys(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const std::size_t quartile = std::min<std::size_t>(4 * rank / n, 3);
    keys[order[rank]] = "q" + std::to_string(quartile);
  }
  return keys;
}

std::vector<int> FoldOfIds(const FoldPlan& plan,
                           const std::vector<std::string>& ids) {
  std::map<std::string, int> dev_fold;
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    for (const std::string& id : plan.folds[f].dev_ids) {
      dev_fold[id] = static_cast<int>(f);
    }
  }
  std::vector<int> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    const auto it = dev_fold.find(id);
    Require(it != dev_fold.end(), ErrorCode::kInvalidArgument,
            "id '" + id + "' is not in the fold plan");
    out.push_back(it->second);
  }
  return out;
}

std::string SerializeFoldPlan(const FoldPlan& plan) {
  json folds = json::array();
  for (const Fold& fold : plan.folds) {
    folds.push_back(
        json{{"train_ids", fold.train_ids}, {"dev_ids", fold.dev_ids}});
  }
  const json j{{"k", plan.k}, {"seed", plan.seed}, {"folds", folds}};
  return j.dump(2) + "\n";
}

void WriteFoldPlan(const std::string& path, const FoldPlan& plan) {
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), ErrorCode::kIoError, "cannot open for writing: " + path);
  out << SerializeFoldPlan(plan);
  Require(out.good(), ErrorCode::kIoError, "write failed: " + path);
}

}  // namespace rhythmkit
