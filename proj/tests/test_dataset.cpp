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
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "rhythmkit/dataset.hpp"
#include "rhythmkit/error.hpp"
#include "test_util.hpp"

using rhythmkit::ErrorCode;
using rhythmkit::FoldPlan;
using rhythmkit::Manifest;
using testutil::CodeOf;
using testutil::TempDir;

TEST_CASE("manifest parsing: labels, mmse, and path resolution") {
  TempDir tmp("manifest");
  const std::string path = tmp.Path("manifest.csv");
  testutil::WriteAll(path,
                     "utt_id,wav_path,segments_path,label,mmse\n"
                     "u1,audio/u1.wav,,ad,21\n"
                     "u2,/abs/u2.wav,segs/u2.csv,HC,\n"
                     "u3,u3.wav,,,\n");
  const Manifest m = rhythmkit::LoadManifest(path);
  REQUIRE(m.rows.size() == 3);

  CHECK(m.rows[0].label == "AD");  // case-normalized
  CHECK(m.rows[0].mmse == 21);
  // Relative paths resolve against the manifest directory.
  CHECK(m.rows[0].wav_path ==
        (tmp.root() / "audio/u1.wav").lexically_normal().string());
  CHECK(m.rows[1].wav_path == "/abs/u2.wav");  // absolute kept as-is
  CHECK(m.rows[1].label == "HC");
  CHECK(!m.rows[1].mmse.has_value());
  CHECK(!m.rows[2].label.has_value());

  CHECK(rhythmkit::LabelTarget("AD") == 1.0);
  CHECK(rhythmkit::LabelTarget("HC") == -1.0);
}

TEST_CASE("manifest parsing rejects malformed content") {
  TempDir tmp("manifest_bad");
  testutil::WriteAll(tmp.Path("dup.csv"),
                     "utt_id,wav_path,segments_path,label,mmse\n"
                     "u1,a.wav,,AD,20\n"
                     "u1,b.wav,,HC,25\n");
  CHECK(CodeOf([&] { rhythmkit::LoadManifest(tmp.Path("dup.csv")); }) ==
        ErrorCode::kDuplicateId);

  testutil::WriteAll(tmp.Path("label.csv"),
                     "utt_id,wav_path,segments_path,label,mmse\n"
                     "u1,a.wav,,MCI,20\n");
  CHECK(CodeOf([&] { rhythmkit::LoadManifest(tmp.Path("label.csv")); }) ==
        ErrorCode::kUnknownLabel);

  testutil::WriteAll(tmp.Path("mmse.csv"),
                     "utt_id,wav_path,segments_path,label,mmse\n"
                     "u1,a.wav,,AD,42\n");
  CHECK(CodeOf([&] { rhythmkit::LoadManifest(tmp.Path("mmse.csv")); }) ==
        ErrorCode::kMalformedRow);

  testutil::WriteAll(tmp.Path("header.csv"), "id,wav\nu1,a.wav\n");
  CHECK(CodeOf([&] { rhythmkit::LoadManifest(tmp.Path("header.csv")); }) ==
        ErrorCode::kMalformedCsv);
}

TEST_CASE("stratified folds balance group counts within one") {
  std::vector<std::string> ids;
  std::vector<std::string> keys;
  for (int i = 0; i < 166; ++i) {
    ids.push_back("u" + std::to_string(1000 + i));
    keys.push_back(i < 83 ? "AD" : "HC");
  }
  const FoldPlan plan = rhythmkit::StratifiedKfold(ids, keys, 5, 42);
  REQUIRE(plan.folds.size() == 5);

  std::multiset<std::size_t> sizes;
  std::set<std::string> all_dev;
  for (const auto& fold : plan.folds) {
    sizes.insert(fold.dev_ids.size());
    for (const std::string& id : fold.dev_ids) {
      CHECK(all_dev.insert(id).second);  // dev sets are disjoint
    }
    CHECK(fold.train_ids.size() + fold.dev_ids.size() == ids.size());
  }
  CHECK(all_dev.size() == ids.size());
  CHECK(sizes == std::multiset<std::size_t>{33, 33, 33, 33, 34});

  // Class counts per fold differ by at most one.
  std::map<std::string, std::string> key_of;
  for (std::size_t i = 0; i < ids.size(); ++i) key_of[ids[i]] = keys[i];
  std::vector<std::size_t> ad_counts;
  for (const auto& fold : plan.folds) {
    std::size_t ad = 0;
    for (const std::string& id : fold.dev_ids) {
      if (key_of[id] == "AD") ++ad;
    }
    ad_counts.push_back(ad);
  }
  const auto [mn, mx] = std::minmax_element(ad_counts.begin(), ad_counts.end());
  CHECK(*mx - *mn <= 1);
}

TEST_CASE("fold plans are seed-deterministic") {
  std::vector<std::string> ids;
  std::vector<std::string> keys;
  for (int i = 0; i < 20; ++i) {
    ids.push_back("u" + std::to_string(i));
    keys.push_back(i % 2 == 0 ? "AD" : "HC");
  }
  const FoldPlan a = rhythmkit::StratifiedKfold(ids, keys, 5, 42);
  const FoldPlan b = rhythmkit::StratifiedKfold(ids, keys, 5, 42);
  CHECK(rhythmkit::SerializeFoldPlan(a) == rhythmkit::SerializeFoldPlan(b));

  const FoldPlan c = rhythmkit::StratifiedKfold(ids, keys, 5, 43);
  CHECK(rhythmkit::SerializeFoldPlan(a) != rhythmkit::SerializeFoldPlan(c));

  CHECK(CodeOf([&] { rhythmkit::StratifiedKfold(ids, keys, 1, 42); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(CodeOf([&] {
          rhythmkit::StratifiedKfold({"a", "a", "b", "c", "d"},
                                     {"x", "x", "x", "x", "x"}, 2, 1);
        }) == ErrorCode::kDuplicateId);
}

TEST_CASE("quartile keys follow value ranks with id tie-breaks") {
  const std::vector<std::string> ids = {"a", "b", "c", "d",
                                        "e", "f", "g", "h"};
  const std::vector<double> values = {17, 16, 15, 14, 13, 12, 11, 10};
  const std::vector<std::string> keys = rhythmkit::QuartileKeys(ids, values);
  CHECK(keys == std::vector<std::string>{"q3", "q3", "q2", "q2", "q1", "q1",
                                         "q0", "q0"});

  // All-equal values: ranks fall back to id order.
  const std::vector<double> flat(8, 5.0);
  const std::vector<std::string> tied = rhythmkit::QuartileKeys(ids, flat);
  CHECK(tied == std::vector<std::string>{"q0", "q0", "q1", "q1", "q2", "q2",
                                         "q3", "q3"});
}

TEST_CASE("fold lookup maps ids to their dev fold") {
  const std::vector<std::string> ids = {"a", "b", "c", "d", "e", "f"};
  const std::vector<std::string> keys(6, "x");
  const FoldPlan plan = rhythmkit::StratifiedKfold(ids, keys, 3, 7);
  const std::vector<int> folds = rhythmkit::FoldOfIds(plan, ids);
  REQUIRE(folds.size() == 6);
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    for (const std::string& id : plan.folds[f].dev_ids) {
      const std::size_t i = static_cast<std::size_t>(
          std::find(ids.begin(), ids.end(), id) - ids.begin());
      CHECK(folds[i] == static_cast<int>(f));
    }
  }
  CHECK(CodeOf([&] { rhythmkit::FoldOfIds(plan, {"nope"}); }) ==
        ErrorCode::kInvalidArgument);
}
