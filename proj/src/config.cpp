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

#include "rhythmkit/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rhythmkit/error.hpp"
#include "rhythmkit/rng.hpp"

namespace rhythmkit {

using nlohmann::json;

namespace {

json ToJsonObject(const RunConfig& c) {
  json j;
  j["f0"] = {{"min_hz", c.f0.f0_min_hz},
             {"max_hz", c.f0.f0_max_hz},
             {"frame_s", c.f0.frame_s},
             {"hop_s", c.f0.hop_s},
             {"voicing_threshold", c.f0.voicing_threshold}};
  j["am"] = {{"rate_hz", c.am_rate_hz}, {"smooth_s", c.am_smooth_s}};
  j["spectrogram"] = {{"window_s", c.spectrogram.window_s},
                      {"n_slices", c.spectrogram.n_slices},
                      {"fmax_hz", c.spectrogram.fmax_hz},
                      {"zero_pad_factor", c.spectrogram.zero_pad_factor}};
  j["peaks"] = {{"prominence_min", c.peaks.prominence_min},
                {"min_separation_hz", c.peaks.min_separation_hz}};
  j["features"] = {{"n_formants", c.n_formants}, {"dct_order", c.dct_order}};
  j["train"] = {{"k", c.k_folds}, {"seed", c.seed}};
  j["speaker"] = c.speaker;
  j["synth"] = {{"n_per_class", c.synth_n_per_class},
                {"duration_s", c.synth_duration_s},
                {"sample_rate_hz", c.synth_sample_rate_hz}};
  return j;
}

// Overwrites dst fields named in src, complaining about unknown keys so
// config typos never silently keep a default.
template <typename T>
void TakeKey(const json& obj, const std::string& section,
             const std::string& key, T* dst) {
  if (!obj.contains(key)) return;
  try {
    *dst = obj.at(key).get<T>();
  } catch (const json::exception&) {
    Raise(ErrorCode::kInvalidArgument,
          "config key " + section + "." + key + " has the wrong type");
  }
}

void RequireKnownKeys(const json& obj, const std::string& section,
                      const std::vector<std::string>& known) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const std::string& k : known) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    Require(ok, ErrorCode::kInvalidArgument,
            "unknown config key " + section + "." + item.key());
  }
}

}  // namespace

std::string RunConfigToJson(const RunConfig& config) {
  return ToJsonObject(config).dump();
}

RunConfig ParseRunConfig(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Raise(ErrorCode::kInvalidArgument,
          std::string("config is not valid JSON: ") + e.what());
  }
  Require(j.is_object(), ErrorCode::kInvalidArgument,
          "config root must be an object");
  RequireKnownKeys(j, "<root>",
                   {"f0", "am", "spectrogram", "peaks", "features", "train",
                    "speaker", "synth"});
  RunConfig c;
  if (j.contains("f0")) {
    const json& s = j.at("f0");
    RequireKnownKeys(s, "f0",
                     {"min_hz", "max_hz", "frame_s", "hop_s",
                      "voicing_threshold"});
    TakeKey(s, "f0", "min_hz", &c.f0.f0_min_hz);
    TakeKey(s, "f0", "max_hz", &c.f0.f0_max_hz);
    TakeKey(s, "f0", "frame_s", &c.f0.frame_s);
    TakeKey(s, "f0", "hop_s", &c.f0.hop_s);
    TakeKey(s, "f0", "voicing_threshold", &c.f0.voicing_threshold);
  }
  if (j.contains("am")) {
    const json& s = j.at("am");
    RequireKnownKeys(s, "am", {"rate_hz", "smooth_s"});
    TakeKey(s, "am", "rate_hz", &c.am_rate_hz);
    TakeKey(s, "am", "smooth_s", &c.am_smooth_s);
  }
  if (j.contains("spectrogram")) {
    const json& s = j.at("spectrogram");
    RequireKnownKeys(s, "spectrogram",
                     {"window_s", "n_slices", "fmax_hz", "zero_pad_factor"});
    TakeKey(s, "spectrogram", "window_s", &c.spectrogram.window_s);
    TakeKey(s, "spectrogram", "n_slices", &c.spectrogram.n_slices);
    TakeKey(s, "spectrogram", "fmax_hz", &c.spectrogram.fmax_hz);
    TakeKey(s, "spectrogram", "zero_pad_factor",
            &c.spectrogram.zero_pad_factor);
  }
  if (j.contains("peaks")) {
    const json& s = j.at("peaks");
    RequireKnownKeys(s, "peaks", {"prominence_min", "min_separation_hz"});
    TakeKey(s, "peaks", "prominence_min", &c.peaks.prominence_min);
    TakeKey(s, "peaks", "min_separation_hz", &c.peaks.min_separation_hz);
  }
  if (j.contains("features")) {
    const json& s = j.at("features");
    RequireKnownKeys(s, "features", {"n_formants", "dct_order"});
    TakeKey(s, "features", "n_formants", &c.n_formants);
    TakeKey(s, "features", "dct_order", &c.dct_order);
  }
  if (j.contains("train")) {
    const json& s = j.at("train");
    RequireKnownKeys(s, "train", {"k", "seed"});
    TakeKey(s, "train", "k", &c.k_folds);
    TakeKey(s, "train", "seed", &c.seed);
  }
  if (j.contains("speaker")) {
    TakeKey(j, "<root>", "speaker", &c.speaker);
  }
  if (j.contains("synth")) {
    const json& s = j.at("synth");
    RequireKnownKeys(s, "synth",
                     {"n_per_class", "duration_s", "sample_rate_hz"});
    TakeKey(s, "synth", "n_per_class", &c.synth_n_per_class);
    TakeKey(s, "synth", "duration_s", &c.synth_duration_s);
    TakeKey(s, "synth", "sample_rate_hz", &c.synth_sample_rate_hz);
  }
  return c;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kFileNotFound, "cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseRunConfig(buf.str());
}

std::string HashFileHex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kFileNotFound, "cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  const std::uint64_t h = Fnv1a64(bytes.data(), bytes.size());
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(hex);
}

std::string ProvenanceJson(const RunConfig& config,
                           const std::vector<ProvenanceInput>& inputs) {
  json j;
  j["tool"] = "rhythmkit";
  j["schema"] = "rhythm-provenance/1";
  j["config"] = ToJsonObject(config);
  json in = json::array();
  for (const ProvenanceInput& input : inputs) {
    in.push_back(json{{"path", input.path}, {"fnv1a64", input.fnv1a64}});
  }
  j["inputs"] = in;
  return j.dump();
}

}  // namespace rhythmkit
