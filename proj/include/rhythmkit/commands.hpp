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

#ifndef RHYTHMKIT_COMMANDS_HPP_
#define RHYTHMKIT_COMMANDS_HPP_

#include <string>

#include "rhythmkit/config.hpp"

namespace rhythmkit {

// Exit codes shared by all commands: 0 success, 1 partial success
// (some utterances skipped), 2 invalid invocation or input. Failures
// print one machine-parsable JSON line on stderr.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitInvalid = 2;

struct GlobalOptions {
  RunConfig config;
  int jobs = 1;
};

struct SpectrogramArgs {
  std::string wav_path;
  std::string segments_path;  // empty means whole file
  std::string speaker;        // empty means config default
  std::string kind = "both";  // am | fm | both
  std::string out_dir;
};
int CmdSpectrogram(const SpectrogramArgs& args, const GlobalOptions& global);

struct RenderArgs {
  std::string csv_path;
  std::string out_png;
};
int CmdRender(const RenderArgs& args, const GlobalOptions& global);

struct FeaturesArgs {
  std::string manifest_path;
  std::string out_csv;
};
int CmdFeatures(const FeaturesArgs& args, const GlobalOptions& global);

struct TrainArgs {
  std::string features_csv;
  std::string task;        // clf | reg
  std::string model_type;  // svm | svr | dt
  std::string out_model;
  std::string out_report;  // empty derives <out_model>.report.json
  std::string out_folds;   // empty skips the fold-plan dump
};
int CmdTrain(const TrainArgs& args, const GlobalOptions& global);

struct EvalArgs {
  std::string model_path;
  std::string features_csv;
  std::string out_report;  // empty prints the table only
};
int CmdEval(const EvalArgs& args, const GlobalOptions& global);

struct SynthArgs {
  std::string out_dir;
};
int CmdSynth(const SynthArgs& args, const GlobalOptions& global);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_COMMANDS_HPP_
