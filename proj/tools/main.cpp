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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rhythmkit/commands.hpp"
#include "rhythmkit/error.hpp"

namespace {

int Fail(const rhythmkit::Error& e) {
  nlohmann::json j;
  j["error"] = rhythmkit::ErrorCodeName(e.code());
  j["detail"] = e.detail();
  std::cerr << j.dump() << std::endl;
  return rhythmkit::kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rhythmkit;

  CLI::App app{"Speech rhythm spectrograms, handcrafted rhythm features, "
               "and small SVM/SVR/CART models"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--config", config_path, "JSON config file");
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "Random seed override");
  app.add_option("--jobs", jobs, "Worker threads for per-file stages")
      ->check(CLI::PositiveNumber);

  SpectrogramArgs spec_args;
  CLI::App* spec_cmd =
      app.add_subcommand("spectrogram", "Compute AM/FM rhythm spectrograms");
  spec_cmd->add_option("--wav", spec_args.wav_path, "Input WAV file")
      ->required();
  spec_cmd->add_option("--segments", spec_args.segments_path,
                       "Speaker segment CSV (start_s,end_s,speaker)");
  spec_cmd->add_option("--speaker", spec_args.speaker,
                       "Speaker tag to keep (default from config)");
  spec_cmd->add_option("--kind", spec_args.kind, "am, fm, or both")
      ->check(CLI::IsMember({"am", "fm", "both"}));
  spec_cmd->add_option("--out-dir", spec_args.out_dir, "Output directory")
      ->required();

  RenderArgs render_args;
  CLI::App* render_cmd =
      app.add_subcommand("render", "Render a spectrogram CSV as a PNG");
  render_cmd->add_option("--csv", render_args.csv_path, "Spectrogram CSV")
      ->required();
  render_cmd->add_option("--out", render_args.out_png, "Output PNG")
      ->required();

  FeaturesArgs feat_args;
  int n_formants_override = -1;
  int dct_order_override = -1;
  CLI::App* feat_cmd = app.add_subcommand(
      "features", "Extract rhythm feature vectors for a manifest");
  feat_cmd->add_option("--manifest", feat_args.manifest_path, "Manifest CSV")
      ->required();
  feat_cmd->add_option("--out", feat_args.out_csv, "Output feature CSV")
      ->required();
  feat_cmd->add_option("--n-formants", n_formants_override,
                       "Tracked rhythm formants per slice");
  feat_cmd->add_option("--dct-order", dct_order_override,
                       "Side length of the low-order DCT block");

  TrainArgs train_args;
  int k_override = -1;
  CLI::App* train_cmd = app.add_subcommand(
      "train", "Grid-search k-fold CV training with fold averaging");
  train_cmd->add_option("--features", train_args.features_csv, "Feature CSV")
      ->required();
  train_cmd->add_option("--task", train_args.task, "clf or reg")
      ->required()
      ->check(CLI::IsMember({"clf", "reg"}));
  train_cmd->add_option("--model", train_args.model_type, "svm, svr, or dt")
      ->required()
      ->check(CLI::IsMember({"svm", "svr", "dt"}));
  train_cmd->add_option("--k", k_override, "Fold count");
  train_cmd->add_option("--out", train_args.out_model, "Output model JSON")
      ->required();
  train_cmd->add_option("--report", train_args.out_report,
                        "Report JSON path (default <model>.report.json)");
  train_cmd->add_option("--folds", train_args.out_folds,
                        "Fold-plan JSON path for audit");

  EvalArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Evaluate a model artifact on a feature CSV");
  eval_cmd->add_option("--model", eval_args.model_path, "Model artifact JSON")
      ->required();
  eval_cmd->add_option("--features", eval_args.features_csv, "Feature CSV")
      ->required();
  eval_cmd->add_option("--out", eval_args.out_report, "Report JSON path");

  SynthArgs synth_args;
  int n_per_class_override = -1;
  double duration_override = -1.0;
  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "Generate the synthetic two-class demo corpus");
  synth_cmd->add_option("--out-dir", synth_args.out_dir, "Output directory")
      ->required();
  synth_cmd->add_option("--n-per-class", n_per_class_override,
                        "Utterances per class");
  synth_cmd->add_option("--duration", duration_override,
                        "Utterance duration in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    nlohmann::json j;
    j["error"] = "invalid_argument";
    j["detail"] = std::string(e.what());
    std::cerr << j.dump() << std::endl;
    return kExitInvalid;
  }

  GlobalOptions global;
  try {
    if (!config_path.empty()) global.config = LoadRunConfig(config_path);
    if (seed_opt->count() > 0) global.config.seed = seed;
    global.jobs = jobs;
    if (n_formants_override >= 0) global.config.n_formants = n_formants_override;
    if (dct_order_override >= 0) global.config.dct_order = dct_order_override;
    if (k_override >= 0) {
      Require(k_override >= 2, ErrorCode::kInvalidArgument,
              "need k >= 2 folds");
      global.config.k_folds = k_override;
    }
    if (n_per_class_override >= 0) {
      global.config.synth_n_per_class = n_per_class_override;
    }
    if (duration_override >= 0.0) {
      global.config.synth_duration_s = duration_override;
    }
  } catch (const Error& e) {
    return Fail(e);
  }

  if (spec_cmd->parsed()) return CmdSpectrogram(spec_args, global);
  if (render_cmd->parsed()) return CmdRender(render_args, global);
  if (feat_cmd->parsed()) return CmdFeatures(feat_args, global);
  if (train_cmd->parsed()) return CmdTrain(train_args, global);
  if (eval_cmd->parsed()) return CmdEval(eval_args, global);
  if (synth_cmd->parsed()) return CmdSynth(synth_args, global);
  return kExitInvalid;
}
