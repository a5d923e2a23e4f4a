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

#include "rhythmkit/commands.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rhythmkit/dataset.hpp"
#include "rhythmkit/error.hpp"
#include "rhythmkit/features.hpp"
#include "rhythmkit/models.hpp"
#include "rhythmkit/pipeline.hpp"
#include "rhythmkit/render.hpp"
#include "rhythmkit/synth.hpp"

namespace rhythmkit {

using nlohmann::json;

namespace {

void PrintErrorLine(const std::string& code, const std::string& detail,
                    const std::string& utt_id = "") {
  json j;
  j["error"] = code;
  j["detail"] = detail;
  if (!utt_id.empty()) j["utt_id"] = utt_id;
  std::cerr << j.dump() << std::endl;
}

int RunGuarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    PrintErrorLine(ErrorCodeName(e.code()), e.detail());
    return kExitInvalid;
  } catch (const std::exception& e) {
    PrintErrorLine("internal", e.what());
    return kExitInvalid;
  }
}

// Index-parallel loop; fn must handle its own exceptions.
void ParallelFor(std::size_t n, int jobs,
                 const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        fn(i);
      }
    });
  }
  for (std::thread& t : threads) t.join();
}

std::string WavStem(const std::string& wav_path) {
  return std::filesystem::path(wav_path).stem().string();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), ErrorCode::kIoError, "cannot open for writing: " + path);
  out << text;
  Require(out.good(), ErrorCode::kIoError, "write failed: " + path);
}

// Report JSON with the provenance blob attached.
std::string ReportJsonWithProvenance(const EvalReport& report,
                                     const std::string& provenance_json) {
  json j = json::parse(SerializeReport(report));
  j["provenance"] = json::parse(provenance_json);
  return j.dump(2) + "\n";
}

}  // namespace

int CmdSpectrogram(const SpectrogramArgs& args, const GlobalOptions& global) {
  return RunGuarded([&]() {
    Require(args.kind == "am" || args.kind == "fm" || args.kind == "both",
            ErrorCode::kInvalidArgument, "kind must be am, fm, or both");
    Require(!args.out_dir.empty(), ErrorCode::kInvalidArgument,
            "missing output directory");
    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    Require(!ec, ErrorCode::kIoError,
            "cannot create directory: " + args.out_dir);

    const std::string speaker =
        args.speaker.empty() ? global.config.speaker : args.speaker;
    const AudioBuffer audio =
        LoadUtteranceAudio(args.wav_path, args.segments_path, speaker);

    std::vector<ProvenanceInput> inputs;
    inputs.push_back({args.wav_path, HashFileHex(args.wav_path)});
    if (!args.segments_path.empty()) {
      inputs.push_back({args.segments_path, HashFileHex(args.segments_path)});
    }
    const std::string provenance = ProvenanceJson(global.config, inputs);
    const std::string stem = WavStem(args.wav_path);

    if (args.kind == "am" || args.kind == "both") {
      const EnvelopeSeries env = AmEnvelope(audio, global.config.am_rate_hz,
                                            global.config.am_smooth_s);
      const RhythmSpectrogram spec =
          ComputeRhythmSpectrogram(env, global.config.spectrogram);
      const std::string path =
          (std::filesystem::path(args.out_dir) / (stem + "_am.csv")).string();
      WriteSpectrogramCsv(path, spec, provenance);
      std::cout << path << "\n";
    }
    if (args.kind == "fm" || args.kind == "both") {
      const EnvelopeSeries env = FmEnvelope(audio, global.config.f0);
      const RhythmSpectrogram spec =
          ComputeRhythmSpectrogram(env, global.config.spectrogram);
      const std::string path =
          (std::filesystem::path(args.out_dir) / (stem + "_fm.csv")).string();
      WriteSpectrogramCsv(path, spec, provenance);
      std::cout << path << "\n";
    }
    return kExitOk;
  });
}

int CmdRender(const RenderArgs& args, const GlobalOptions& global) {
  return RunGuarded([&]() {
    const SpectrogramCsv csv = ReadSpectrogramCsv(args.csv_path);
    const RgbImage image = RenderHeatmap(csv.magnitudes);
    const std::string provenance = ProvenanceJson(
        global.config, {{args.csv_path, HashFileHex(args.csv_path)}});
    WritePng(args.out_png, image, provenance);
    std::cout << args.out_png << "\n";
    return kExitOk;
  });
}

int CmdFeatures(const FeaturesArgs& args, const GlobalOptions& global) {
  return RunGuarded([&]() {
    Manifest manifest = LoadManifest(args.manifest_path);
    Require(!manifest.rows.empty(), ErrorCode::kTooFewSamples,
            "manifest has no utterances");
    std::sort(manifest.rows.begin(), manifest.rows.end(),
              [](const ManifestRow& a, const ManifestRow& b) {
                return a.utt_id < b.utt_id;
              });

    struct Slot {
      std::optional<FeatureRow> row;
      std::string error_code;
      std::string error_detail;
    };
    std::vector<Slot> slots(manifest.rows.size());
    const RunConfig& config = global.config;
    ParallelFor(manifest.rows.size(), global.jobs, [&](std::size_t i) {
      const ManifestRow& m = manifest.rows[i];
      try {
        const AudioBuffer audio =
            LoadUtteranceAudio(m.wav_path, m.segments_path, config.speaker);
        const FeatureVector fv = ExtractUtteranceFeatures(audio, config);
        FeatureRow row;
        row.utt_id = m.utt_id;
        row.label = m.label ? *m.label : "";
        if (m.mmse) row.mmse = static_cast<double>(*m.mmse);
        row.values = fv.values;
        slots[i].row = std::move(row);
      } catch (const Error& e) {
        slots[i].error_code = ErrorCodeName(e.code());
        slots[i].error_detail = e.detail();
      } catch (const std::exception& e) {
        slots[i].error_code = "internal";
        slots[i].error_detail = e.what();
      }
    });

    FeatureTable table;
    table.n_features = static_cast<std::size_t>(
        2 * config.n_formants + 2 * config.dct_order * config.dct_order);
    bool any_skipped = false;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].row.has_value()) {
        table.rows.push_back(std::move(*slots[i].row));
      } else {
        any_skipped = true;
        PrintErrorLine(slots[i].error_code, slots[i].error_detail,
                       manifest.rows[i].utt_id);
      }
    }
    const std::string provenance = ProvenanceJson(
        config, {{args.manifest_path, HashFileHex(args.manifest_path)}});
    WriteFeatureCsv(args.out_csv, table, provenance);
    std::cout << args.out_csv << "\n";
    return any_skipped ? kExitPartial : kExitOk;
  });
}

int CmdTrain(const TrainArgs& args, const GlobalOptions& global) {
  return RunGuarded([&]() {
    const FeatureTable table = ReadFeatureCsv(args.features_csv);
    Require(!table.rows.empty(), ErrorCode::kTooFewSamples,
            "feature csv has no rows");
    Require(args.task == "clf" || args.task == "reg",
            ErrorCode::kInvalidArgument, "task must be clf or reg");

    const std::size_t n = table.rows.size();
    std::vector<std::string> ids;
    ids.reserve(n);
    for (const FeatureRow& row : table.rows) ids.push_back(row.utt_id);

    std::vector<double> targets(n, 0.0);
    std::vector<std::string> group_keys(n);
    if (args.task == "clf") {
      for (std::size_t i = 0; i < n; ++i) {
        Require(!table.rows[i].label.empty(), ErrorCode::kMalformedRow,
                "utterance '" + ids[i] +
                    "' has no label; classification needs labels");
        const std::string label = NormalizeLabel(table.rows[i].label);
        targets[i] = LabelTarget(label);
        group_keys[i] = label;
      }
    } else {
      std::vector<double> mmse(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        Require(table.rows[i].mmse.has_value(), ErrorCode::kMalformedRow,
                "utterance '" + ids[i] +
                    "' has no mmse; regression needs targets");
        mmse[i] = *table.rows[i].mmse;
      }
      targets = mmse;
      group_keys = QuartileKeys(ids, mmse);
    }

    const FoldPlan plan = StratifiedKfold(ids, group_keys, global.config.k_folds,
                                          global.config.seed);
    const std::vector<int> fold_of = FoldOfIds(plan, ids);

    Matrix x(n, table.n_features);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy(table.rows[i].values.begin(), table.rows[i].values.end(),
                x.row(i).begin());
    }

    TrainOptions options;
    options.task = args.task;
    options.model_type = args.model_type;
    options.k = global.config.k_folds;
    options.seed = global.config.seed;
    options.n_formants = global.config.n_formants;
    options.dct_order = global.config.dct_order;
    TrainResult result = TrainWithCv(x, targets, fold_of, options);

    const std::string provenance = ProvenanceJson(
        global.config, {{args.features_csv, HashFileHex(args.features_csv)}});
    result.artifact.provenance_json = provenance;
    WriteArtifact(args.out_model, result.artifact);

    const std::string report_path =
        args.out_report.empty() ? args.out_model + ".report.json"
                                : args.out_report;
    WriteTextFile(report_path, ReportJsonWithProvenance(result.report,
                                                        provenance));
    if (!args.out_folds.empty()) WriteFoldPlan(args.out_folds, plan);

    const HyperConfig& h = result.artifact.chosen;
    std::cout << "model: " << args.model_type << " ("
              << AveragingModeName(result.artifact.averaging) << ")\n";
    if (args.model_type == "dt") {
      std::cout << "chosen: max_depth=" << h.max_depth
                << " min_samples_leaf=" << h.min_samples_leaf << "\n";
    } else {
      std::cout << "chosen: kernel=" << KernelName(h.kernel) << " C=" << h.c
                << " gamma=" << (h.gamma == 0.0 ? std::string("auto")
                                                : std::to_string(h.gamma));
      if (args.model_type == "svr") std::cout << " epsilon=" << h.epsilon;
      std::cout << "\n";
    }
    std::cout << FormatReportTable(result.report);
    std::cout << args.out_model << "\n";
    return kExitOk;
  });
}

int CmdEval(const EvalArgs& args, const GlobalOptions& global) {
  return RunGuarded([&]() {
    const ModelArtifact artifact = LoadArtifact(args.model_path);
    const FeatureTable table = ReadFeatureCsv(args.features_csv);
    Require(!table.rows.empty(), ErrorCode::kTooFewSamples,
            "feature csv has no rows");
    Require(table.n_features == artifact.n_features,
            ErrorCode::kLayoutMismatch,
            "feature csv has " + std::to_string(table.n_features) +
                " features but the model expects " +
                std::to_string(artifact.n_features));

    EvalReport report;
    report.task = artifact.task;
    std::vector<double> y_true;
    std::vector<double> y_pred;
    y_true.reserve(table.rows.size());
    y_pred.reserve(table.rows.size());
    for (const FeatureRow& row : table.rows) {
      if (artifact.task == "clf") {
        Require(!row.label.empty(), ErrorCode::kMalformedRow,
                "utterance '" + row.utt_id + "' has no label");
        y_true.push_back(LabelTarget(NormalizeLabel(row.label)));
        y_pred.push_back(
            static_cast<double>(ArtifactPredictLabel(artifact, row.values)));
      } else {
        Require(row.mmse.has_value(), ErrorCode::kMalformedRow,
                "utterance '" + row.utt_id + "' has no mmse");
        y_true.push_back(*row.mmse);
        y_pred.push_back(ArtifactScore(artifact, row.values));
      }
    }
    if (artifact.task == "clf") {
      std::vector<int> truth;
      std::vector<int> pred;
      for (double t : y_true) truth.push_back(t > 0.0 ? 1 : -1);
      for (double p : y_pred) pred.push_back(p > 0.0 ? 1 : -1);
      const ClassificationMetrics cm =
          ComputeClassificationMetrics(truth, pred);
      report.pooled.n = truth.size();
      report.pooled.accuracy = cm.accuracy;
      report.pooled.f1 = cm.f1;
    } else {
      report.pooled.n = y_true.size();
      report.pooled.rmse = Rmse(y_true, y_pred);
      try {
        report.pooled.pearson_rho = PearsonRho(y_true, y_pred);
      } catch (const Error&) {
        report.pooled.pearson_rho = std::nullopt;
      }
    }

    std::cout << FormatReportTable(report);
    if (!args.out_report.empty()) {
      const std::string provenance = ProvenanceJson(
          global.config, {{args.model_path, HashFileHex(args.model_path)},
                          {args.features_csv, HashFileHex(args.features_csv)}});
      WriteTextFile(args.out_report,
                    ReportJsonWithProvenance(report, provenance));
    }
    return kExitOk;
  });
}

int CmdSynth(const SynthArgs& args, const GlobalOptions& global) {
  return RunGuarded([&]() {
    CorpusSpec spec;
    spec.n_per_class = global.config.synth_n_per_class;
    spec.seed = global.config.seed;
    spec.duration_s = global.config.synth_duration_s;
    spec.sample_rate_hz = global.config.synth_sample_rate_hz;
    const Manifest manifest = GenTwoClassCorpus(spec, args.out_dir);
    std::cout << "wrote " << manifest.rows.size() << " utterances to "
              << args.out_dir << "\n";
    std::cout << (std::filesystem::path(args.out_dir) / "manifest.csv").string()
              << "\n";
    return kExitOk;
  });
}

}  // namespace rhythmkit
