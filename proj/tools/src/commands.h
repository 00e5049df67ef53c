// Copyright 2026 The adscreen Authors
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

#ifndef ADSCREEN_TOOLS_COMMANDS_H_
#define ADSCREEN_TOOLS_COMMANDS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adscreen/classify.h"
#include "config.h"

namespace adscreen::cli {

struct FeatureTable {
  std::vector<std::string> ids;
  std::vector<std::optional<Label>> labels;
  std::vector<std::string> columns;  // feature columns, without id and label
  Matrix features;

  // Throws InputError listing the unlabeled ids, if any.
  LabeledDataset labeled() const;
};

// Lines starting with '#' are provenance comments and are skipped.
FeatureTable read_feature_csv(const std::filesystem::path& path);

struct ParticipantInfo {
  std::optional<Label> label;
  std::optional<double> mmse;
};

// CSV with columns id,label[,mmse]; a header row starting with "id" is
// optional. Empty label or mmse cells mean unknown.
std::map<std::string, ParticipantInfo> read_metadata(const std::filesystem::path& path);

std::filesystem::path lexicon_path(const std::filesystem::path& features_csv);

struct ExtractOptions {
  PipelineConfig config;
  std::filesystem::path output;
  std::filesystem::path model;  // reuse its vocabulary and max turns
  bool strict = false;
};

struct ExtractSummary {
  std::size_t rows = 0;
  std::vector<std::string> skipped;
};

ExtractSummary run_extract(const ExtractOptions& options);

struct TrainOptions {
  PipelineConfig config;
  std::filesystem::path features;
  std::filesystem::path model;
  std::filesystem::path report;  // empty: no report file
};

// Returns the cross-validation report, or nothing when folds == 0.
std::optional<CvReport> run_train(const TrainOptions& options);

struct PredictOptions {
  std::filesystem::path model;
  std::filesystem::path features;
  std::filesystem::path output;  // empty: stdout
};

struct PredictSummary {
  std::vector<std::string> ids;
  std::vector<Prediction> predictions;
  std::optional<double> accuracy;  // when every row is labeled
};

PredictSummary run_predict(const PredictOptions& options);

struct WerOptions {
  PipelineConfig config;
  std::filesystem::path reference_dir;
  std::filesystem::path hypothesis_dir;
  std::filesystem::path metadata;
  std::filesystem::path output;  // empty: stdout
  std::string speaker = "PAR";   // empty: every turn
  bool drop_fillers = false;
};

// Pause fillers removed by --drop-fillers.
const std::vector<std::string>& filler_words();

// Returns the JSON report that was written.
std::string run_wer(const WerOptions& options);

}  // namespace adscreen::cli

#endif  // ADSCREEN_TOOLS_COMMANDS_H_
