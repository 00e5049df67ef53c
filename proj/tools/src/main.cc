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

#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "adscreen/error.h"
#include "commands.h"
#include "config.h"

namespace {

using adscreen::cli::PipelineConfig;

struct Overrides {
  std::string config;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  std::string audio_dir, segmentation_dir, transcript_dir, metadata, stopwords;
  std::optional<std::size_t> vocabulary_size;
  std::optional<std::size_t> folds;
  std::string kernel;
  std::optional<double> c;
  std::string gamma;
};

PipelineConfig effective_config(const Overrides& o) {
  PipelineConfig c = o.config.empty() ? PipelineConfig{} : adscreen::cli::load_config(o.config);
  if (o.workers) c.workers = *o.workers;
  if (o.seed) c.seed = *o.seed;
  if (!o.audio_dir.empty()) c.audio_dir = o.audio_dir;
  if (!o.segmentation_dir.empty()) c.segmentation_dir = o.segmentation_dir;
  if (!o.transcript_dir.empty()) c.transcript_dir = o.transcript_dir;
  if (!o.metadata.empty()) c.metadata = o.metadata;
  if (!o.stopwords.empty()) c.stopwords = o.stopwords;
  if (o.vocabulary_size) c.vocabulary_size = *o.vocabulary_size;
  if (o.folds) c.folds = *o.folds;
  if (!o.kernel.empty()) {
    auto type = adscreen::parse_kernel(o.kernel);
    if (!type) throw adscreen::InputError("--kernel must be linear or rbf");
    c.svm.kernel.type = *type;
  }
  if (o.c) c.svm.c = *o.c;
  if (!o.gamma.empty()) {
    if (o.gamma == "scale") {
      c.svm.kernel.gamma = 0.0;
    } else {
      try {
        c.svm.kernel.gamma = std::stod(o.gamma);
      } catch (const std::exception&) {
        throw adscreen::InputError("--gamma must be a number or 'scale'");
      }
    }
  }
  adscreen::cli::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("adscreen");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);

  CLI::App app{"Prosodic and lexical screening features with an SVM classifier"};
  app.require_subcommand(1);
  Overrides o;
  std::string log_level = "info";
  app.add_option("--config", o.config, "JSON pipeline config")->check(CLI::ExistingFile);
  app.add_option("--workers", o.workers, "Worker threads (default: all cores)");
  app.add_option("--seed", o.seed, "Seed recorded in artifacts and used for fold assignment");
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

  auto* extract = app.add_subcommand("extract", "Compute the feature CSV");
  adscreen::cli::ExtractOptions ex;
  std::string ex_output, ex_model;
  extract->add_option("--audio-dir", o.audio_dir, "Directory of <id>.wav files");
  extract->add_option("--segmentation-dir", o.segmentation_dir, "Directory of <id>.csv files");
  extract->add_option("--transcript-dir", o.transcript_dir, "Directory of <id>.jsonl files");
  extract->add_option("--metadata", o.metadata, "CSV with id,label[,mmse]");
  extract->add_option("--stopwords", o.stopwords, "Stopword list, one word per line");
  extract->add_option("-k,--vocabulary-size", o.vocabulary_size, "Lexical vocabulary size");
  extract->add_option("-o,--output", ex_output, "Feature CSV to write")->required();
  extract->add_option("--model", ex_model, "Reuse the vocabulary frozen in this model")
      ->check(CLI::ExistingFile);
  extract->add_flag("--strict", ex.strict, "Fail when any participant is skipped");

  auto* train = app.add_subcommand("train", "Cross-validate and fit the SVM");
  adscreen::cli::TrainOptions tr;
  std::string tr_features, tr_model, tr_report;
  train->add_option("-f,--features", tr_features, "Feature CSV")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("-m,--model", tr_model, "Model file to write")->required();
  train->add_option("-r,--report", tr_report, "Cross-validation report JSON");
  train->add_option("--folds", o.folds, "Cross-validation folds (0 skips cross-validation)");
  train->add_option("--kernel", o.kernel, "linear or rbf");
  train->add_option("-C,--C", o.c, "Soft-margin penalty");
  train->add_option("--gamma", o.gamma, "RBF width or 'scale'");

  auto* predict = app.add_subcommand("predict", "Score a feature CSV with a trained model");
  adscreen::cli::PredictOptions pr;
  std::string pr_model, pr_features, pr_output;
  predict->add_option("-m,--model", pr_model, "Model file")->required()->check(CLI::ExistingFile);
  predict->add_option("-f,--features", pr_features, "Feature CSV")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("-o,--output", pr_output, "Predictions CSV (default: stdout)");

  auto* wer = app.add_subcommand("wer", "Score hypothesis transcripts against references");
  adscreen::cli::WerOptions wr;
  std::string wr_ref, wr_hyp, wr_output;
  wer->add_option("--ref", wr_ref, "Reference transcript directory")->required();
  wer->add_option("--hyp", wr_hyp, "Hypothesis transcript directory")->required();
  wer->add_option("--metadata", o.metadata, "CSV with id,label[,mmse]");
  wer->add_option("--speaker", wr.speaker, "Speaker whose turns are scored; empty for all");
  wer->add_flag("--drop-fillers", wr.drop_fillers, "Remove pause fillers before scoring");
  wer->add_option("-o,--output", wr_output, "Report JSON (default: stdout)");

  auto* show = app.add_subcommand("config", "Print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const auto level = spdlog::level::from_str(log_level);
    if (level == spdlog::level::off && log_level != "off") {
      throw adscreen::InputError("unknown --log-level " + log_level);
    }
    spdlog::set_level(level);

    const PipelineConfig config = effective_config(o);
    if (extract->parsed()) {
      ex.config = config;
      ex.output = ex_output;
      ex.model = ex_model;
      adscreen::cli::run_extract(ex);
    } else if (train->parsed()) {
      tr.config = config;
      tr.features = tr_features;
      tr.model = tr_model;
      tr.report = tr_report;
      if (auto report = adscreen::cli::run_train(tr)) {
        std::cout << adscreen::cv_report_table(*report);
      }
    } else if (predict->parsed()) {
      pr.model = pr_model;
      pr.features = pr_features;
      pr.output = pr_output;
      adscreen::cli::run_predict(pr);
    } else if (wer->parsed()) {
      wr.config = config;
      wr.reference_dir = wr_ref;
      wr.hypothesis_dir = wr_hyp;
      wr.metadata = config.metadata;
      wr.output = wr_output;
      adscreen::cli::run_wer(wr);
    } else if (show->parsed()) {
      std::cout << adscreen::cli::config_to_json(config);
    }
  } catch (const adscreen::InputError& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::critical("internal error: {}", e.what());
    return 2;
  }
  return 0;
}
