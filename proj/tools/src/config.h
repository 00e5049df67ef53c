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

#ifndef ADSCREEN_TOOLS_CONFIG_H_
#define ADSCREEN_TOOLS_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "adscreen/aggregate.h"
#include "adscreen/classify.h"

namespace adscreen::cli {

struct PipelineConfig {
  static constexpr int kVersion = 1;

  std::filesystem::path audio_dir;
  std::filesystem::path segmentation_dir;
  std::filesystem::path transcript_dir;
  std::filesystem::path metadata;   // id,label[,mmse]
  std::filesystem::path stopwords;  // empty: built-in English list
  ExtractionConfig extraction;
  std::size_t vocabulary_size = kDefaultVocabularySize;
  SvmParams svm;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency

  unsigned resolved_workers() const;
};

// Parses a versioned config document. Unknown keys and wrong types are
// rejected with InputError naming the key.
PipelineConfig config_from_json(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const PipelineConfig& config);

// Hash of the analysis parameters. Paths and the worker count are left out
// so relocating the data or changing parallelism keeps artifacts identical.
std::string config_hash(const PipelineConfig& config);

void validate(const PipelineConfig& config);

std::string fnv1a_hex(std::string_view bytes);

}  // namespace adscreen::cli

#endif  // ADSCREEN_TOOLS_CONFIG_H_
