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

#ifndef ADSCREEN_TESTS_FIXTURE_H_
#define ADSCREEN_TESTS_FIXTURE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adscreen/audio_io.h"
#include "adscreen/classify.h"
#include "adscreen/lexical.h"

namespace adscreen::testing {

struct FixtureParticipant {
  std::string id;
  std::optional<Label> label;
  std::optional<double> mmse;
  Waveform audio;
  std::vector<SegmentLabel> segments;
  std::vector<TranscriptTurn> turns;
};

// A few seconds of interviewer and participant speech plus a short picture
// description. AD participants speak slower, pause longer and mention the
// key words later.
FixtureParticipant synthetic_participant(const std::string& id, Label label,
                                         std::uint64_t seed);

std::string transcript_jsonl(const std::vector<TranscriptTurn>& turns);

// Writes <root>/audio/<id>.wav, <root>/segmentation/<id>.csv,
// <root>/transcripts/<id>.jsonl and <root>/metadata.csv.
void write_cohort(const std::filesystem::path& root,
                  const std::vector<FixtureParticipant>& cohort);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& path);
void spit(const std::filesystem::path& path, const std::string& text);

}  // namespace adscreen::testing

#endif  // ADSCREEN_TESTS_FIXTURE_H_
