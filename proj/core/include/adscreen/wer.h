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

#ifndef ADSCREEN_WER_H_
#define ADSCREEN_WER_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adscreen {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t reference_words = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
  double wer() const;
  bool operator==(const EditCounts&) const = default;
};

// Minimum unit-cost edit alignment. Among alignments with the fewest edits
// the one with the most substitutions (fewest insert/delete pairs) is
// reported. Throws InputError("empty reference") when the reference is empty
// and the hypothesis is not; two empty sequences give WER 0.
EditCounts word_error_rate(std::span<const std::string> reference,
                           std::span<const std::string> hypothesis);

struct SpeakerPair {
  std::string id;
  std::vector<std::string> reference;
  std::vector<std::string> hypothesis;
  std::optional<std::string> label;  // group key, e.g. AD / non-AD
};

struct SpeakerWer {
  std::string id;
  EditCounts counts;
  double wer = 0.0;
  std::optional<std::string> label;
};

struct WerReport {
  std::vector<SpeakerWer> speakers;  // sorted by id
  double corpus_wer = 0.0;           // total errors / total reference words
  double mean_speaker_wer = 0.0;     // unweighted mean of per-speaker WER
  std::map<std::string, double> group_mean_wer;  // unweighted, by label
};

WerReport corpus_wer(std::span<const SpeakerPair> pairs);

struct Correlation {
  double r = 0.0;
  double p_value = 1.0;  // two-sided, t distribution with n - 2 dof
  std::size_t n = 0;
};

// Pearson correlation. Throws InputError for fewer than 3 pairs, mismatched
// lengths or zero variance in either series.
Correlation correlate(std::span<const double> x, std::span<const double> y);

}  // namespace adscreen

#endif  // ADSCREEN_WER_H_
