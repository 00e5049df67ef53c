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

#ifndef ADSCREEN_LEXICAL_H_
#define ADSCREEN_LEXICAL_H_

#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adscreen {

inline constexpr std::string_view kParticipantSpeaker = "PAR";
inline constexpr std::string_view kInterviewerSpeaker = "INV";
inline constexpr std::size_t kDefaultVocabularySize = 50;

struct TranscriptTurn {
  int turn_index = 0;
  std::string speaker;
  std::string text;
};

struct Transcript {
  std::string id;
  std::vector<TranscriptTurn> turns;

  // Turns spoken by `speaker`, in order.
  std::vector<const TranscriptTurn*> turns_of(std::string_view speaker) const;
};

// One JSON object per line: {"turn": int, "speaker": str, "text": str}.
// Blank lines are skipped. Turn indices must be strictly increasing.
Transcript parse_transcript_jsonl(std::string_view text, std::string id = {});
Transcript read_transcript(const std::filesystem::path& path);

// Lower-cased ASCII; splits on anything that is not a letter, digit or byte
// >= 0x80, except an apostrophe with word characters on both sides.
std::vector<std::string> tokenize(std::string_view text);

using StopwordSet = std::set<std::string>;

// Built-in English function-word list (same content as
// data/stopwords_en.txt).
const StopwordSet& default_stopwords();
// One word per line; '#' starts a comment line.
StopwordSet load_stopwords(const std::filesystem::path& path);
StopwordSet parse_stopwords(std::string_view text);
// FNV-1a 64 of the sorted words joined by '\n', as 16 hex digits.
std::string stopword_hash(const StopwordSet& words);

struct Vocabulary {
  std::vector<std::string> words;   // at most k, by descending count
  std::vector<std::size_t> counts;  // aligned with words
  std::size_t k = kDefaultVocabularySize;

  // k names: "lex_<word>" for filled slots, "lex_slot<NN>" for padding.
  std::vector<std::string> column_names() const;
};

// Counts non-stopword tokens over participant turns and keeps the k most
// frequent, ties broken lexicographically. Fewer than k distinct words
// leaves the remaining slots empty (they always score 0).
Vocabulary build_vocabulary(std::span<const Transcript> corpus,
                            const StopwordSet& stopwords, std::size_t k);

// Largest number of participant turns in any transcript.
int max_participant_turns(std::span<const Transcript> corpus);

// 0-based ordinal of the first participant turn containing `word`, or -1.
int first_participant_turn(const Transcript& t, std::string_view word);

// Per vocabulary slot: 1 - min(turn, max_turns) / max_turns, where turn is
// the first participant turn containing the word (absent words score 0).
// Always returns vocab.k values.
std::vector<double> first_occurrence_scores(const Transcript& t,
                                            const Vocabulary& vocab,
                                            int max_turns);

// Interviewer turn counts min-max normalised over the given split. When all
// counts are equal every participant gets 0.
std::vector<double> interviewer_turn_feature(std::span<const Transcript> split);

struct LexicalFeatureVector {
  std::vector<double> scores;
  double inv_turns_norm = 0.0;
};

inline constexpr std::string_view kInvTurnsColumn = "inv_turns_norm";

}  // namespace adscreen

#endif  // ADSCREEN_LEXICAL_H_
