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

#include "adscreen/lexical.h"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "adscreen/error.h"

namespace adscreen {

namespace {

bool word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') ||
         (u >= 'A' && u <= 'Z');
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<const TranscriptTurn*> Transcript::turns_of(std::string_view speaker) const {
  std::vector<const TranscriptTurn*> out;
  for (const auto& t : turns) {
    if (t.speaker == speaker) out.push_back(&t);
  }
  return out;
}

Transcript parse_transcript_jsonl(std::string_view text, std::string id) {
  Transcript t;
  t.id = std::move(id);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "transcript line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("turn") || !j.contains("speaker") || !j.contains("text") ||
        !j["turn"].is_number_integer() || !j["speaker"].is_string() || !j["text"].is_string()) {
      throw InputError(where + ": expected {\"turn\": int, \"speaker\": str, \"text\": str}");
    }
    TranscriptTurn turn;
    turn.turn_index = j["turn"].get<int>();
    turn.speaker = j["speaker"].get<std::string>();
    turn.text = j["text"].get<std::string>();
    if (!t.turns.empty() && turn.turn_index <= t.turns.back().turn_index) {
      throw InputError(where + ": turn indices must be strictly increasing");
    }
    t.turns.push_back(std::move(turn));
  }
  return t;
}

Transcript read_transcript(const std::filesystem::path& path) {
  try {
    return parse_transcript_jsonl(read_text(path), path.stem().string());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (word_char(c)) {
      cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    } else if (c == '\'' && !cur.empty() && i + 1 < text.size() && word_char(text[i + 1])) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

StopwordSet parse_stopwords(std::string_view text) {
  StopwordSet out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    for (auto& w : tokenize(line.substr(start))) out.insert(std::move(w));
  }
  return out;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  return parse_stopwords(read_text(path));
}

std::string stopword_hash(const StopwordSet& words) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  bool first = true;
  for (const auto& w : words) {  // std::set iterates in sorted order
    if (!first) feed('\n');
    first = false;
    for (char c : w) feed(static_cast<unsigned char>(c));
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
    h >>= 4;
  }
  return out;
}

std::vector<std::string> Vocabulary::column_names() const {
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (i < words.size()) {
      out.push_back("lex_" + words[i]);
    } else {
      std::string idx = std::to_string(i);
      if (idx.size() < 2) idx.insert(0, "0");
      out.push_back("lex_slot" + idx);
    }
  }
  return out;
}

Vocabulary build_vocabulary(std::span<const Transcript> corpus, const StopwordSet& stopwords,
                            std::size_t k) {
  if (k == 0) throw InputError("vocabulary size must be at least 1");
  std::map<std::string, std::size_t> counts;
  for (const auto& t : corpus) {
    for (const auto* turn : t.turns_of(kParticipantSpeaker)) {
      for (auto& tok : tokenize(turn->text)) {
        if (!stopwords.contains(tok)) ++counts[std::move(tok)];
      }
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocabulary v;
  v.k = k;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    v.words.push_back(ranked[i].first);
    v.counts.push_back(ranked[i].second);
  }
  if (v.words.empty()) {
    spdlog::warn("vocabulary is empty: every participant token is a stopword");
  } else if (v.words.size() < k) {
    spdlog::warn("only {} distinct keywords for {} vocabulary slots", v.words.size(), k);
  }
  return v;
}

int max_participant_turns(std::span<const Transcript> corpus) {
  std::size_t best = 0;
  for (const auto& t : corpus) best = std::max(best, t.turns_of(kParticipantSpeaker).size());
  return static_cast<int>(best);
}

int first_participant_turn(const Transcript& t, std::string_view word) {
  int ordinal = 0;
  for (const auto* turn : t.turns_of(kParticipantSpeaker)) {
    for (const auto& tok : tokenize(turn->text)) {
      if (tok == word) return ordinal;
    }
    ++ordinal;
  }
  return -1;
}

std::vector<double> first_occurrence_scores(const Transcript& t, const Vocabulary& vocab,
                                            int max_turns) {
  if (max_turns < 1) throw InputError("max_turns must be at least 1");
  std::unordered_map<std::string, int> first;
  int ordinal = 0;
  for (const auto* turn : t.turns_of(kParticipantSpeaker)) {
    for (auto& tok : tokenize(turn->text)) first.try_emplace(std::move(tok), ordinal);
    ++ordinal;
  }
  std::vector<double> scores(vocab.k, 0.0);
  const auto max_d = static_cast<double>(max_turns);
  for (std::size_t i = 0; i < vocab.words.size() && i < vocab.k; ++i) {
    auto it = first.find(vocab.words[i]);
    if (it == first.end()) continue;
    scores[i] = 1.0 - std::min(static_cast<double>(it->second), max_d) / max_d;
  }
  return scores;
}

std::vector<double> interviewer_turn_feature(std::span<const Transcript> split) {
  std::vector<double> counts;
  counts.reserve(split.size());
  for (const auto& t : split) {
    counts.push_back(static_cast<double>(t.turns_of(kInterviewerSpeaker).size()));
  }
  std::vector<double> out(counts.size(), 0.0);
  if (counts.empty()) return out;
  auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  const double min = *lo, max = *hi;
  if (max == min) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = (counts[i] - min) / (max - min);
  return out;
}

}  // namespace adscreen
