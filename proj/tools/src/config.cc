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

#include "config.h"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "adscreen/error.h"

namespace adscreen::cli {

namespace {

using json = nlohmann::ordered_json;

// Rejects keys outside `allowed` so typos do not silently fall back to
// defaults.
void check_keys(const json& obj, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw InputError("config: " + std::string(where) + " must be an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw InputError("config: unknown key " + std::string(where) + "." + item.key());
    }
  }
}

template <typename T>
void read(const json& obj, std::string_view where, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError("config: wrong type for " + std::string(where) + "." + key);
  }
}

void read_path(const json& obj, const char* key, std::filesystem::path& out) {
  std::string s;
  read(obj, "paths", key, s);
  if (!s.empty()) out = s;
}

json analysis_json(const PipelineConfig& c) {
  const auto& p = c.extraction.pitch;
  const auto& in = c.extraction.intensity;
  const auto& r = c.extraction.rhythm;
  json j;
  j["version"] = PipelineConfig::kVersion;
  j["pitch"] = {{"floor", p.floor},
                {"ceiling", p.ceiling},
                {"time_step", p.time_step},
                {"window_length", p.window_length},
                {"voicing_threshold", p.voicing_threshold},
                {"silence_threshold", p.silence_threshold},
                {"octave_cost", p.octave_cost},
                {"octave_jump_cost", p.octave_jump_cost},
                {"voiced_unvoiced_cost", p.voiced_unvoiced_cost},
                {"max_candidates", p.max_candidates}};
  j["intensity"] = {{"time_step", in.time_step}, {"window_length", in.window_length}};
  j["rhythm"] = {{"silence_db", r.silence_db},
                 {"min_dip_db", r.min_dip_db},
                 {"min_pause", r.min_pause}};
  j["lexical"] = {{"vocabulary_size", c.vocabulary_size}};
  json svm = {{"kernel", kernel_name(c.svm.kernel.type)}};
  if (c.svm.kernel.gamma > 0.0) {
    svm["gamma"] = c.svm.kernel.gamma;
  } else {
    svm["gamma"] = "scale";
  }
  svm["C"] = c.svm.c;
  svm["tolerance"] = c.svm.tolerance;
  j["svm"] = svm;
  j["cv"] = {{"folds", c.folds}, {"seed", c.seed}};
  return j;
}

}  // namespace

unsigned PipelineConfig::resolved_workers() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    h >>= 4;
  }
  return out;
}

PipelineConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  check_keys(j, "config",
             {"version", "paths", "pitch", "intensity", "rhythm", "lexical", "svm", "cv", "workers"});
  if (!j.contains("version")) throw InputError("config: missing version");
  int version = 0;
  read(j, "config", "version", version);
  if (version != PipelineConfig::kVersion) {
    throw InputError("config: unsupported version " + std::to_string(version));
  }

  PipelineConfig c;
  if (j.contains("paths")) {
    const auto& p = j["paths"];
    check_keys(p, "paths",
               {"audio_dir", "segmentation_dir", "transcript_dir", "metadata", "stopwords"});
    read_path(p, "audio_dir", c.audio_dir);
    read_path(p, "segmentation_dir", c.segmentation_dir);
    read_path(p, "transcript_dir", c.transcript_dir);
    read_path(p, "metadata", c.metadata);
    read_path(p, "stopwords", c.stopwords);
  }
  if (j.contains("pitch")) {
    const auto& p = j["pitch"];
    auto& pc = c.extraction.pitch;
    check_keys(p, "pitch",
               {"floor", "ceiling", "time_step", "window_length", "voicing_threshold",
                "silence_threshold", "octave_cost", "octave_jump_cost", "voiced_unvoiced_cost",
                "max_candidates"});
    read(p, "pitch", "floor", pc.floor);
    read(p, "pitch", "ceiling", pc.ceiling);
    read(p, "pitch", "time_step", pc.time_step);
    read(p, "pitch", "window_length", pc.window_length);
    read(p, "pitch", "voicing_threshold", pc.voicing_threshold);
    read(p, "pitch", "silence_threshold", pc.silence_threshold);
    read(p, "pitch", "octave_cost", pc.octave_cost);
    read(p, "pitch", "octave_jump_cost", pc.octave_jump_cost);
    read(p, "pitch", "voiced_unvoiced_cost", pc.voiced_unvoiced_cost);
    read(p, "pitch", "max_candidates", pc.max_candidates);
  }
  if (j.contains("intensity")) {
    const auto& p = j["intensity"];
    check_keys(p, "intensity", {"time_step", "window_length"});
    read(p, "intensity", "time_step", c.extraction.intensity.time_step);
    read(p, "intensity", "window_length", c.extraction.intensity.window_length);
  }
  if (j.contains("rhythm")) {
    const auto& p = j["rhythm"];
    check_keys(p, "rhythm", {"silence_db", "min_dip_db", "min_pause"});
    read(p, "rhythm", "silence_db", c.extraction.rhythm.silence_db);
    read(p, "rhythm", "min_dip_db", c.extraction.rhythm.min_dip_db);
    read(p, "rhythm", "min_pause", c.extraction.rhythm.min_pause);
  }
  if (j.contains("lexical")) {
    check_keys(j["lexical"], "lexical", {"vocabulary_size"});
    read(j["lexical"], "lexical", "vocabulary_size", c.vocabulary_size);
  }
  if (j.contains("svm")) {
    const auto& p = j["svm"];
    check_keys(p, "svm", {"kernel", "C", "gamma", "tolerance"});
    if (p.contains("kernel")) {
      std::string name;
      read(p, "svm", "kernel", name);
      auto type = parse_kernel(name);
      if (!type) throw InputError("config: svm.kernel must be \"linear\" or \"rbf\"");
      c.svm.kernel.type = *type;
    }
    if (p.contains("gamma")) {
      if (p["gamma"].is_string()) {
        if (p["gamma"].get<std::string>() != "scale") {
          throw InputError("config: svm.gamma must be a number or \"scale\"");
        }
        c.svm.kernel.gamma = 0.0;
      } else {
        read(p, "svm", "gamma", c.svm.kernel.gamma);
      }
    }
    read(p, "svm", "C", c.svm.c);
    read(p, "svm", "tolerance", c.svm.tolerance);
  }
  if (j.contains("cv")) {
    check_keys(j["cv"], "cv", {"folds", "seed"});
    read(j["cv"], "cv", "folds", c.folds);
    read(j["cv"], "cv", "seed", c.seed);
  }
  read(j, "config", "workers", c.workers);
  validate(c);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  PipelineConfig c = config_from_json(ss.str());
  // Relative paths are taken relative to the config file.
  const auto base = path.parent_path();
  for (auto* p : {&c.audio_dir, &c.segmentation_dir, &c.transcript_dir, &c.metadata,
                  &c.stopwords}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return c;
}

std::string config_to_json(const PipelineConfig& c) {
  json j = analysis_json(c);
  json paths = json::object();
  auto put = [&paths](const char* key, const std::filesystem::path& p) {
    if (!p.empty()) paths[key] = p.string();
  };
  put("audio_dir", c.audio_dir);
  put("segmentation_dir", c.segmentation_dir);
  put("transcript_dir", c.transcript_dir);
  put("metadata", c.metadata);
  put("stopwords", c.stopwords);
  j["paths"] = paths;
  j["workers"] = c.workers;
  return j.dump(2) + "\n";
}

std::string config_hash(const PipelineConfig& config) {
  return fnv1a_hex(analysis_json(config).dump());
}

void validate(const PipelineConfig& c) {
  try {
    c.extraction.pitch.validate();
  } catch (const InputError& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  const auto& in = c.extraction.intensity;
  if (!(in.time_step > 0.0) || !(in.window_length > 0.0)) {
    throw InputError("config: intensity time_step and window_length must be positive");
  }
  const auto& r = c.extraction.rhythm;
  if (!(r.silence_db < 0.0)) throw InputError("config: rhythm.silence_db must be negative");
  if (!(r.min_dip_db >= 0.0)) throw InputError("config: rhythm.min_dip_db must be >= 0");
  if (!(r.min_pause >= 0.0)) throw InputError("config: rhythm.min_pause must be >= 0");
  if (c.vocabulary_size == 0) throw InputError("config: lexical.vocabulary_size must be >= 1");
  if (!(c.svm.c > 0.0)) throw InputError("config: svm.C must be positive");
  if (!(c.svm.tolerance > 0.0)) throw InputError("config: svm.tolerance must be positive");
  if (c.folds == 1) throw InputError("config: cv.folds must be 0 (no cross-validation) or >= 2");
}

}  // namespace adscreen::cli
