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

#include "commands.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "adscreen/aggregate.h"
#include "adscreen/audio_io.h"
#include "adscreen/csv.h"
#include "adscreen/error.h"
#include "adscreen/lexical.h"
#include "adscreen/wer.h"

namespace adscreen::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed: " + path.string());
}

void emit(const fs::path& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

std::string provenance_line(const std::string& hash, std::uint64_t seed) {
  return "# adscreen config_hash=" + hash + " seed=" + std::to_string(seed) + "\n";
}

void require_dir(const fs::path& dir, const char* what) {
  if (dir.empty()) throw InputError(std::string("missing ") + what);
  if (!fs::is_directory(dir)) throw InputError(std::string(what) + " not found: " + dir.string());
}

std::set<std::string> stems_with(const fs::path& dir, std::string_view ext) {
  std::set<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      out.insert(entry.path().stem().string());
    }
  }
  return out;
}

struct Participant {
  std::string id;
  std::optional<std::string> skip_reason;
  AcousticFeatureVector acoustic;
  Transcript transcript;
};

void process(Participant& p, const PipelineConfig& config) {
  const fs::path wav = config.audio_dir / (p.id + ".wav");
  const fs::path seg = config.segmentation_dir / (p.id + ".csv");
  const fs::path txt = config.transcript_dir / (p.id + ".jsonl");
  for (const auto& f : {wav, seg, txt}) {
    if (!fs::is_regular_file(f)) {
      p.skip_reason = "missing " + f.string();
      return;
    }
  }
  try {
    p.transcript = read_transcript(txt);
    const Waveform w = read_wav(wav);
    const auto labels = parse_segmentation(seg);
    std::vector<AcousticFeatureVector> vectors;
    for (const auto& segment : slice_segments(w, labels, kParticipantSpeaker)) {
      if (auto v = extract_segment_features(segment, config.extraction)) {
        vectors.push_back(*v);
      }
    }
    p.acoustic = aggregate_participant(vectors);
  } catch (const InputError& e) {
    p.skip_reason = e.what();
  }
}

json lexicon_json(const Vocabulary& vocab, int max_turns, const std::string& stop_hash,
                  const std::string& hash, std::uint64_t seed) {
  json j;
  j["format"] = "adscreen-lexicon";
  j["version"] = 1;
  j["config_hash"] = hash;
  j["seed"] = seed;
  j["k"] = vocab.k;
  j["words"] = vocab.words;
  j["counts"] = vocab.counts;
  j["max_turns"] = max_turns;
  j["stopword_hash"] = stop_hash;
  return j;
}

}  // namespace

LabeledDataset FeatureTable::labeled() const {
  std::vector<std::string> missing;
  LabeledDataset d;
  d.ids = ids;
  d.columns = columns;
  d.features = features;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (labels[i]) {
      d.labels.push_back(*labels[i]);
    } else {
      missing.push_back(ids[i]);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw InputError("unlabeled rows: " + list);
  }
  return d;
}

FeatureTable read_feature_csv(const fs::path& path) {
  const std::string text = read_file(path);
  FeatureTable t;
  bool header_seen = false;
  std::size_t line_no = 0;
  for (const auto& line : csv::lines(text)) {
    ++line_no;
    if (line.front() == '#') continue;
    auto fields = csv::split_row(line);
    if (!header_seen) {
      if (fields.size() < 3 || fields[0] != "id" || fields[1] != "label") {
        throw InputError(path.string() + ": header must start with id,label");
      }
      t.columns.assign(fields.begin() + 2, fields.end());
      t.features = Matrix(0, t.columns.size());
      header_seen = true;
      continue;
    }
    const std::string where = path.string() + " line " + std::to_string(line_no);
    if (fields.size() != t.columns.size() + 2) {
      throw InputError(where + ": expected " + std::to_string(t.columns.size() + 2) +
                       " fields, got " + std::to_string(fields.size()));
    }
    t.ids.push_back(fields[0]);
    if (fields[1].empty()) {
      t.labels.emplace_back();
    } else {
      auto label = parse_label(fields[1]);
      if (!label) throw InputError(where + ": bad label '" + fields[1] + "'");
      t.labels.push_back(label);
    }
    std::vector<double> row(t.columns.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!csv::parse_double(fields[c + 2], row[c])) {
        throw InputError(where + ": bad value in column " + t.columns[c]);
      }
    }
    t.features.append_row(row);
  }
  if (!header_seen) throw InputError(path.string() + ": empty feature file");
  return t;
}

std::map<std::string, ParticipantInfo> read_metadata(const fs::path& path) {
  std::map<std::string, ParticipantInfo> out;
  std::size_t line_no = 0;
  for (const auto& line : csv::lines(read_file(path))) {
    ++line_no;
    if (line.front() == '#') continue;
    auto fields = csv::split_row(line);
    if (line_no == 1 && fields[0] == "id") continue;
    const std::string where = path.string() + " line " + std::to_string(line_no);
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty()) {
      throw InputError(where + ": expected id,label[,mmse]");
    }
    ParticipantInfo info;
    if (!fields[1].empty()) {
      info.label = parse_label(fields[1]);
      if (!info.label) throw InputError(where + ": bad label '" + fields[1] + "'");
    }
    if (fields.size() == 3 && !fields[2].empty()) {
      double v = 0.0;
      if (!csv::parse_double(fields[2], v)) throw InputError(where + ": bad mmse");
      info.mmse = v;
    }
    if (!out.emplace(fields[0], info).second) {
      throw InputError(where + ": duplicate id " + fields[0]);
    }
  }
  return out;
}

fs::path lexicon_path(const fs::path& features_csv) {
  return fs::path(features_csv.string() + ".lexicon.json");
}

ExtractSummary run_extract(const ExtractOptions& options) {
  const PipelineConfig& config = options.config;
  validate(config);
  require_dir(config.audio_dir, "audio directory");
  require_dir(config.segmentation_dir, "segmentation directory");
  require_dir(config.transcript_dir, "transcript directory");
  if (options.output.empty()) throw InputError("missing output path");

  std::map<std::string, ParticipantInfo> metadata;
  if (!config.metadata.empty()) metadata = read_metadata(config.metadata);

  std::set<std::string> ids = stems_with(config.audio_dir, ".wav");
  ids.merge(stems_with(config.transcript_dir, ".jsonl"));
  for (const auto& [id, info] : metadata) ids.insert(id);
  if (ids.empty()) throw InputError("no participants found");

  std::vector<Participant> people;
  for (const auto& id : ids) people.push_back({id, std::nullopt, {}, {}});

  // Workers claim participants by index; results land in their own slot so
  // the output order never depends on scheduling.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < people.size(); i = next++) process(people[i], config);
  };
  const unsigned threads =
      std::min<unsigned>(config.resolved_workers(), static_cast<unsigned>(people.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ExtractSummary summary;
  std::vector<const Participant*> kept;
  for (const auto& p : people) {
    if (p.skip_reason) {
      spdlog::warn("participant {}: {}; skipped", p.id, *p.skip_reason);
      summary.skipped.push_back(p.id);
    } else {
      kept.push_back(&p);
    }
  }
  if (options.strict && !summary.skipped.empty()) {
    throw InputError(std::to_string(summary.skipped.size()) +
                     " participant(s) skipped in strict mode, first: " + summary.skipped.front());
  }
  if (kept.empty()) throw InputError("no participant could be processed");

  std::vector<Transcript> transcripts;
  for (const auto* p : kept) transcripts.push_back(p->transcript);

  const StopwordSet stopwords =
      config.stopwords.empty() ? default_stopwords() : load_stopwords(config.stopwords);
  const std::string stop_hash = stopword_hash(stopwords);
  Vocabulary vocab;
  int max_turns = 1;
  if (!options.model.empty()) {
    const ModelArtifact model = model_from_json(read_file(options.model));
    vocab = model.vocabulary;
    max_turns = model.max_turns;
    if (model.stopword_hash != stop_hash) {
      spdlog::warn("stopword list differs from the one used to train {}", options.model.string());
    }
  } else {
    vocab = build_vocabulary(transcripts, stopwords, config.vocabulary_size);
    max_turns = std::max(1, max_participant_turns(transcripts));
  }
  const std::vector<double> inv = interviewer_turn_feature(transcripts);

  const std::string hash = config_hash(config);
  std::string out = provenance_line(hash, config.seed);
  out += "id,label";
  for (auto name : acoustic_field_names()) out += "," + std::string(name);
  for (const auto& name : vocab.column_names()) out += "," + name;
  out += "," + std::string(kInvTurnsColumn) + "\n";
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const Participant& p = *kept[i];
    out += p.id + ",";
    if (auto it = metadata.find(p.id); it != metadata.end() && it->second.label) {
      out += label_name(*it->second.label);
    }
    for (double v : p.acoustic.values) out += "," + csv::format_double(v);
    for (double v : first_occurrence_scores(p.transcript, vocab, max_turns)) {
      out += "," + csv::format_double(v);
    }
    out += "," + csv::format_double(inv[i]) + "\n";
  }
  write_file(options.output, out);
  write_file(lexicon_path(options.output),
             lexicon_json(vocab, max_turns, stop_hash, hash, config.seed).dump(2) + "\n");
  summary.rows = kept.size();
  spdlog::info("wrote {} rows to {}", summary.rows, options.output.string());
  return summary;
}

std::optional<CvReport> run_train(const TrainOptions& options) {
  const PipelineConfig& config = options.config;
  validate(config);
  if (options.model.empty()) throw InputError("missing model output path");
  const LabeledDataset data = read_feature_csv(options.features).labeled();
  if (data.size() == 0) throw InputError("no rows in " + options.features.string());

  const std::string hash = config_hash(config);
  std::optional<CvReport> report;
  if (config.folds > 0) {
    report = cross_validate(data, config.svm, config.folds, config.seed,
                            config.resolved_workers());
  }

  ModelArtifact model = train_model(data, config.svm);
  model.config_hash = hash;
  model.seed = config.seed;
  const fs::path lex = lexicon_path(options.features);
  if (fs::is_regular_file(lex)) {
    try {
      const json j = json::parse(read_file(lex));
      model.vocabulary.k = j.at("k").get<std::size_t>();
      model.vocabulary.words = j.at("words").get<std::vector<std::string>>();
      model.vocabulary.counts = j.at("counts").get<std::vector<std::size_t>>();
      model.max_turns = j.at("max_turns").get<int>();
      model.stopword_hash = j.at("stopword_hash").get<std::string>();
    } catch (const json::exception& e) {
      throw InputError(lex.string() + ": " + e.what());
    }
  } else {
    spdlog::warn("no lexicon next to {}; the model will not carry a vocabulary",
                 options.features.string());
  }
  write_file(options.model, model_to_json(model));

  if (!options.report.empty()) {
    json j;
    j["format"] = "adscreen-cv-report";
    j["config_hash"] = hash;
    j["seed"] = config.seed;
    j["rows"] = data.size();
    j["cross_validation"] = report ? json::parse(cv_report_to_json(*report)) : json(nullptr);
    write_file(options.report, j.dump(2) + "\n");
  }
  return report;
}

PredictSummary run_predict(const PredictOptions& options) {
  const ModelArtifact model = model_from_json(read_file(options.model));
  const FeatureTable table = read_feature_csv(options.features);
  const auto& want = model.feature_names;
  const std::size_t n = std::max(want.size(), table.columns.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::string expected = i < want.size() ? want[i] : "<none>";
    const std::string got = i < table.columns.size() ? table.columns[i] : "<none>";
    if (expected != got) {
      throw InputError("feature column mismatch at position " + std::to_string(i + 1) +
                       ": model expects '" + expected + "', file has '" + got + "'");
    }
  }

  PredictSummary summary;
  summary.ids = table.ids;
  summary.predictions = predict(model, table.features);
  std::string out = provenance_line(model.config_hash, model.seed);
  out += "id,prediction,decision_value\n";
  std::size_t correct = 0;
  bool all_labeled = !table.ids.empty();
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    const auto& p = summary.predictions[i];
    out += table.ids[i] + "," + std::string(label_name(p.label)) + "," +
           csv::format_double(p.decision_value) + "\n";
    if (!table.labels[i]) {
      all_labeled = false;
    } else if (*table.labels[i] == p.label) {
      ++correct;
    }
  }
  if (all_labeled) {
    summary.accuracy = static_cast<double>(correct) / static_cast<double>(table.ids.size());
    spdlog::info("accuracy on labeled rows: {:.4f}", *summary.accuracy);
  }
  emit(options.output, out);
  return summary;
}

const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> kFillers = {"ah", "er",  "erm", "hmm",
                                                    "hum", "mm", "uh",  "um"};
  return kFillers;
}

std::string run_wer(const WerOptions& options) {
  require_dir(options.reference_dir, "reference directory");
  require_dir(options.hypothesis_dir, "hypothesis directory");
  std::map<std::string, ParticipantInfo> metadata;
  if (!options.metadata.empty()) metadata = read_metadata(options.metadata);

  const auto refs = stems_with(options.reference_dir, ".jsonl");
  const auto hyps = stems_with(options.hypothesis_dir, ".jsonl");
  if (refs.empty()) throw InputError("no participants found");

  auto words_of = [&](const fs::path& path) {
    const Transcript t = read_transcript(path);
    std::vector<std::string> words;
    for (const auto& turn : t.turns) {
      if (!options.speaker.empty() && turn.speaker != options.speaker) continue;
      for (auto& tok : tokenize(turn.text)) {
        if (options.drop_fillers && std::find(filler_words().begin(), filler_words().end(),
                                              tok) != filler_words().end()) {
          continue;
        }
        words.push_back(std::move(tok));
      }
    }
    return words;
  };

  std::vector<SpeakerPair> pairs;
  json missing = json::array();
  for (const auto& id : refs) {
    if (!hyps.count(id)) {
      spdlog::warn("{}: no hypothesis transcript", id);
      missing.push_back({{"id", id}, {"missing", "hypothesis"}});
      continue;
    }
    SpeakerPair p;
    p.id = id;
    p.reference = words_of(options.reference_dir / (id + ".jsonl"));
    p.hypothesis = words_of(options.hypothesis_dir / (id + ".jsonl"));
    if (auto it = metadata.find(id); it != metadata.end() && it->second.label) {
      p.label = std::string(label_name(*it->second.label));
    }
    pairs.push_back(std::move(p));
  }
  for (const auto& id : hyps) {
    if (!refs.count(id)) {
      spdlog::warn("{}: no reference transcript", id);
      missing.push_back({{"id", id}, {"missing", "reference"}});
    }
  }

  const WerReport report = corpus_wer(pairs);
  json j;
  j["format"] = "adscreen-wer-report";
  j["config_hash"] = config_hash(options.config);
  j["seed"] = options.config.seed;
  j["speaker"] = options.speaker;
  j["drop_fillers"] = options.drop_fillers;
  j["corpus_wer"] = report.corpus_wer;
  j["mean_speaker_wer"] = report.mean_speaker_wer;
  j["group_mean_wer"] = json::object();
  for (const auto& [label, v] : report.group_mean_wer) j["group_mean_wer"][label] = v;
  json speakers = json::array();
  std::vector<double> wers, mmse;
  for (const auto& s : report.speakers) {
    json row = {{"id", s.id},
                {"wer", s.wer},
                {"substitutions", s.counts.substitutions},
                {"deletions", s.counts.deletions},
                {"insertions", s.counts.insertions},
                {"reference_words", s.counts.reference_words}};
    row["label"] = s.label ? json(*s.label) : json(nullptr);
    auto it = metadata.find(s.id);
    if (it != metadata.end() && it->second.mmse) {
      row["mmse"] = *it->second.mmse;
      wers.push_back(s.wer);
      mmse.push_back(*it->second.mmse);
    }
    speakers.push_back(std::move(row));
  }
  j["speakers"] = std::move(speakers);
  j["missing"] = std::move(missing);
  j["mmse_correlation"] = nullptr;
  if (wers.size() >= 3) {
    try {
      const Correlation c = correlate(mmse, wers);
      j["mmse_correlation"] = {{"pearson_r", c.r}, {"p_value", c.p_value}, {"n", c.n}};
    } catch (const InputError& e) {
      spdlog::warn("mmse correlation skipped: {}", e.what());
    }
  }
  const std::string text = j.dump(2) + "\n";
  emit(options.output, text);
  return text;
}

}  // namespace adscreen::cli
