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

#include "fixture.h"

#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adscreen/csv.h"
#include "synth.h"

namespace adscreen::testing {

namespace fs = std::filesystem;

FixtureParticipant synthetic_participant(const std::string& id, Label label,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const bool ad = label == Label::kAD;

  FixtureParticipant p;
  p.id = id;
  p.label = label;
  p.mmse = ad ? 14.0 + 8.0 * u(rng) : 26.0 + 4.0 * u(rng);

  const double f0 = (ad ? 140.0 : 170.0) + 20.0 * u(rng);
  const double gap = ad ? 0.35 + 0.1 * u(rng) : 0.12 + 0.05 * u(rng);
  const int syllables = ad ? 3 : 5;
  Waveform inv = vowel(210.0, 0.6, 0.4, 0.0, seed + 11);
  Waveform par;
  par.sample_rate = kRate;
  for (int s = 0; s < syllables; ++s) {
    const double jitter = ad ? 0.02 : 0.005;
    const Waveform v = vowel(f0 * (1.0 + 0.05 * (u(rng) - 0.5)), 0.18, 0.5, jitter,
                             seed * 31 + static_cast<std::uint64_t>(s));
    const Waveform pause = silence(gap);
    par.samples.insert(par.samples.end(), v.samples.begin(), v.samples.end());
    par.samples.insert(par.samples.end(), pause.samples.begin(), pause.samples.end());
  }
  const Waveform lead = silence(0.1);
  p.audio = concat({lead, inv, silence(0.1), par, silence(0.1), inv, silence(0.1), par});
  const double t_inv = 0.1, d_inv = inv.duration(), d_par = par.duration();
  const double t_par1 = t_inv + d_inv + 0.1;
  const double t_inv2 = t_par1 + d_par + 0.1;
  const double t_par2 = t_inv2 + d_inv + 0.1;
  p.segments = {{"INV", t_inv, t_inv + d_inv},
                {"PAR", t_par1, t_par1 + d_par},
                {"INV", t_inv2, t_inv2 + d_inv},
                {"PAR", t_par2, t_par2 + d_par}};

  const std::vector<std::string> filler = {"well", "there is a", "i see the", "and then",
                                           "what else", "oh"};
  const std::vector<std::string> keys = {"cookie", "boy", "jar", "stool", "sink", "water"};
  const int turns = ad ? 8 : 6;
  const int key_start = ad ? 3 : 0;  // first turn that mentions key words
  int turn_index = 0;
  for (int t = 0; t < turns; ++t) {
    p.turns.push_back({turn_index++, "INV", "tell me what you see"});
    std::string text = filler[static_cast<std::size_t>(t) % filler.size()];
    if (t >= key_start) {
      text += " " + keys[static_cast<std::size_t>(t - key_start) % keys.size()];
      text += " " + keys[static_cast<std::size_t>(t - key_start + 1) % keys.size()];
    }
    p.turns.push_back({turn_index++, "PAR", text});
  }
  return p;
}

std::string transcript_jsonl(const std::vector<TranscriptTurn>& turns) {
  std::string out;
  for (const auto& t : turns) {
    nlohmann::ordered_json j = {{"turn", t.turn_index}, {"speaker", t.speaker}, {"text", t.text}};
    out += j.dump() + "\n";
  }
  return out;
}

void write_cohort(const fs::path& root, const std::vector<FixtureParticipant>& cohort) {
  fs::create_directories(root / "audio");
  fs::create_directories(root / "segmentation");
  fs::create_directories(root / "transcripts");
  std::string meta = "id,label,mmse\n";
  for (const auto& p : cohort) {
    write_wav(root / "audio" / (p.id + ".wav"), p.audio);
    spit(root / "segmentation" / (p.id + ".csv"), serialize_segmentation(p.segments));
    spit(root / "transcripts" / (p.id + ".jsonl"), transcript_jsonl(p.turns));
    meta += p.id + "," + (p.label ? std::string(label_name(*p.label)) : "") + "," +
            (p.mmse ? csv::format_double(*p.mmse) : "") + "\n";
  }
  spit(root / "metadata.csv", meta);
}

TempDir::TempDir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  path_ = fs::temp_directory_path() / ("adscreen-" + tag + "-" + std::to_string(rng()));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace adscreen::testing
