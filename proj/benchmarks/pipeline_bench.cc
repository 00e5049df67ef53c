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

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "adscreen/aggregate.h"
#include "adscreen/classify.h"
#include "adscreen/pitch.h"
#include "adscreen/wer.h"

namespace adscreen {
namespace {

Waveform tone(double seconds) {
  Waveform w;
  w.sample_rate = 16000;
  w.samples.resize(static_cast<std::size_t>(seconds * w.sample_rate));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 0.01);
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    const double t = static_cast<double>(i) / w.sample_rate;
    w.samples[i] = 0.5 * std::sin(2.0 * std::numbers::pi * 150.0 * t) + g(rng);
  }
  return w;
}

void BM_TrackPitch(benchmark::State& state) {
  const Waveform w = tone(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(track_pitch(w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrackPitch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ExtractSegment(benchmark::State& state) {
  AudioSegment s;
  s.waveform = tone(2.0);
  s.label = {"PAR", 0.0, 2.0};
  const ExtractionConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(extract_segment_features(s, config));
}
BENCHMARK(BM_ExtractSegment)->Unit(benchmark::kMillisecond);

LabeledDataset cohort(std::size_t n, std::size_t features) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  LabeledDataset d;
  d.features = Matrix(0, features);
  for (std::size_t c = 0; c < features; ++c) d.columns.push_back("f" + std::to_string(c));
  for (std::size_t i = 0; i < n; ++i) {
    const Label l = i % 2 ? Label::kAD : Label::kNonAD;
    std::vector<double> row(features);
    for (std::size_t c = 0; c < features; ++c) {
      row[c] = g(rng) + (c < 5 ? (l == Label::kAD ? 0.8 : -0.8) : 0.0);
    }
    d.ids.push_back("s" + std::to_string(i));
    d.features.append_row(row);
    d.labels.push_back(l);
  }
  return d;
}

void BM_TrainModel(benchmark::State& state) {
  const LabeledDataset d = cohort(static_cast<std::size_t>(state.range(0)), 79);
  for (auto _ : state) benchmark::DoNotOptimize(train_model(d, SvmParams{}));
}
BENCHMARK(BM_TrainModel)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_CrossValidate(benchmark::State& state) {
  const LabeledDataset d = cohort(156, 79);
  for (auto _ : state) benchmark::DoNotOptimize(cross_validate(d, SvmParams{}, 10, 1, 1));
}
BENCHMARK(BM_CrossValidate)->Unit(benchmark::kMillisecond);

void BM_WordErrorRate(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> tok(0, 50);
  std::vector<std::string> ref, hyp;
  for (int i = 0; i < state.range(0); ++i) {
    ref.push_back("w" + std::to_string(tok(rng)));
    hyp.push_back("w" + std::to_string(tok(rng)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(word_error_rate(ref, hyp));
}
BENCHMARK(BM_WordErrorRate)->Arg(100)->Arg(1000);

}  // namespace
}  // namespace adscreen

BENCHMARK_MAIN();
