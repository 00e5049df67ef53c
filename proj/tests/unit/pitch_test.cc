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

#include "adscreen/pitch.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "adscreen/error.h"
#include "synth.h"

namespace adscreen {
namespace {

double median_f0(const PitchTrack& t) {
  std::vector<double> f;
  for (const auto& fr : t.frames) {
    if (fr.voiced()) f.push_back(fr.f0);
  }
  if (f.empty()) return 0.0;
  std::nth_element(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(f.size() / 2), f.end());
  return f[f.size() / 2];
}

PitchTrack track_of(std::vector<double> f0s, double step = 0.0033) {
  PitchTrack t;
  t.time_step = step;
  for (std::size_t i = 0; i < f0s.size(); ++i) {
    t.frames.push_back({0.04 + static_cast<double>(i) * step, f0s[i], f0s[i] > 0 ? 0.9 : 0.0});
  }
  return t;
}

TEST(TrackPitch, SineInteriorFramesVoicedAtGeneratorFrequency) {
  const PitchTrack t = track_pitch(testing::sine(220.0, 1.0));
  ASSERT_GT(t.frames.size(), 200u);
  for (std::size_t i = 2; i + 2 < t.frames.size(); ++i) {
    ASSERT_TRUE(t.frames[i].voiced()) << "frame " << i;
    EXPECT_NEAR(t.frames[i].f0, 220.0, 2.0) << "frame " << i;
  }
}

TEST(TrackPitch, FrameGridHasConstantStep) {
  const PitchTrack t = track_pitch(testing::sine(150.0, 0.5));
  for (std::size_t i = 1; i < t.frames.size(); ++i) {
    EXPECT_NEAR(t.frames[i].time - t.frames[i - 1].time, 0.0033, 1e-12);
  }
  EXPECT_GE(t.frames.front().time, 0.04 - 1e-9);
  EXPECT_LE(t.frames.back().time, 0.5 - 0.04 + 1e-9);
}

TEST(TrackPitch, MedianWithinOnePercent) {
  for (double f : {90.0, 120.0, 220.0, 330.0, 500.0}) {
    EXPECT_NEAR(median_f0(track_pitch(testing::sine(f, 1.0))), f, 0.01 * f) << f;
  }
  EXPECT_NEAR(median_f0(track_pitch(testing::vowel(130.0, 1.0))), 130.0, 1.3);
}

TEST(TrackPitch, SilenceIsUnvoiced) {
  const PitchTrack t = track_pitch(testing::silence(1.0));
  ASSERT_FALSE(t.frames.empty());
  EXPECT_EQ(t.voiced_count(), 0u);
}

TEST(TrackPitch, LowNoiseMostlyUnvoiced) {
  const PitchTrack t = track_pitch(testing::noise(1.0, 0.01, 42));
  EXPECT_LE(static_cast<double>(t.voiced_count()), 0.1 * static_cast<double>(t.frames.size()));
}

TEST(TrackPitch, TooShort) {
  try {
    track_pitch(testing::sine(200.0, 0.05));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("audio too short"), std::string::npos);
  }
}

TEST(TrackPitch, AmplitudeInvariant) {
  const Waveform w = testing::mix(testing::vowel(160.0, 0.6, 0.5, 0.01, 3),
                                  testing::noise(0.6, 0.02, 9));
  const PitchTrack base = track_pitch(w);
  for (double gain : {2.0, 0.1}) {
    const PitchTrack t = track_pitch(testing::scaled(w, gain));
    ASSERT_EQ(t.frames.size(), base.frames.size());
    for (std::size_t i = 0; i < t.frames.size(); ++i) {
      EXPECT_EQ(t.frames[i].voiced(), base.frames[i].voiced()) << gain << " frame " << i;
      EXPECT_NEAR(t.frames[i].f0, base.frames[i].f0, 1e-9 * base.frames[i].f0);
    }
  }
}

TEST(TrackPitch, VoicedFramesRespectRange) {
  PitchConfig config;
  config.floor = 100.0;
  config.ceiling = 300.0;
  const PitchTrack t = track_pitch(testing::vowel(140.0, 0.5), config);
  for (const auto& f : t.frames) {
    EXPECT_GE(f.strength, 0.0);
    EXPECT_LE(f.strength, 1.0 + 1e-12);
    if (f.voiced()) {
      EXPECT_GE(f.f0, 100.0);
      EXPECT_LE(f.f0, 300.0);
    }
  }
}

TEST(PitchConfig, RejectsBadRange) {
  PitchConfig c;
  c.floor = 300.0;
  c.ceiling = 200.0;
  EXPECT_THROW(c.validate(), InputError);
}

TEST(F0Statistics, ConstantTrack) {
  const F0Features f = f0_statistics(track_of(std::vector<double>(50, 220.0)));
  EXPECT_NEAR(f.mean_log_f0, std::log10(220.0), 1e-12);
  EXPECT_NEAR(f.mean_log_f0, 2.3424, 1e-4);
  EXPECT_EQ(f.std_log_f0, 0.0);
  EXPECT_EQ(f.range_log_f0, 0.0);
  EXPECT_EQ(f.slope_with_jump_removal, 0.0);
  EXPECT_EQ(f.slope_without_jump_removal, 0.0);
}

TEST(F0Statistics, OctaveJumpExcluded) {
  const F0Features f = f0_statistics(track_of({200.0, 400.0}));
  EXPECT_NEAR(f.range_log_f0, std::log10(2.0), 1e-12);
  EXPECT_NEAR(f.slope_without_jump_removal, std::log10(2.0) / 0.0033, 1e-9);
  EXPECT_NEAR(f.slope_without_jump_removal, 91.2, 0.05);
  EXPECT_EQ(f.slope_with_jump_removal, 0.0);
}

TEST(F0Statistics, SampleStandardDeviation) {
  const F0Features f = f0_statistics(track_of({100.0, 1000.0}));
  EXPECT_NEAR(f.mean_log_f0, 2.5, 1e-12);
  EXPECT_NEAR(f.std_log_f0, std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(f.max_log_f0, 3.0, 1e-12);
  EXPECT_NEAR(f.min_log_f0, 2.0, 1e-12);
}

TEST(F0Statistics, UnvoicedGapBreaksPairs) {
  // 200 -> 210 (adjacent), gap, 300 -> 300: only one pair changes.
  const F0Features f = f0_statistics(track_of({200.0, 210.0, 0.0, 300.0, 300.0}));
  const double change = std::log10(210.0 / 200.0);
  EXPECT_NEAR(f.slope_without_jump_removal, change / (2 * 0.0033), 1e-9);
  EXPECT_NEAR(f.slope_with_jump_removal, change / (2 * 0.0033), 1e-9);
}

TEST(F0Statistics, NoVoicedFrames) {
  EXPECT_THROW(f0_statistics(track_of({0.0, 0.0, 0.0})), InputError);
}

TEST(F0Statistics, OrderFreeStatisticsIgnoreOrder) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(80.0, 400.0);
  std::vector<double> f(40);
  for (auto& v : f) v = u(rng);
  const F0Features a = f0_statistics(track_of(f));
  std::shuffle(f.begin(), f.end(), rng);
  const F0Features b = f0_statistics(track_of(f));
  EXPECT_NEAR(a.mean_log_f0, b.mean_log_f0, 1e-12);
  EXPECT_NEAR(a.std_log_f0, b.std_log_f0, 1e-12);
  EXPECT_EQ(a.max_log_f0, b.max_log_f0);
  EXPECT_EQ(a.min_log_f0, b.min_log_f0);
  EXPECT_EQ(a.range_log_f0, b.range_log_f0);
  EXPECT_LE(a.min_log_f0, a.mean_log_f0);
  EXPECT_LE(a.mean_log_f0, a.max_log_f0);
}

TEST(Pulses, SineCountAndMedianInterval) {
  const Waveform w = testing::sine(220.0, 0.5);
  const PointProcess p = pulses_from_pitch(w, track_pitch(w));
  EXPECT_GE(p.size(), 108u);
  EXPECT_LE(p.size(), 110u);
  std::vector<double> intervals;
  for (const auto& run : p.runs) {
    for (std::size_t i = 1; i < run.size(); ++i) intervals.push_back(run[i] - run[i - 1]);
  }
  std::sort(intervals.begin(), intervals.end());
  EXPECT_NEAR(intervals[intervals.size() / 2], 1.0 / 220.0, 0.02 / 220.0);
}

TEST(Pulses, UnvoicedTrackIsEmpty) {
  const Waveform w = testing::silence(0.5);
  EXPECT_EQ(pulses_from_pitch(w, track_pitch(w)).size(), 0u);
}

TEST(Pulses, DisjointRunsStaySeparate) {
  const Waveform w = testing::concat(
      {testing::vowel(150.0, 0.3), testing::silence(0.3), testing::vowel(180.0, 0.3)});
  const PitchTrack t = track_pitch(w);
  const PointProcess p = pulses_from_pitch(w, t);
  ASSERT_EQ(p.runs.size(), 2u);
  EXPECT_LT(p.runs[0].back(), 0.32);
  EXPECT_GT(p.runs[1].front(), 0.58);
  for (const auto& run : p.runs) {
    for (std::size_t i = 1; i < run.size(); ++i) {
      const double d = run[i] - run[i - 1];
      EXPECT_GE(d, 0.8 / t.ceiling);
      EXPECT_LE(d, 1.25 / t.floor);
    }
  }
}

TEST(Pulses, JitteredTrainIntervalsInRange) {
  const Waveform w = testing::vowel(120.0, 1.0, 0.5, 0.03, 17);
  const PitchTrack t = track_pitch(w);
  const PointProcess p = pulses_from_pitch(w, t);
  EXPECT_GT(p.size(), 100u);
  for (const auto& run : p.runs) {
    for (std::size_t i = 1; i < run.size(); ++i) {
      EXPECT_GT(run[i], run[i - 1]);
      EXPECT_GE(run[i] - run[i - 1], 0.8 / t.ceiling);
      EXPECT_LE(run[i] - run[i - 1], 1.25 / t.floor);
    }
  }
}

TEST(WindowedCorrelation, PeriodicSignalIsOne) {
  const Waveform w = testing::sine(200.0, 0.2);
  EXPECT_NEAR(windowed_correlation(w.samples, 1600, 1280, 80), 1.0, 1e-9);
  EXPECT_NEAR(correlation_peak_near(w.samples, 1600, 1280, 80.0), 1.0, 1e-6);
  EXPECT_EQ(windowed_correlation(std::vector<double>(3200, 0.0), 1600, 1280, 80), 0.0);
}

}  // namespace
}  // namespace adscreen
