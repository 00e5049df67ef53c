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

#include "adscreen/voice_quality.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "adscreen/error.h"
#include "synth.h"

namespace adscreen {
namespace {

// Straight from the textbook definition, single chain.
double jitter_local_oracle(const std::vector<double>& t) {
  double diff = 0.0, mean = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) diff += std::abs(t[i] - t[i - 1]);
  for (double v : t) mean += v;
  return (diff / static_cast<double>(t.size() - 1)) / (mean / static_cast<double>(t.size()));
}

std::vector<double> random_sequence(std::mt19937_64& rng, double base, double spread,
                                    std::size_t n) {
  std::uniform_real_distribution<double> u(1.0 - spread, 1.0 + spread);
  std::vector<double> v(n);
  for (auto& x : v) x = base * u(rng);
  return v;
}

TEST(Jitter, ConstantPeriodsAreZero) {
  const std::vector<double> t(100, 0.005);
  const JitterMeasures j = jitter_from_periods(t);
  EXPECT_EQ(j.local, 0.0);
  EXPECT_EQ(j.absolute, 0.0);
  EXPECT_EQ(j.rap, 0.0);
  EXPECT_EQ(j.ppq5, 0.0);
  EXPECT_EQ(j.ddp, 0.0);
}

TEST(Jitter, AlternatingPeriods) {
  std::vector<double> t;
  for (int i = 0; i < 100; ++i) t.push_back(i % 2 ? 0.0051 : 0.0050);
  const JitterMeasures j = jitter_from_periods(t);
  EXPECT_NEAR(j.local, 0.1 / 5.05, 1e-9);
  EXPECT_NEAR(j.local, 0.019802, 1e-6);
  EXPECT_NEAR(j.absolute, 0.0001, 1e-12);
}

TEST(Jitter, DdpIsThreeRap) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_sequence(rng, 0.006, 0.1, 3 + static_cast<std::size_t>(trial % 40));
    const JitterMeasures j = jitter_from_periods(t);
    EXPECT_NEAR(j.ddp, 3.0 * j.rap, 1e-12);
    EXPECT_GE(j.local, 0.0);
    EXPECT_GE(j.rap, 0.0);
  }
}

TEST(Jitter, TooFewPeriods) {
  try {
    jitter_from_periods(std::vector<double>{0.005});
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("insufficient periods"), std::string::npos);
  }
  const JitterMeasures two = jitter_from_periods(std::vector<double>{0.005, 0.0052});
  EXPECT_TRUE(std::isnan(two.rap));
  EXPECT_TRUE(std::isnan(two.ppq5));
  EXPECT_FALSE(std::isnan(two.local));
}

TEST(Jitter, ChainsBreakAtInvalidAndLargeRatioPeriods) {
  // Periods 5, 5, 5, 10, 5, 50, 5 ms: the 10 ms period differs from both
  // neighbours by a factor of 2 and 50 ms is longer than 1/floor.
  const std::vector<double> times = {0.0, 0.005, 0.010, 0.015, 0.025, 0.030, 0.080, 0.085};
  const auto chains = period_chains(PointProcess::from_times(times, 75.0, 600.0));
  ASSERT_EQ(chains.size(), 4u);
  EXPECT_EQ(chains[0].size(), 3u);
  EXPECT_EQ(chains[1].size(), 1u);
  EXPECT_EQ(chains[2].size(), 1u);
  EXPECT_EQ(chains[3].size(), 1u);
  EXPECT_NEAR(chains[1][0], 0.010, 1e-15);
}

TEST(Shimmer, ConstantAmplitudesAreZero) {
  const ShimmerMeasures s = shimmer_from_amplitudes(std::vector<double>(40, 0.7));
  EXPECT_EQ(s.local, 0.0);
  EXPECT_EQ(s.local_db, 0.0);
  EXPECT_EQ(s.apq3, 0.0);
  EXPECT_EQ(s.apq5, 0.0);
  EXPECT_EQ(s.apq11, 0.0);
  EXPECT_EQ(s.dda, 0.0);
}

TEST(Shimmer, AlternatingAmplitudes) {
  std::vector<double> a;
  for (int i = 0; i < 100; ++i) a.push_back(i % 2 ? 1.1 : 1.0);
  const ShimmerMeasures s = shimmer_from_amplitudes(a);
  EXPECT_NEAR(s.local, 0.1 / 1.05, 1e-12);
  EXPECT_NEAR(s.local, 0.095238, 1e-6);
  EXPECT_NEAR(s.local_db, 20.0 * std::log10(1.1), 1e-12);
  EXPECT_NEAR(s.local_db, 0.8279, 1e-4);
}

TEST(Shimmer, DdaIsThreeApq3) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_sequence(rng, 0.5, 0.3, 3 + static_cast<std::size_t>(trial % 40));
    const ShimmerMeasures s = shimmer_from_amplitudes(a);
    EXPECT_NEAR(s.dda, 3.0 * s.apq3, 1e-12);
  }
}

TEST(Shimmer, Apq11NeedsElevenAmplitudes) {
  const ShimmerMeasures s = shimmer_from_amplitudes(std::vector<double>(10, 0.5));
  EXPECT_TRUE(std::isnan(s.apq11));
  EXPECT_EQ(shimmer_from_amplitudes(std::vector<double>(11, 0.5)).apq11, 0.0);
}

TEST(PulseTrain, ConstantTrainHasZeroJitterAndShimmer) {
  const std::vector<double> periods(150, 0.005);
  const Waveform w = testing::pulse_train(periods, {});
  const PointProcess p = pulses_from_pitch(w, track_pitch(w));
  ASSERT_GT(p.size(), 100u);
  const JitterMeasures j = jitter_measures(p);
  EXPECT_NEAR(j.local, 0.0, 1e-3);
  const ShimmerMeasures s = shimmer_measures(w, p);
  EXPECT_NEAR(s.local, 0.0, 1e-2);
}

TEST(PulseTrain, InjectedJitterRecovered) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  std::vector<double> periods(200);
  for (auto& p : periods) p = 0.005 * (1.0 + u(rng));
  const Waveform w = testing::pulse_train(periods, {});
  const PointProcess p = pulses_from_pitch(w, track_pitch(w));
  const double measured = jitter_measures(p).local;
  const double oracle = jitter_local_oracle(periods);
  EXPECT_NEAR(measured, oracle, 0.25 * oracle);
}

TEST(Harmonicity, HalfCorrelationIsZeroDb) {
  const Harmonicity h = harmonicity_from_correlation(0.5);
  EXPECT_EQ(h.hnr, 0.0);
  EXPECT_EQ(h.nhr, 1.0);
  const Harmonicity clamped = harmonicity_from_correlation(1.0);
  EXPECT_TRUE(std::isfinite(clamped.hnr));
  EXPECT_NEAR(clamped.hnr, 60.0, 1e-3);
}

TEST(Harmonicity, CleanSine) {
  const Waveform w = testing::sine(220.0, 1.0);
  const Harmonicity h = harmonicity_measures(w, track_pitch(w));
  EXPECT_GE(h.hnr, 30.0);
  EXPECT_NEAR(h.hnr, 10.0 * std::log10(h.autocorrelation / (1.0 - h.autocorrelation)), 1e-9);
  EXPECT_NEAR(h.nhr, (1.0 - h.autocorrelation) / h.autocorrelation, 1e-12);
}

TEST(Harmonicity, EqualPowerNoise) {
  const Waveform w =
      testing::mix(testing::sine(220.0, 1.0, 0.5), testing::noise(1.0, 0.5 / std::sqrt(2.0), 5));
  const Harmonicity h = harmonicity_measures(w, track_pitch(w));
  EXPECT_NEAR(h.hnr, 0.0, 1.5);
}

TEST(Harmonicity, NoVoicedFrames) {
  const Waveform w = testing::silence(0.5);
  EXPECT_THROW(harmonicity_measures(w, track_pitch(w)), InputError);
}

TEST(VoiceQuality, AmplitudeInvariant) {
  const Waveform w = testing::vowel(140.0, 1.0, 0.5, 0.02, 4);
  const PitchTrack t = track_pitch(w);
  const PointProcess p = pulses_from_pitch(w, t);
  const JitterMeasures j = jitter_measures(p);
  const ShimmerMeasures s = shimmer_measures(w, p);
  const Harmonicity h = harmonicity_measures(w, t);
  for (double gain : {2.0, 0.1}) {
    const Waveform g = testing::scaled(w, gain);
    const PitchTrack tg = track_pitch(g);
    const PointProcess pg = pulses_from_pitch(g, tg);
    const JitterMeasures jg = jitter_measures(pg);
    const ShimmerMeasures sg = shimmer_measures(g, pg);
    const Harmonicity hg = harmonicity_measures(g, tg);
    EXPECT_NEAR(jg.local, j.local, 1e-9);
    EXPECT_NEAR(jg.ppq5, j.ppq5, 1e-9);
    EXPECT_NEAR(sg.local, s.local, 1e-9);
    EXPECT_NEAR(sg.apq11, s.apq11, 1e-9);
    EXPECT_NEAR(sg.local_db, s.local_db, 1e-9);
    EXPECT_NEAR(hg.autocorrelation, h.autocorrelation, 1e-9);
  }
}

}  // namespace
}  // namespace adscreen
