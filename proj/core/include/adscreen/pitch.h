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

#ifndef ADSCREEN_PITCH_H_
#define ADSCREEN_PITCH_H_

#include <cstddef>
#include <vector>

#include "adscreen/audio_io.h"

namespace adscreen {

struct PitchConfig {
  double floor = 75.0;            // Hz
  double ceiling = 600.0;         // Hz
  double time_step = 0.0033;      // s
  double window_length = 0.080;   // s, Gaussian, sigma = length / 6
  double voicing_threshold = 0.45;
  double silence_threshold = 0.03;  // relative to the global absolute peak
  double octave_cost = 0.01;        // per octave below the ceiling
  double octave_jump_cost = 0.35;
  double voiced_unvoiced_cost = 0.14;
  int max_candidates = 15;          // including the unvoiced candidate

  void validate() const;
};

struct PitchFrame {
  double time = 0.0;      // frame centre, s
  double f0 = 0.0;        // Hz; 0 when unvoiced
  double strength = 0.0;  // correlation peak in [0, 1]

  bool voiced() const { return f0 > 0.0; }
  bool operator==(const PitchFrame&) const = default;
};

struct PitchTrack {
  std::vector<PitchFrame> frames;
  double floor = 75.0;
  double ceiling = 600.0;
  double time_step = 0.0033;

  std::size_t voiced_count() const;
  // Index of the frame whose centre is closest to t.
  std::size_t nearest_frame(double t) const;
};

// Glottal pulse instants grouped by voiced run. Intervals are only defined
// between pulses of the same run.
struct PointProcess {
  std::vector<std::vector<double>> runs;
  double floor = 75.0;
  double ceiling = 600.0;

  static PointProcess from_times(std::vector<double> times, double floor,
                                 double ceiling);
  std::size_t size() const;
  std::vector<double> all_times() const;
};

struct F0Features {
  double mean_log_f0 = 0.0;
  double std_log_f0 = 0.0;
  double max_log_f0 = 0.0;
  double min_log_f0 = 0.0;
  double range_log_f0 = 0.0;
  double slope_with_jump_removal = 0.0;     // log10 Hz per second
  double slope_without_jump_removal = 0.0;  // log10 Hz per second
};

// Consecutive voiced frames whose f0 differ by more than this many octaves
// are dropped from the jump-removed slope.
inline constexpr double kOctaveJumpThreshold = 0.5;

// Gaussian-weighted normalized cross-correlation between x[n] and x[n+lag]
// over the window of `window_samples` samples centred on `centre`. Pairs
// falling outside the window are ignored; each pair is weighted by the
// Gaussian evaluated at its midpoint. Amplitude invariant, and exactly 1 for
// a signal periodic in `lag`. Returns 0 when either side has no energy.
double windowed_correlation(const std::vector<double>& x, std::ptrdiff_t centre,
                            std::ptrdiff_t window_samples, std::ptrdiff_t lag);

// Correlation at a fractional lag: parabolic interpolation around the best
// integer lag near `lag`. Returns the interpolated peak value.
double correlation_peak_near(const std::vector<double>& x, std::ptrdiff_t centre,
                             std::ptrdiff_t window_samples, double lag);

// Frame-wise F0 by cross-correlation, up to `max_candidates - 1` voiced
// candidates per frame, path chosen by Viterbi. Frames are placed so every
// analysis window lies inside the waveform. Throws InputError("audio too
// short") when the waveform is shorter than one window.
PitchTrack track_pitch(const Waveform& w, const PitchConfig& config = {});

// Statistics over log10(f0) of voiced frames. Slopes sum |delta log10 f0|
// over adjacent voiced frame pairs and divide by the time those pairs span;
// the jump-removed slope skips pairs more than kOctaveJumpThreshold octaves
// apart. A slope with no contributing pairs is 0. Throws InputError("no
// voiced frames").
F0Features f0_statistics(const PitchTrack& track);

PointProcess pulses_from_pitch(const Waveform& w, const PitchTrack& track);

}  // namespace adscreen

#endif  // ADSCREEN_PITCH_H_
