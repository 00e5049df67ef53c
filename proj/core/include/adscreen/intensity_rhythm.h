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

#ifndef ADSCREEN_INTENSITY_RHYTHM_H_
#define ADSCREEN_INTENSITY_RHYTHM_H_

#include <vector>

#include "adscreen/audio_io.h"
#include "adscreen/pitch.h"

namespace adscreen {

struct IntensityConfig {
  double time_step = 0.016;      // s
  double window_length = 0.064;  // s, Gaussian, sigma = length / 6
};

struct RhythmConfig {
  double silence_db = -25.0;    // relative to the maximum intensity
  double min_dip_db = 2.0;
  double min_pause = 0.3;       // s
};

struct IntensityFrame {
  double time = 0.0;
  double level = 0.0;  // dB re 2e-5; never below 0
};

struct IntensityContour {
  std::vector<IntensityFrame> frames;
  double time_step = 0.016;
  double window_length = 0.064;

  double max_level() const;
  double median_level() const;
  double mean_level() const;
};

struct Pause {
  double start = 0.0;
  double end = 0.0;
  double duration() const { return end - start; }
};

struct RhythmFeatures {
  double ratio_of_pauses = 0.0;
  double avg_pause_length = 0.0;       // s
  double speech_rate = 0.0;            // nuclei / s
  double articulation_rate = 0.0;      // nuclei / s of phonation
  double avg_syllable_duration = 0.0;  // s
  double effective_duration = 0.0;     // s
  double mean_intensity = 0.0;         // dB
};

inline constexpr double kReferencePressure = 2e-5;

// Gaussian-windowed mean power in dB re kReferencePressure^2, clamped at
// 0 dB. Throws InputError when the waveform is shorter than one window.
IntensityContour intensity_contour(const Waveform& w,
                                   const IntensityConfig& config = {});

// Syllable nuclei as intensity peaks (times in seconds). A peak counts when
// it is at or above the median level and above max + silence_db, is
// separated from the previously accepted peak by a dip of at least
// min_dip_db, and sits on a voiced pitch frame. Of two peaks without a deep
// enough dip between them the louder one is kept.
std::vector<double> detect_syllable_nuclei(const Waveform& w,
                                           const IntensityContour& contour,
                                           const PitchTrack& track,
                                           const RhythmConfig& config = {});

// Runs of frames below max + silence_db. Each run is widened by half a frame
// step plus the distance at which the analysis window still picks up
// silence_db worth of energy from adjacent sound, then kept if it lasts at
// least min_pause. Runs touching either end of the contour extend to the
// waveform boundary (0 or `total_duration`).
std::vector<Pause> detect_pauses(const IntensityContour& contour,
                                 double total_duration,
                                 const RhythmConfig& config = {});

// Distance from the centre of a window_length Gaussian (sigma = length / 6)
// at which the window tail still carries a fraction 10^(db/10) of its weight.
double window_reach(double window_length, double db);

RhythmFeatures rhythm_features(const Waveform& w,
                               const IntensityContour& contour,
                               const std::vector<double>& nuclei,
                               const std::vector<Pause>& pauses);

}  // namespace adscreen

#endif  // ADSCREEN_INTENSITY_RHYTHM_H_
