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

#include "adscreen/aggregate.h"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "adscreen/error.h"
#include "adscreen/voice_quality.h"

namespace adscreen {

namespace {

using F = AcousticField;

void set(AcousticFeatureVector& v, F field, double value) {
  v[field] = value;
  if (!std::isfinite(value)) {
    v[field] = 0.0;
    v.unusable.set(static_cast<std::size_t>(field));
  }
}

void mark_unusable(AcousticFeatureVector& v, std::initializer_list<F> fields) {
  for (F f : fields) {
    v[f] = 0.0;
    v.unusable.set(static_cast<std::size_t>(f));
  }
}

}  // namespace

const std::array<std::string_view, kAcousticFieldCount>& acoustic_field_names() {
  static constexpr std::array<std::string_view, kAcousticFieldCount> kNames = {
      "mean_log_f0",       "std_log_f0",
      "max_log_f0",        "min_log_f0",
      "range_log_f0",      "slope_with_jump_removal",
      "slope_without_jump_removal", "mean_intensity",
      "ratio_of_pauses",   "avg_pause_length",
      "speech_rate",       "articulation_rate",
      "avg_syllable_duration", "effective_duration",
      "jitter_loc",        "jitter_abs",
      "jitter_rap",        "jitter_ppq5",
      "jitter_ddp",        "shimmer_loc",
      "shimmer_db",        "shimmer_apq3",
      "shimmer_apq5",      "shimmer_apq11",
      "shimmer_dda",       "harm_autocorr",
      "nhr",               "hnr",
  };
  return kNames;
}

std::optional<AcousticFeatureVector> extract_segment_features(const AudioSegment& segment,
                                                              const ExtractionConfig& config) {
  const Waveform& w = segment.waveform;
  const auto& label = segment.label;
  const double needed = std::max(config.pitch.window_length, config.intensity.window_length);
  if (w.duration() < needed) {
    spdlog::warn("segment {} [{}, {}]: shorter than one analysis window; skipped",
                 label.speaker, label.start, label.end);
    return std::nullopt;
  }

  const PitchTrack track = track_pitch(w, config.pitch);
  if (track.voiced_count() == 0) {
    spdlog::warn("segment {} [{}, {}]: no voiced frames; skipped", label.speaker,
                 label.start, label.end);
    return std::nullopt;
  }

  AcousticFeatureVector v;
  const F0Features f0 = f0_statistics(track);
  set(v, F::kMeanLogF0, f0.mean_log_f0);
  set(v, F::kStdLogF0, f0.std_log_f0);
  set(v, F::kMaxLogF0, f0.max_log_f0);
  set(v, F::kMinLogF0, f0.min_log_f0);
  set(v, F::kRangeLogF0, f0.range_log_f0);
  set(v, F::kSlopeWithJumpRemoval, f0.slope_with_jump_removal);
  set(v, F::kSlopeWithoutJumpRemoval, f0.slope_without_jump_removal);

  const IntensityContour contour = intensity_contour(w, config.intensity);
  const auto nuclei = detect_syllable_nuclei(w, contour, track, config.rhythm);
  const auto pauses = detect_pauses(contour, w.duration(), config.rhythm);
  const RhythmFeatures rhythm = rhythm_features(w, contour, nuclei, pauses);
  set(v, F::kMeanIntensity, rhythm.mean_intensity);
  set(v, F::kRatioOfPauses, rhythm.ratio_of_pauses);
  set(v, F::kAvgPauseLength, rhythm.avg_pause_length);
  set(v, F::kSpeechRate, rhythm.speech_rate);
  set(v, F::kArticulationRate, rhythm.articulation_rate);
  set(v, F::kAvgSyllableDuration, rhythm.avg_syllable_duration);
  set(v, F::kEffectiveDuration, rhythm.effective_duration);

  const PointProcess pulses = pulses_from_pitch(w, track);
  try {
    const JitterMeasures j = jitter_measures(pulses);
    set(v, F::kJitterLocal, j.local);
    set(v, F::kJitterAbs, j.absolute);
    set(v, F::kJitterRap, j.rap);
    set(v, F::kJitterPpq5, j.ppq5);
    set(v, F::kJitterDdp, j.ddp);
  } catch (const InputError&) {
    mark_unusable(v, {F::kJitterLocal, F::kJitterAbs, F::kJitterRap, F::kJitterPpq5,
                      F::kJitterDdp});
  }
  try {
    const ShimmerMeasures s = shimmer_measures(w, pulses);
    set(v, F::kShimmerLocal, s.local);
    set(v, F::kShimmerDb, s.local_db);
    set(v, F::kShimmerApq3, s.apq3);
    set(v, F::kShimmerApq5, s.apq5);
    set(v, F::kShimmerApq11, s.apq11);
    set(v, F::kShimmerDda, s.dda);
  } catch (const InputError&) {
    mark_unusable(v, {F::kShimmerLocal, F::kShimmerDb, F::kShimmerApq3, F::kShimmerApq5,
                      F::kShimmerApq11, F::kShimmerDda});
  }

  const Harmonicity h = harmonicity_measures(w, track, config.pitch.window_length);
  set(v, F::kHarmAutocorr, h.autocorrelation);
  set(v, F::kNhr, h.nhr);
  set(v, F::kHnr, h.hnr);
  return v;
}

AcousticFeatureVector aggregate_participant(const std::vector<AcousticFeatureVector>& segments) {
  if (segments.empty()) throw InputError("no usable segments");
  double total_weight = 0.0;
  for (const auto& s : segments) total_weight += std::max(0.0, s.effective_duration());
  if (!(total_weight > 0.0)) throw InputError("no usable segments");

  const auto duration_index = static_cast<std::size_t>(F::kEffectiveDuration);
  AcousticFeatureVector out;
  for (std::size_t i = 0; i < kAcousticFieldCount; ++i) {
    if (i == duration_index) {
      out.values[i] = total_weight;
      continue;
    }
    double num = 0.0, den = 0.0;
    std::size_t contributors = 0;
    double last = 0.0;
    for (const auto& s : segments) {
      const double weight = s.effective_duration();
      if (!(weight > 0.0) || !s.usable(i)) continue;
      num += weight * s.values[i];
      den += weight;
      last = s.values[i];
      ++contributors;
    }
    if (contributors == 1) {
      out.values[i] = last;
    } else if (den > 0.0) {
      out.values[i] = num / den;
    } else {
      out.values[i] = 0.0;
      out.unusable.set(i);
    }
  }
  return out;
}

}  // namespace adscreen
