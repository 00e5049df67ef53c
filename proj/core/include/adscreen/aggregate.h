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

#ifndef ADSCREEN_AGGREGATE_H_
#define ADSCREEN_AGGREGATE_H_

#include <array>
#include <bitset>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "adscreen/audio_io.h"
#include "adscreen/intensity_rhythm.h"
#include "adscreen/pitch.h"

namespace adscreen {

// Canonical acoustic column order. Used for the feature CSV header, the
// classifier's feature indexing and golden files.
enum class AcousticField : std::size_t {
  kMeanLogF0,
  kStdLogF0,
  kMaxLogF0,
  kMinLogF0,
  kRangeLogF0,
  kSlopeWithJumpRemoval,
  kSlopeWithoutJumpRemoval,
  kMeanIntensity,
  kRatioOfPauses,
  kAvgPauseLength,
  kSpeechRate,
  kArticulationRate,
  kAvgSyllableDuration,
  kEffectiveDuration,
  kJitterLocal,
  kJitterAbs,
  kJitterRap,
  kJitterPpq5,
  kJitterDdp,
  kShimmerLocal,
  kShimmerDb,
  kShimmerApq3,
  kShimmerApq5,
  kShimmerApq11,
  kShimmerDda,
  kHarmAutocorr,
  kNhr,
  kHnr,
};

inline constexpr std::size_t kAcousticFieldCount = 28;

const std::array<std::string_view, kAcousticFieldCount>& acoustic_field_names();

struct AcousticFeatureVector {
  std::array<double, kAcousticFieldCount> values{};
  // Fields a sub-extractor could not compute for this segment. They are
  // left out of the weighted mean for that field.
  std::bitset<kAcousticFieldCount> unusable;

  double& operator[](AcousticField f) {
    return values[static_cast<std::size_t>(f)];
  }
  double operator[](AcousticField f) const {
    return values[static_cast<std::size_t>(f)];
  }
  double effective_duration() const {
    return (*this)[AcousticField::kEffectiveDuration];
  }
  bool usable(std::size_t i) const { return !unusable.test(i); }
};

struct ExtractionConfig {
  PitchConfig pitch;
  IntensityConfig intensity;
  RhythmConfig rhythm;
};

// Runs pitch, intensity/rhythm and voice quality analysis on one segment.
// Returns nullopt (with a warning) when the segment is shorter than one
// analysis window or has no voiced frame. Jitter and shimmer fields that
// lack enough periods are marked unusable.
std::optional<AcousticFeatureVector> extract_segment_features(
    const AudioSegment& segment, const ExtractionConfig& config = {});

// Effective-duration-weighted mean of every field except effective duration,
// which is summed. Segments with zero effective duration contribute no
// weight. A field no segment could compute stays marked unusable with value
// 0. Throws InputError("no usable segments") for an empty list or an all-zero
// total weight.
AcousticFeatureVector aggregate_participant(
    const std::vector<AcousticFeatureVector>& segments);

}  // namespace adscreen

#endif  // ADSCREEN_AGGREGATE_H_
