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

#ifndef ADSCREEN_VOICE_QUALITY_H_
#define ADSCREEN_VOICE_QUALITY_H_

#include <span>
#include <vector>

#include "adscreen/audio_io.h"
#include "adscreen/pitch.h"

namespace adscreen {

struct JitterMeasures {
  double local = 0.0;     // ratio
  double absolute = 0.0;  // s
  double rap = 0.0;
  double ppq5 = 0.0;
  double ddp = 0.0;
};

struct ShimmerMeasures {
  double local = 0.0;
  double local_db = 0.0;
  double apq3 = 0.0;
  double apq5 = 0.0;
  double apq11 = 0.0;
  double dda = 0.0;
};

struct Harmonicity {
  double autocorrelation = 0.0;  // mean r over voiced frames
  double nhr = 0.0;
  double hnr = 0.0;  // dB
};

// Neighbouring periods whose ratio reaches this factor are not compared.
inline constexpr double kMaxPeriodFactor = 1.3;

// Chains of consecutive valid periods. A period is valid when it lies in
// [1/ceiling, 1/floor]; a chain breaks at an invalid period, between voiced
// runs, and between neighbours whose ratio reaches kMaxPeriodFactor.
std::vector<std::vector<double>> period_chains(const PointProcess& p);

// Jitter over one or more period chains. Each measure averages over the
// positions where its full neighbourhood lies inside one chain; the divisor
// is the mean of all periods. A measure with no such position is NaN (rap
// and ddp need a chain of 3 periods, ppq5 one of 5). Throws
// InputError("insufficient periods") when no chain holds 2 periods.
JitterMeasures jitter_from_periods(
    const std::vector<std::vector<double>>& chains);
JitterMeasures jitter_from_periods(std::span<const double> periods);
JitterMeasures jitter_measures(const PointProcess& p);

// Same structure over per-period peak amplitudes; apq11 needs 11.
ShimmerMeasures shimmer_from_amplitudes(
    const std::vector<std::vector<double>>& chains);
ShimmerMeasures shimmer_from_amplitudes(std::span<const double> amplitudes);
// A_i = max |sample| in [t_i, t_{i+1}) for every period of period_chains().
ShimmerMeasures shimmer_measures(const Waveform& w, const PointProcess& p);

// hnr and nhr from a mean correlation, after clamping it to
// [1e-6, 1 - 1e-6].
Harmonicity harmonicity_from_correlation(double mean_r);
// Per voiced frame, correlation at the tracked period (interpolated peak),
// averaged, then converted. Throws InputError("no voiced frames").
Harmonicity harmonicity_measures(const Waveform& w, const PitchTrack& track,
                                 double window_length = 0.080);

}  // namespace adscreen

#endif  // ADSCREEN_VOICE_QUALITY_H_
