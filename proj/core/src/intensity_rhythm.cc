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

#include "adscreen/intensity_rhythm.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adscreen/error.h"

namespace adscreen {

double IntensityContour::max_level() const {
  double m = 0.0;
  for (const auto& f : frames) m = std::max(m, f.level);
  return m;
}

double IntensityContour::median_level() const {
  if (frames.empty()) return 0.0;
  std::vector<double> v;
  v.reserve(frames.size());
  for (const auto& f : frames) v.push_back(f.level);
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double IntensityContour::mean_level() const {
  // Frames clamped at the floor carry no level information.
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& f : frames) {
    if (f.level <= 0.0) continue;
    s += f.level;
    ++n;
  }
  return n == 0 ? 0.0 : s / static_cast<double>(n);
}

IntensityContour intensity_contour(const Waveform& w, const IntensityConfig& config) {
  if (w.sample_rate <= 0) throw InputError("intensity: invalid sample rate");
  const auto window = std::max<std::ptrdiff_t>(3, std::lround(config.window_length * w.sample_rate));
  const auto n = static_cast<std::ptrdiff_t>(w.samples.size());
  if (n < window) throw InputError("audio too short");

  const double sigma = static_cast<double>(window) / 6.0;
  const double mid = static_cast<double>(window - 1) / 2.0;
  std::vector<double> weights(static_cast<std::size_t>(window));
  for (std::ptrdiff_t k = 0; k < window; ++k) {
    const double d = static_cast<double>(k) - mid;
    weights[k] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);

  const double duration = w.duration();
  const double span = static_cast<double>(window) / w.sample_rate;
  const auto count =
      static_cast<std::size_t>(std::floor((duration - span) / config.time_step + 1e-9)) + 1;
  const double first_time = (duration - static_cast<double>(count - 1) * config.time_step) / 2.0;
  const double p0_sq = kReferencePressure * kReferencePressure;

  IntensityContour c;
  c.time_step = config.time_step;
  c.window_length = config.window_length;
  c.frames.resize(count);
  for (std::size_t f = 0; f < count; ++f) {
    const double t = first_time + static_cast<double>(f) * config.time_step;
    auto begin = static_cast<std::ptrdiff_t>(std::lround(t * w.sample_rate - mid));
    begin = std::clamp<std::ptrdiff_t>(begin, 0, n - window);
    double power = 0.0;
    for (std::ptrdiff_t k = 0; k < window; ++k) {
      const double s = w.samples[begin + k];
      power += weights[k] * s * s;
    }
    power /= weight_sum;
    double level = power > 0.0 ? 10.0 * std::log10(power / p0_sq) : 0.0;
    if (!(level > 0.0)) level = 0.0;
    c.frames[f] = {t, level};
  }
  return c;
}

double window_reach(double window_length, double db) {
  // Tail mass beyond d of a Gaussian truncated at +-3 sigma, relative to the
  // whole window.
  const double fraction = std::pow(10.0, db / 10.0);
  const double sigma = window_length / 6.0;
  const double inner = std::erf(3.0 / std::sqrt(2.0));
  auto tail = [&](double d) {
    const double z = d / (sigma * std::sqrt(2.0));
    return 0.5 * (std::erf(3.0 / std::sqrt(2.0)) - std::erf(z)) / inner;
  };
  if (fraction >= 0.5) return 0.0;
  double lo = 0.0, hi = window_length / 2.0;
  for (int i = 0; i < 100; ++i) {
    const double m = 0.5 * (lo + hi);
    (tail(m) > fraction ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

std::vector<Pause> detect_pauses(const IntensityContour& contour, double total_duration,
                                 const RhythmConfig& config) {
  std::vector<Pause> out;
  const auto& fr = contour.frames;
  if (fr.empty()) return out;
  const double threshold = contour.max_level() + config.silence_db;
  const double widen = contour.time_step / 2.0 + window_reach(contour.window_length, config.silence_db);

  std::vector<Pause> runs;
  std::size_t i = 0;
  while (i < fr.size()) {
    if (!(fr[i].level < threshold)) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    while (i + 1 < fr.size() && fr[i + 1].level < threshold) ++i;
    const std::size_t last = i;
    ++i;
    Pause p;
    p.start = first == 0 ? 0.0 : std::max(0.0, fr[first].time - widen);
    p.end = last + 1 == fr.size() ? total_duration
                                  : std::min(total_duration, fr[last].time + widen);
    if (!runs.empty() && p.start <= runs.back().end) {
      runs.back().end = std::max(runs.back().end, p.end);
    } else {
      runs.push_back(p);
    }
  }
  for (const auto& p : runs) {
    if (p.duration() >= config.min_pause) out.push_back(p);
  }
  return out;
}

std::vector<double> detect_syllable_nuclei(const Waveform& w, const IntensityContour& contour,
                                           const PitchTrack& track, const RhythmConfig& config) {
  (void)w;
  std::vector<double> out;
  const auto& fr = contour.frames;
  if (fr.empty()) return out;
  const double median = contour.median_level();
  const double silence = contour.max_level() + config.silence_db;

  // Plateau-aware local maxima; both ends count as lower ground.
  std::vector<std::size_t> peaks;
  std::size_t i = 0;
  while (i < fr.size()) {
    std::size_t j = i;
    while (j + 1 < fr.size() && fr[j + 1].level == fr[i].level) ++j;
    const bool left_lower = i == 0 || fr[i - 1].level < fr[i].level;
    const bool right_lower = j + 1 == fr.size() || fr[j + 1].level < fr[j].level;
    if (left_lower && right_lower) {
      const double level = fr[i].level;
      if (level >= median && level > silence) peaks.push_back((i + j) / 2);
    }
    i = j + 1;
  }

  std::vector<std::size_t> accepted;
  for (std::size_t p : peaks) {
    if (accepted.empty()) {
      accepted.push_back(p);
      continue;
    }
    const std::size_t q = accepted.back();
    double dip = fr[q].level;
    for (std::size_t k = q; k <= p; ++k) dip = std::min(dip, fr[k].level);
    if (std::min(fr[q].level, fr[p].level) - dip >= config.min_dip_db) {
      accepted.push_back(p);
    } else if (fr[p].level > fr[q].level) {
      accepted.back() = p;
    }
  }

  for (std::size_t p : accepted) {
    if (track.frames.empty()) break;
    if (track.frames[track.nearest_frame(fr[p].time)].voiced()) out.push_back(fr[p].time);
  }
  return out;
}

RhythmFeatures rhythm_features(const Waveform& w, const IntensityContour& contour,
                               const std::vector<double>& nuclei,
                               const std::vector<Pause>& pauses) {
  RhythmFeatures out;
  const double total = w.duration();
  double pause_time = 0.0;
  for (const auto& p : pauses) pause_time += p.duration();
  pause_time = std::min(pause_time, total);
  const auto syllables = static_cast<double>(nuclei.size());

  out.effective_duration = total - pause_time;
  out.ratio_of_pauses = total > 0.0 ? pause_time / total : 0.0;
  out.avg_pause_length = pauses.empty() ? 0.0 : pause_time / static_cast<double>(pauses.size());
  out.speech_rate = total > 0.0 ? syllables / total : 0.0;
  out.articulation_rate = out.effective_duration > 0.0 ? syllables / out.effective_duration : 0.0;
  out.avg_syllable_duration = nuclei.empty() ? 0.0 : out.effective_duration / syllables;
  out.mean_intensity = contour.mean_level();
  return out;
}

}  // namespace adscreen
