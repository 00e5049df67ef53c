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
#include <limits>

#include "adscreen/error.h"

namespace adscreen {

namespace {

struct Candidate {
  double f0 = 0.0;        // 0 = unvoiced
  double r = 0.0;         // raw correlation peak
  double strength = 0.0;  // score used by the path search
};

// Gaussian sampled at half-sample offsets: entry k holds the weight at
// distance (k - radius) / 2 samples from the window centre.
class HalfSampleGaussian {
 public:
  explicit HalfSampleGaussian(std::ptrdiff_t window_samples)
      : radius_(window_samples + 1), table_(2 * radius_ + 1) {
    const double sigma = static_cast<double>(window_samples) / 6.0;
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(table_.size()); ++k) {
      double d = static_cast<double>(k - radius_) / 2.0;
      table_[k] = std::exp(-d * d / (2.0 * sigma * sigma));
    }
  }
  // Weight at (twice_offset / 2) samples from the centre.
  double at(std::ptrdiff_t twice_offset) const { return table_[twice_offset + radius_]; }

 private:
  std::ptrdiff_t radius_;
  std::vector<double> table_;
};

double correlation(const std::vector<double>& x, std::ptrdiff_t centre,
                   std::ptrdiff_t window_samples, std::ptrdiff_t lag,
                   const HalfSampleGaussian& gauss) {
  const std::ptrdiff_t begin = centre - window_samples / 2;
  const std::ptrdiff_t end = begin + window_samples;
  const auto size = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(begin, 0);
  const std::ptrdiff_t hi = std::min(end, size) - lag;  // exclusive bound on n
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::ptrdiff_t n = lo; n < hi; ++n) {
    const double g = gauss.at(2 * (n - centre) + lag);
    const double a = x[n];
    const double b = x[n + lag];
    sxy += g * a * b;
    sxx += g * a * a;
    syy += g * b * b;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// Vertex of the parabola through (-1, a), (0, b), (1, c).
void parabolic_peak(double a, double b, double c, double& offset, double& value) {
  const double denom = a - 2.0 * b + c;
  if (denom >= 0.0) {
    offset = 0.0;
    value = b;
    return;
  }
  offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  value = b - 0.25 * (a - c) * offset;
}

std::ptrdiff_t window_samples_for(double length, int rate) {
  return std::max<std::ptrdiff_t>(3, std::lround(length * rate));
}

double interpolate_f0(const PitchTrack& track, std::size_t first, std::size_t last,
                      double t) {
  const auto& fr = track.frames;
  if (t <= fr[first].time) return fr[first].f0;
  if (t >= fr[last].time) return fr[last].f0;
  auto i = static_cast<std::size_t>(std::floor((t - fr[first].time) / track.time_step)) + first;
  i = std::min(i, last - 1);
  while (i > first && fr[i].time > t) --i;
  while (i + 1 < last && fr[i + 1].time < t) ++i;
  const double u = (t - fr[i].time) / (fr[i + 1].time - fr[i].time);
  return fr[i].f0 + u * (fr[i + 1].f0 - fr[i].f0);
}

// Index of max |x| in [lo, hi) and its parabolically refined time.
bool strongest_peak(const Waveform& w, std::ptrdiff_t lo, std::ptrdiff_t hi,
                    double& time) {
  const auto n = static_cast<std::ptrdiff_t>(w.samples.size());
  lo = std::max<std::ptrdiff_t>(lo, 0);
  hi = std::min(hi, n);
  if (hi <= lo) return false;
  std::ptrdiff_t best = lo;
  for (std::ptrdiff_t i = lo + 1; i < hi; ++i) {
    if (std::abs(w.samples[i]) > std::abs(w.samples[best])) best = i;
  }
  if (w.samples[best] == 0.0) return false;
  double offset = 0.0, value = 0.0;
  if (best > 0 && best + 1 < n) {
    parabolic_peak(std::abs(w.samples[best - 1]), std::abs(w.samples[best]),
                   std::abs(w.samples[best + 1]), offset, value);
  }
  time = (static_cast<double>(best) + offset) / w.sample_rate;
  return true;
}

}  // namespace

void PitchConfig::validate() const {
  if (!(floor > 0.0) || !(ceiling > floor)) {
    throw InputError("pitch: need 0 < floor < ceiling");
  }
  if (!(time_step > 0.0) || !(window_length > 0.0)) {
    throw InputError("pitch: time step and window length must be positive");
  }
  if (max_candidates < 2) throw InputError("pitch: need at least 2 candidates");
}

std::size_t PitchTrack::voiced_count() const {
  return static_cast<std::size_t>(
      std::count_if(frames.begin(), frames.end(), [](const PitchFrame& f) { return f.voiced(); }));
}

std::size_t PitchTrack::nearest_frame(double t) const {
  if (frames.empty()) return 0;
  double k = std::round((t - frames.front().time) / time_step);
  k = std::clamp(k, 0.0, static_cast<double>(frames.size() - 1));
  return static_cast<std::size_t>(k);
}

PointProcess PointProcess::from_times(std::vector<double> times, double floor,
                                      double ceiling) {
  PointProcess p;
  p.floor = floor;
  p.ceiling = ceiling;
  if (!times.empty()) p.runs.push_back(std::move(times));
  return p;
}

std::size_t PointProcess::size() const {
  std::size_t n = 0;
  for (const auto& r : runs) n += r.size();
  return n;
}

std::vector<double> PointProcess::all_times() const {
  std::vector<double> out;
  for (const auto& r : runs) out.insert(out.end(), r.begin(), r.end());
  return out;
}

double windowed_correlation(const std::vector<double>& x, std::ptrdiff_t centre,
                            std::ptrdiff_t window_samples, std::ptrdiff_t lag) {
  HalfSampleGaussian gauss(window_samples);
  return correlation(x, centre, window_samples, lag, gauss);
}

double correlation_peak_near(const std::vector<double>& x, std::ptrdiff_t centre,
                             std::ptrdiff_t window_samples, double lag) {
  HalfSampleGaussian gauss(window_samples);
  auto at = [&](std::ptrdiff_t l) {
    return l < 1 ? -1.0 : correlation(x, centre, window_samples, l, gauss);
  };
  auto l = static_cast<std::ptrdiff_t>(std::lround(lag));
  double b = at(l);
  // Walk to the local maximum closest to the requested lag.
  for (int step = 0; step < 3; ++step) {
    double left = at(l - 1), right = at(l + 1);
    if (right > b && right >= left) {
      ++l;
      b = right;
    } else if (left > b) {
      --l;
      b = left;
    } else {
      double offset = 0.0, value = 0.0;
      parabolic_peak(left, b, right, offset, value);
      return std::clamp(value, 0.0, 1.0);
    }
  }
  return std::clamp(b, 0.0, 1.0);
}

PitchTrack track_pitch(const Waveform& w, const PitchConfig& config) {
  config.validate();
  const int rate = w.sample_rate;
  if (rate <= 0) throw InputError("pitch: invalid sample rate");
  const std::ptrdiff_t window = window_samples_for(config.window_length, rate);
  const auto n = static_cast<std::ptrdiff_t>(w.samples.size());
  if (n < window) throw InputError("audio too short");

  const double duration = w.duration();
  const double span = static_cast<double>(window) / rate;
  const auto frame_count =
      static_cast<std::size_t>(std::floor((duration - span) / config.time_step + 1e-9)) + 1;
  const double first_time =
      (duration - static_cast<double>(frame_count - 1) * config.time_step) / 2.0;

  const auto min_lag = std::max<std::ptrdiff_t>(
      1, static_cast<std::ptrdiff_t>(std::floor(rate / config.ceiling)));
  const auto max_lag = std::min<std::ptrdiff_t>(
      window - 2, static_cast<std::ptrdiff_t>(std::ceil(rate / config.floor)));

  double global_peak = 0.0;
  for (double s : w.samples) global_peak = std::max(global_peak, std::abs(s));

  HalfSampleGaussian gauss(window);
  std::vector<std::vector<Candidate>> candidates(frame_count);
  std::vector<double> r(static_cast<std::size_t>(max_lag + 2), 0.0);
  std::vector<double> times(frame_count);

  for (std::size_t f = 0; f < frame_count; ++f) {
    times[f] = first_time + static_cast<double>(f) * config.time_step;
    auto centre = static_cast<std::ptrdiff_t>(std::lround(times[f] * rate));
    centre = std::clamp(centre, window / 2, n - (window - window / 2));
    const std::ptrdiff_t begin = centre - window / 2;

    double local_peak = 0.0;
    for (std::ptrdiff_t i = begin; i < begin + window; ++i) {
      local_peak = std::max(local_peak, std::abs(w.samples[i]));
    }

    Candidate unvoiced;
    unvoiced.strength = config.voicing_threshold + 2.0;
    if (global_peak > 0.0) {
      const double relative = local_peak / global_peak;
      unvoiced.strength =
          config.voicing_threshold +
          std::max(0.0, 2.0 - relative / (config.silence_threshold /
                                          (1.0 + config.voicing_threshold)));
    }

    std::vector<Candidate> voiced;
    if (local_peak > 0.0) {
      for (std::ptrdiff_t lag = std::max<std::ptrdiff_t>(1, min_lag - 1); lag <= max_lag + 1; ++lag) {
        r[static_cast<std::size_t>(lag)] = correlation(w.samples, centre, window, lag, gauss);
      }
      for (std::ptrdiff_t lag = std::max<std::ptrdiff_t>(2, min_lag); lag <= max_lag; ++lag) {
        const double a = r[lag - 1], b = r[lag], c = r[lag + 1];
        if (!(b > a && b >= c) || b <= 0.0) continue;
        double offset = 0.0, value = 0.0;
        parabolic_peak(a, b, c, offset, value);
        const double f0 = rate / (static_cast<double>(lag) + offset);
        if (f0 < config.floor || f0 > config.ceiling) continue;
        value = std::clamp(value, 0.0, 1.0);
        if (value < config.voicing_threshold) continue;
        Candidate cand;
        cand.f0 = f0;
        cand.r = value;
        cand.strength = value + config.octave_cost * std::log2(f0 / config.floor);
        voiced.push_back(cand);
      }
      std::stable_sort(voiced.begin(), voiced.end(), [](const Candidate& x, const Candidate& y) {
        return x.strength > y.strength;
      });
      if (voiced.size() > static_cast<std::size_t>(config.max_candidates - 1)) {
        voiced.resize(static_cast<std::size_t>(config.max_candidates - 1));
      }
    }
    candidates[f].push_back(unvoiced);
    candidates[f].insert(candidates[f].end(), voiced.begin(), voiced.end());
  }

  // Viterbi over candidates: maximise total strength minus transition costs.
  auto transition = [&](const Candidate& a, const Candidate& b) {
    const bool va = a.f0 > 0.0, vb = b.f0 > 0.0;
    if (!va && !vb) return 0.0;
    if (va != vb) return config.voiced_unvoiced_cost;
    return config.octave_jump_cost * std::abs(std::log2(a.f0 / b.f0));
  };
  std::vector<std::vector<double>> score(frame_count);
  std::vector<std::vector<std::size_t>> back(frame_count);
  score[0].resize(candidates[0].size());
  back[0].assign(candidates[0].size(), 0);
  for (std::size_t j = 0; j < candidates[0].size(); ++j) score[0][j] = candidates[0][j].strength;
  for (std::size_t f = 1; f < frame_count; ++f) {
    const auto& prev = candidates[f - 1];
    const auto& cur = candidates[f];
    score[f].resize(cur.size());
    back[f].resize(cur.size());
    for (std::size_t j = 0; j < cur.size(); ++j) {
      double best = -std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t i = 0; i < prev.size(); ++i) {
        const double s = score[f - 1][i] - transition(prev[i], cur[j]);
        if (s > best) {
          best = s;
          arg = i;
        }
      }
      score[f][j] = best + cur[j].strength;
      back[f][j] = arg;
    }
  }

  PitchTrack track;
  track.floor = config.floor;
  track.ceiling = config.ceiling;
  track.time_step = config.time_step;
  track.frames.resize(frame_count);
  std::size_t j = static_cast<std::size_t>(
      std::max_element(score.back().begin(), score.back().end()) - score.back().begin());
  for (std::size_t f = frame_count; f-- > 0;) {
    const Candidate& c = candidates[f][j];
    PitchFrame& out = track.frames[f];
    out.time = times[f];
    out.f0 = c.f0;
    if (c.f0 > 0.0) {
      out.strength = c.r;
    } else {
      // Unvoiced frames report the best voiced correlation they had, if any.
      double best = 0.0;
      for (const auto& cand : candidates[f]) best = std::max(best, cand.r);
      out.strength = best;
    }
    j = back[f][j];
  }
  return track;
}

F0Features f0_statistics(const PitchTrack& track) {
  std::vector<double> logs;
  for (const auto& f : track.frames) {
    if (f.voiced()) logs.push_back(std::log10(f.f0));
  }
  if (logs.empty()) throw InputError("no voiced frames");

  F0Features out;
  // Moments about the first value, so a constant track is exact.
  const double origin = logs.front();
  double sum = 0.0;
  for (double v : logs) sum += v - origin;
  const double mean_shift = sum / static_cast<double>(logs.size());
  out.mean_log_f0 = origin + mean_shift;
  if (logs.size() > 1) {
    double ss = 0.0;
    for (double v : logs) ss += (v - origin - mean_shift) * (v - origin - mean_shift);
    out.std_log_f0 = std::sqrt(ss / static_cast<double>(logs.size() - 1));
  }
  auto [lo, hi] = std::minmax_element(logs.begin(), logs.end());
  out.min_log_f0 = *lo;
  out.max_log_f0 = *hi;
  out.range_log_f0 = *hi - *lo;
  // Guard the ordering invariant against rounding in the mean.
  out.mean_log_f0 = std::clamp(out.mean_log_f0, out.min_log_f0, out.max_log_f0);

  double change_all = 0.0, time_all = 0.0;
  double change_kept = 0.0, time_kept = 0.0;
  const double octave_jump = kOctaveJumpThreshold * std::log10(2.0);
  for (std::size_t i = 1; i < track.frames.size(); ++i) {
    const auto& a = track.frames[i - 1];
    const auto& b = track.frames[i];
    if (!a.voiced() || !b.voiced()) continue;
    const double delta = std::abs(std::log10(b.f0) - std::log10(a.f0));
    const double dt = b.time - a.time;
    change_all += delta;
    time_all += dt;
    if (delta <= octave_jump) {
      change_kept += delta;
      time_kept += dt;
    }
  }
  out.slope_without_jump_removal = time_all > 0.0 ? change_all / time_all : 0.0;
  out.slope_with_jump_removal = time_kept > 0.0 ? change_kept / time_kept : 0.0;
  return out;
}

PointProcess pulses_from_pitch(const Waveform& w, const PitchTrack& track) {
  PointProcess out;
  out.floor = track.floor;
  out.ceiling = track.ceiling;
  const auto& fr = track.frames;
  const double rate = w.sample_rate;
  const double duration = w.duration();

  std::size_t f = 0;
  while (f < fr.size()) {
    if (!fr[f].voiced()) {
      ++f;
      continue;
    }
    const std::size_t first = f;
    while (f + 1 < fr.size() && fr[f + 1].voiced()) ++f;
    const std::size_t last = f;
    ++f;

    const double t_lo = first == 0 ? 0.0 : fr[first].time - track.time_step / 2.0;
    const double t_hi = last + 1 == fr.size() ? duration : fr[last].time + track.time_step / 2.0;
    const auto lo = static_cast<std::ptrdiff_t>(std::ceil(t_lo * rate));
    const auto hi = static_cast<std::ptrdiff_t>(std::floor(t_hi * rate));  // exclusive

    // Search [centre - half, centre + half] inside the run; false when the
    // window leaves the run.
    auto search = [&](double centre, double half, double& time) {
      const auto a = static_cast<std::ptrdiff_t>(std::ceil((centre - half) * rate));
      const auto b = static_cast<std::ptrdiff_t>(std::floor((centre + half) * rate)) + 1;
      if (a < lo || b > hi) return false;
      return strongest_peak(w, a, b, time);
    };

    double anchor = 0.0;
    {
      std::size_t best = first;
      for (std::size_t i = first; i <= last; ++i) {
        if (fr[i].strength > fr[best].strength) best = i;
      }
      const double period = 1.0 / fr[best].f0;
      const double centre = fr[best].time;
      const auto a = std::max(lo, static_cast<std::ptrdiff_t>(std::ceil((centre - period / 2) * rate)));
      const auto b = std::min(hi, static_cast<std::ptrdiff_t>(std::floor((centre + period / 2) * rate)) + 1);
      if (!strongest_peak(w, a, b, anchor)) continue;
    }

    std::vector<double> backward;
    for (double p = anchor;;) {
      const double period = 1.0 / interpolate_f0(track, first, last, p);
      double next = 0.0;
      if (!search(p - period, 0.2 * period, next) || next >= p) break;
      backward.push_back(next);
      p = next;
    }
    std::vector<double> run(backward.rbegin(), backward.rend());
    run.push_back(anchor);
    for (double p = anchor;;) {
      const double period = 1.0 / interpolate_f0(track, first, last, p);
      double next = 0.0;
      if (!search(p + period, 0.2 * period, next) || next <= p) break;
      run.push_back(next);
      p = next;
    }
    out.runs.push_back(std::move(run));
  }
  return out;
}

}  // namespace adscreen
