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

#include <algorithm>
#include <cmath>
#include <limits>

#include "adscreen/error.h"

namespace adscreen {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Interval {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
};

std::vector<std::vector<Interval>> interval_chains(const PointProcess& p) {
  const double shortest = 1.0 / p.ceiling;
  const double longest = 1.0 / p.floor;
  std::vector<std::vector<Interval>> chains;
  for (const auto& run : p.runs) {
    std::vector<Interval> chain;
    auto flush = [&] {
      if (!chain.empty()) chains.push_back(std::move(chain));
      chain.clear();
    };
    for (std::size_t i = 1; i < run.size(); ++i) {
      Interval iv{run[i - 1], run[i]};
      const double t = iv.length();
      if (t < shortest || t > longest) {
        flush();
        continue;
      }
      if (!chain.empty()) {
        const double prev = chain.back().length();
        if (std::max(t, prev) / std::min(t, prev) >= kMaxPeriodFactor) flush();
      }
      chain.push_back(iv);
    }
    flush();
  }
  return chains;
}

// Sum of |x_i - mean(x_{i-h..i+h})| over positions with a full
// neighbourhood; returns the number of such positions.
std::size_t centred_deviation(const std::vector<double>& x, std::size_t h, double& sum) {
  std::size_t count = 0;
  const std::size_t width = 2 * h + 1;
  for (std::size_t i = h; i + h < x.size(); ++i) {
    double d = 0.0;
    for (std::size_t k = i - h; k <= i + h; ++k) d += x[i] - x[k];
    sum += std::abs(d) / static_cast<double>(width);
    ++count;
  }
  return count;
}

struct PerturbationSums {
  double total = 0.0;  // sum of all values
  std::size_t values = 0;
  double first_diff = 0.0;
  std::size_t first_diff_n = 0;
  double log_ratio = 0.0;  // sum |20 log10(x_i / x_{i-1})|
  double second_diff = 0.0;
  std::size_t second_diff_n = 0;
  double dev3 = 0.0, dev5 = 0.0, dev11 = 0.0;
  std::size_t dev3_n = 0, dev5_n = 0, dev11_n = 0;

  void add(const std::vector<double>& x) {
    for (double v : x) total += v;
    values += x.size();
    for (std::size_t i = 1; i < x.size(); ++i) {
      first_diff += std::abs(x[i] - x[i - 1]);
      log_ratio += std::abs(20.0 * std::log10(x[i] / x[i - 1]));
      ++first_diff_n;
    }
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
      second_diff += std::abs((x[i + 1] - x[i]) - (x[i] - x[i - 1]));
      ++second_diff_n;
    }
    dev3_n += centred_deviation(x, 1, dev3);
    dev5_n += centred_deviation(x, 2, dev5);
    dev11_n += centred_deviation(x, 5, dev11);
  }

  double mean() const { return total / static_cast<double>(values); }
  static double ratio(double sum, std::size_t n, double denom) {
    return n == 0 ? kNaN : sum / static_cast<double>(n) / denom;
  }
};

}  // namespace

std::vector<std::vector<double>> period_chains(const PointProcess& p) {
  std::vector<std::vector<double>> out;
  for (const auto& chain : interval_chains(p)) {
    std::vector<double> periods;
    periods.reserve(chain.size());
    for (const auto& iv : chain) periods.push_back(iv.length());
    out.push_back(std::move(periods));
  }
  return out;
}

JitterMeasures jitter_from_periods(const std::vector<std::vector<double>>& chains) {
  PerturbationSums s;
  for (const auto& c : chains) s.add(c);
  if (s.first_diff_n == 0) throw InputError("insufficient periods");
  const double mean = s.mean();
  JitterMeasures j;
  j.absolute = s.first_diff / static_cast<double>(s.first_diff_n);
  j.local = j.absolute / mean;
  j.rap = PerturbationSums::ratio(s.dev3, s.dev3_n, mean);
  j.ppq5 = PerturbationSums::ratio(s.dev5, s.dev5_n, mean);
  j.ddp = PerturbationSums::ratio(s.second_diff, s.second_diff_n, mean);
  return j;
}

JitterMeasures jitter_from_periods(std::span<const double> periods) {
  return jitter_from_periods(
      std::vector<std::vector<double>>{{periods.begin(), periods.end()}});
}

JitterMeasures jitter_measures(const PointProcess& p) {
  return jitter_from_periods(period_chains(p));
}

ShimmerMeasures shimmer_from_amplitudes(const std::vector<std::vector<double>>& chains) {
  PerturbationSums s;
  for (const auto& c : chains) s.add(c);
  if (s.first_diff_n == 0) throw InputError("insufficient periods");
  const double mean = s.mean();
  ShimmerMeasures m;
  m.local = s.first_diff / static_cast<double>(s.first_diff_n) / mean;
  m.local_db = s.log_ratio / static_cast<double>(s.first_diff_n);
  m.apq3 = PerturbationSums::ratio(s.dev3, s.dev3_n, mean);
  m.apq5 = PerturbationSums::ratio(s.dev5, s.dev5_n, mean);
  m.apq11 = PerturbationSums::ratio(s.dev11, s.dev11_n, mean);
  m.dda = PerturbationSums::ratio(s.second_diff, s.second_diff_n, mean);
  return m;
}

ShimmerMeasures shimmer_from_amplitudes(std::span<const double> amplitudes) {
  return shimmer_from_amplitudes(
      std::vector<std::vector<double>>{{amplitudes.begin(), amplitudes.end()}});
}

ShimmerMeasures shimmer_measures(const Waveform& w, const PointProcess& p) {
  const auto n = static_cast<std::ptrdiff_t>(w.samples.size());
  std::vector<std::vector<double>> chains;
  for (const auto& chain : interval_chains(p)) {
    std::vector<double> amps;
    auto flush = [&] {
      if (!amps.empty()) chains.push_back(std::move(amps));
      amps.clear();
    };
    for (const auto& iv : chain) {
      auto a = std::clamp<std::ptrdiff_t>(
          static_cast<std::ptrdiff_t>(std::ceil(iv.start * w.sample_rate)), 0, n);
      auto b = std::clamp<std::ptrdiff_t>(
          static_cast<std::ptrdiff_t>(std::ceil(iv.end * w.sample_rate)), 0, n);
      double peak = 0.0;
      for (std::ptrdiff_t i = a; i < b; ++i) peak = std::max(peak, std::abs(w.samples[i]));
      if (peak <= 0.0) {
        flush();
        continue;
      }
      amps.push_back(peak);
    }
    flush();
  }
  return shimmer_from_amplitudes(chains);
}

Harmonicity harmonicity_from_correlation(double mean_r) {
  const double r = std::clamp(mean_r, 1e-6, 1.0 - 1e-6);
  Harmonicity h;
  h.autocorrelation = r;
  h.hnr = 10.0 * std::log10(r / (1.0 - r));
  h.nhr = (1.0 - r) / r;
  return h;
}

Harmonicity harmonicity_measures(const Waveform& w, const PitchTrack& track,
                                 double window_length) {
  const auto window = std::max<std::ptrdiff_t>(3, std::lround(window_length * w.sample_rate));
  const auto n = static_cast<std::ptrdiff_t>(w.samples.size());
  double sum = 0.0;
  std::size_t count = 0;
  if (n >= window) {
    for (const auto& f : track.frames) {
      if (!f.voiced()) continue;
      auto centre = static_cast<std::ptrdiff_t>(std::lround(f.time * w.sample_rate));
      centre = std::clamp(centre, window / 2, n - (window - window / 2));
      sum += correlation_peak_near(w.samples, centre, window, w.sample_rate / f.f0);
      ++count;
    }
  }
  if (count == 0) throw InputError("no voiced frames");
  return harmonicity_from_correlation(sum / static_cast<double>(count));
}

}  // namespace adscreen
