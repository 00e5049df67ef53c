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

#include "adscreen/wer.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include <boost/math/distributions/students_t.hpp>

#include "adscreen/error.h"

namespace adscreen {

double EditCounts::wer() const {
  if (reference_words == 0) return 0.0;
  return static_cast<double>(errors()) / static_cast<double>(reference_words);
}

EditCounts word_error_rate(std::span<const std::string> reference,
                           std::span<const std::string> hypothesis) {
  const std::size_t n = reference.size(), m = hypothesis.size();
  if (n == 0 && m > 0) throw InputError("empty reference");

  // Cost is (edits, insertions + deletions), compared lexicographically.
  struct Cell {
    std::size_t edits = 0;
    std::size_t indels = 0;
    std::size_t subs = 0, dels = 0, ins = 0;
    auto key() const { return std::pair(edits, indels); }
  };
  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = {j, j, 0, 0, j};
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = {i, i, 0, i, 0};
    for (std::size_t j = 1; j <= m; ++j) {
      Cell diag = prev[j - 1];
      if (reference[i - 1] != hypothesis[j - 1]) {
        ++diag.edits;
        ++diag.subs;
      }
      Cell del = prev[j];
      ++del.edits;
      ++del.indels;
      ++del.dels;
      Cell ins = cur[j - 1];
      ++ins.edits;
      ++ins.indels;
      ++ins.ins;
      Cell best = diag;
      if (del.key() < best.key()) best = del;
      if (ins.key() < best.key()) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  const Cell& end = prev[m];
  return {end.subs, end.dels, end.ins, n};
}

WerReport corpus_wer(std::span<const SpeakerPair> pairs) {
  WerReport report;
  std::size_t errors = 0, words = 0;
  std::map<std::string, std::pair<double, std::size_t>> groups;
  for (const auto& p : pairs) {
    SpeakerWer s;
    s.id = p.id;
    s.label = p.label;
    try {
      s.counts = word_error_rate(p.reference, p.hypothesis);
    } catch (const InputError& e) {
      throw InputError(p.id + ": " + e.what());
    }
    s.wer = s.counts.wer();
    errors += s.counts.errors();
    words += s.counts.reference_words;
    if (s.label) {
      auto& g = groups[*s.label];
      g.first += s.wer;
      ++g.second;
    }
    report.speakers.push_back(std::move(s));
  }
  std::sort(report.speakers.begin(), report.speakers.end(),
            [](const SpeakerWer& a, const SpeakerWer& b) { return a.id < b.id; });
  report.corpus_wer = words > 0 ? static_cast<double>(errors) / static_cast<double>(words) : 0.0;
  if (!report.speakers.empty()) {
    double sum = 0.0;
    for (const auto& s : report.speakers) sum += s.wer;
    report.mean_speaker_wer = sum / static_cast<double>(report.speakers.size());
  }
  for (const auto& [label, g] : groups) {
    report.group_mean_wer[label] = g.first / static_cast<double>(g.second);
  }
  return report;
}

Correlation correlate(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("correlate: series lengths differ");
  const std::size_t n = x.size();
  if (n < 3) throw InputError("correlate: need at least 3 pairs");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw InputError("correlate: zero variance");

  Correlation c;
  c.n = n;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(n - 2);
  const double denom = 1.0 - c.r * c.r;
  if (denom <= 0.0) {
    c.p_value = 0.0;
  } else {
    const double t = c.r * std::sqrt(dof / denom);
    boost::math::students_t dist(dof);
    c.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  }
  return c;
}

}  // namespace adscreen
