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

#ifndef ADSCREEN_TESTS_ORACLES_H_
#define ADSCREEN_TESTS_ORACLES_H_

#include <string>
#include <vector>

#include "adscreen/classify.h"
#include "adscreen/lexical.h"

namespace adscreen::testing {

// Plain unit-cost edit distance.
std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b);

// First-occurrence scores by scanning every participant turn for every word.
std::vector<double> first_occurrence_brute(const Transcript& t,
                                           const std::vector<std::string>& words,
                                           std::size_t k, int max_turns);

struct DualOptimum {
  std::vector<double> alpha;
  double objective = 0.0;
  double bias = 0.0;
  bool found = false;
};

// Exhaustive active-set search for the soft-margin dual: every variable is
// pinned at 0, at C, or left free, and the free block's KKT system is solved
// directly. Only practical for a handful of points.
DualOptimum brute_force_dual(const Matrix& x, const std::vector<Label>& y,
                             const Kernel& kernel, double c);

double oracle_decision(const Matrix& x, const std::vector<Label>& y, const Kernel& kernel,
                       const DualOptimum& opt, std::span<const double> point);

}  // namespace adscreen::testing

#endif  // ADSCREEN_TESTS_ORACLES_H_
