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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace adscreen::testing {

std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

std::vector<double> first_occurrence_brute(const Transcript& t,
                                           const std::vector<std::string>& words,
                                           std::size_t k, int max_turns) {
  std::vector<double> out(k, 0.0);
  for (std::size_t w = 0; w < words.size(); ++w) {
    int ordinal = 0;
    int first = -1;
    for (const auto& turn : t.turns) {
      if (turn.speaker != "PAR") continue;
      const auto toks = tokenize(turn.text);
      if (first < 0 && std::find(toks.begin(), toks.end(), words[w]) != toks.end()) {
        first = ordinal;
      }
      ++ordinal;
    }
    const double turn = first < 0 ? max_turns : std::min(first, max_turns);
    out[w] = 1.0 - turn / max_turns;
  }
  return out;
}

DualOptimum brute_force_dual(const Matrix& x, const std::vector<Label>& y,
                             const Kernel& kernel, double c) {
  const int n = static_cast<int>(x.rows());
  Eigen::VectorXd ys(n);
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i) ys(i) = y[static_cast<std::size_t>(i)] == Label::kAD ? 1.0 : -1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      q(i, j) = ys(i) * ys(j) * kernel(x.row(static_cast<std::size_t>(i)),
                                       x.row(static_cast<std::size_t>(j)));
    }
  }

  DualOptimum best;
  best.objective = std::numeric_limits<double>::infinity();
  int patterns = 1;
  for (int i = 0; i < n; ++i) patterns *= 3;
  for (int code = 0; code < patterns; ++code) {
    // state 0: alpha = 0, 1: alpha = C, 2: free
    std::vector<int> state(static_cast<std::size_t>(n));
    int rest = code;
    for (int i = 0; i < n; ++i) {
      state[static_cast<std::size_t>(i)] = rest % 3;
      rest /= 3;
    }
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    std::vector<int> free;
    for (int i = 0; i < n; ++i) {
      if (state[static_cast<std::size_t>(i)] == 1) alpha(i) = c;
      if (state[static_cast<std::size_t>(i)] == 2) free.push_back(i);
    }
    const int f = static_cast<int>(free.size());
    if (f > 0) {
      // [Q_FF y_F; y_F' 0] [a_F; nu] = [1 - Q_FB a_B; -y_B' a_B]
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(f + 1, f + 1);
      Eigen::VectorXd b(f + 1);
      for (int r = 0; r < f; ++r) {
        for (int s = 0; s < f; ++s) a(r, s) = q(free[r], free[s]);
        a(r, f) = ys(free[r]);
        a(f, r) = ys(free[r]);
        b(r) = 1.0 - q.row(free[r]).dot(alpha);
      }
      b(f) = -ys.dot(alpha);
      const Eigen::VectorXd sol = a.completeOrthogonalDecomposition().solve(b);
      if ((a * sol - b).norm() > 1e-8) continue;
      for (int r = 0; r < f; ++r) alpha(free[r]) = sol(r);
    }
    if (std::abs(ys.dot(alpha)) > 1e-9) continue;
    if ((alpha.array() < -1e-9).any() || (alpha.array() > c + 1e-9).any()) continue;
    const double obj = 0.5 * alpha.dot(q * alpha) - alpha.sum();
    if (obj < best.objective - 1e-12) {
      best.objective = obj;
      best.alpha.assign(alpha.data(), alpha.data() + n);
      best.found = true;
    }
  }
  if (!best.found) return best;

  // Bias: average over free vectors, else the midpoint of the feasible range.
  Eigen::VectorXd a = Eigen::Map<Eigen::VectorXd>(best.alpha.data(), n);
  const Eigen::VectorXd grad = q * a - Eigen::VectorXd::Ones(n);
  double sum = 0.0, lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  int count = 0;
  const double eps = 1e-7;
  for (int i = 0; i < n; ++i) {
    const double yg = ys(i) * grad(i);
    if (a(i) > eps && a(i) < c - eps) {
      sum += yg;
      ++count;
    } else if ((a(i) >= c - eps) == (ys(i) < 0)) {
      hi = std::min(hi, yg);
    } else {
      lo = std::max(lo, yg);
    }
  }
  best.bias = -(count > 0 ? sum / count : (hi + lo) / 2.0);
  return best;
}

double oracle_decision(const Matrix& x, const std::vector<Label>& y, const Kernel& kernel,
                       const DualOptimum& opt, std::span<const double> point) {
  double sum = opt.bias;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    sum += opt.alpha[i] * (y[i] == Label::kAD ? 1.0 : -1.0) * kernel(x.row(i), point);
  }
  return sum;
}

}  // namespace adscreen::testing
