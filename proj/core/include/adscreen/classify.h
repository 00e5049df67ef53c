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

#ifndef ADSCREEN_CLASSIFY_H_
#define ADSCREEN_CLASSIFY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adscreen/lexical.h"

namespace adscreen {

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  void append_row(std::span<const double> values);
  Matrix select_rows(std::span<const std::size_t> indices) const;
  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// AD is the positive class.
enum class Label : int { kNonAD = 0, kAD = 1 };

std::string_view label_name(Label l);
// Accepts "AD"/"non-AD" (any case) and "1"/"0".
std::optional<Label> parse_label(std::string_view s);

struct LabeledDataset {
  std::vector<std::string> ids;
  std::vector<std::string> columns;
  Matrix features;
  std::vector<Label> labels;

  std::size_t size() const { return features.rows(); }
  LabeledDataset subset(std::span<const std::size_t> indices) const;
};

// Per-column z-scoring. A zero standard deviation is replaced by 1.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;

  Matrix apply(const Matrix& x) const;
};

Scaler fit_scaler(const Matrix& x);
inline Matrix apply_scaler(const Scaler& s, const Matrix& x) { return s.apply(x); }

struct Kernel {
  enum class Type { kLinear, kRbf };
  Type type = Type::kRbf;
  // RBF width. Zero or negative means "scale": 1 / (n_features * variance of
  // the training matrix), resolved at training time.
  double gamma = 0.0;

  double operator()(std::span<const double> a, std::span<const double> b) const;
};

std::string_view kernel_name(Kernel::Type t);
std::optional<Kernel::Type> parse_kernel(std::string_view s);

struct SvmParams {
  Kernel kernel;
  double c = 1.0;
  double tolerance = 1e-3;  // maximal KKT violation at convergence
  std::int64_t max_iterations = 10'000'000;
};

// Decision function sum_i coef_i K(sv_i, x) + bias, with coef_i = alpha_i y_i
// and y in {-1, +1} (+1 = AD).
struct SvmModel {
  Kernel kernel;  // gamma already resolved
  double c = 1.0;
  Matrix support_vectors;
  std::vector<double> dual_coef;
  double bias = 0.0;

  double decision_value(std::span<const double> x) const;
};

struct SvmTrace {
  std::int64_t iterations = 0;
  // Dual objective 0.5 a'Qa - sum(a) after every iteration.
  std::vector<double> objective;
  double kkt_gap = 0.0;
  bool converged = false;
};

struct SvmSolution {
  SvmModel model;
  std::vector<double> alpha;  // one per training row, in [0, C]
  SvmTrace trace;
};

// Soft-margin C-SVC dual solved by sequential minimal optimization with
// second-order working-set selection. Deterministic: ties in the working-set
// choice go to the lowest index. Throws InputError when only one class is
// present or C <= 0.
SvmSolution train_svm(const Matrix& x, std::span<const Label> y,
                      const SvmParams& params);

// 0.5 a'Qa - sum(a) for the given alpha.
double svm_dual_objective(const Matrix& x, std::span<const Label> y,
                          const Kernel& kernel, std::span<const double> alpha);

struct Prediction {
  Label label = Label::kNonAD;
  double decision_value = 0.0;
};

// A decision value of exactly 0 is non-AD.
Label label_from_decision(double value);

// Everything needed to score new participants.
struct ModelArtifact {
  static constexpr int kFormatVersion = 1;

  std::vector<std::string> feature_names;
  Scaler scaler;
  SvmModel svm;
  Vocabulary vocabulary;
  int max_turns = 1;
  std::string stopword_hash;
  std::string config_hash;
  std::uint64_t seed = 0;
};

// Fits the scaler, resolves gamma on the scaled matrix, trains the SVM.
ModelArtifact train_model(const LabeledDataset& data, const SvmParams& params);

// Throws InputError when the column count differs from the model.
std::vector<Prediction> predict(const ModelArtifact& model, const Matrix& rows);
std::vector<Prediction> predict(const SvmModel& model, const Matrix& scaled_rows);

std::string model_to_json(const ModelArtifact& model);
ModelArtifact model_from_json(std::string_view text);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

struct CvReport {
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  Confusion confusion;
  std::vector<int> fold_of;  // test fold of each sample

  bool operator==(const CvReport&) const = default;
};

// Stratified assignment: each class is shuffled (seeded) and dealt round
// robin, continuing the deal across classes so fold sizes stay balanced.
std::vector<int> stratified_folds(std::span<const Label> labels, std::size_t folds,
                                  std::uint64_t seed);

// Scaler and gamma are fitted inside each training fold only. Folds run on
// up to `workers` threads; the report does not depend on the thread count.
// Throws InputError when a class has fewer members than folds.
CvReport cross_validate(const LabeledDataset& data, const SvmParams& params,
                        std::size_t folds, std::uint64_t seed,
                        unsigned workers = 1);

std::string cv_report_to_json(const CvReport& report);
std::string cv_report_table(const CvReport& report);

}  // namespace adscreen

#endif  // ADSCREEN_CLASSIFY_H_
