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

#include "adscreen/classify.h"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "adscreen/error.h"

namespace adscreen {

namespace {

using json = nlohmann::ordered_json;

constexpr double kTau = 1e-12;

double sign_of(Label l) { return l == Label::kAD ? 1.0 : -1.0; }

double scale_gamma(const Matrix& x) {
  const auto count = static_cast<double>(x.rows() * x.cols());
  if (count == 0.0) return 1.0;
  double mean = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (double v : x.row(r)) mean += v;
  }
  mean /= count;
  double var = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (double v : x.row(r)) var += (v - mean) * (v - mean);
  }
  var /= count;
  return var > 0.0 ? 1.0 / (static_cast<double>(x.cols()) * var) : 1.0;
}

Kernel resolve(Kernel k, const Matrix& x) {
  if (k.type == Kernel::Type::kRbf && !(k.gamma > 0.0)) k.gamma = scale_gamma(x);
  return k;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, std::size_t cols) {
  Matrix m(0, cols);
  for (const auto& row : j) {
    auto values = row.get<std::vector<double>>();
    if (values.size() != cols) throw InputError("model: support vector width mismatch");
    m.append_row(values);
  }
  return m;
}

}  // namespace

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw InputError("matrix: row width mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(0, cols_);
  for (std::size_t i : indices) out.append_row(row(i));
  return out;
}

std::string_view label_name(Label l) { return l == Label::kAD ? "AD" : "non-AD"; }

std::optional<Label> parse_label(std::string_view s) {
  std::string lower(s);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "ad" || lower == "1") return Label::kAD;
  if (lower == "non-ad" || lower == "nonad" || lower == "0") return Label::kNonAD;
  return std::nullopt;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.columns = columns;
  out.features = features.select_rows(indices);
  for (std::size_t i : indices) {
    if (!ids.empty()) out.ids.push_back(ids[i]);
    out.labels.push_back(labels[i]);
  }
  return out;
}

Matrix Scaler::apply(const Matrix& x) const {
  if (x.cols() != mean.size()) throw InputError("scaler: column count mismatch");
  Matrix out = x;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = (row[c] - mean[c]) / stddev[c];
  }
  return out;
}

Scaler fit_scaler(const Matrix& x) {
  if (x.rows() == 0) throw InputError("scaler: empty matrix");
  Scaler s;
  s.mean.assign(x.cols(), 0.0);
  s.stddev.assign(x.cols(), 0.0);
  const auto n = static_cast<double>(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) s.mean[c] += x(r, c);
  }
  for (auto& m : s.mean) m /= n;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double d = x(r, c) - s.mean[c];
      s.stddev[c] += d * d;
    }
  }
  for (auto& sd : s.stddev) {
    sd = std::sqrt(sd / n);
    if (!(sd > 0.0)) sd = 1.0;
  }
  return s;
}

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const {
  double acc = 0.0;
  if (type == Type::kLinear) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::exp(-gamma * acc);
}

std::string_view kernel_name(Kernel::Type t) {
  return t == Kernel::Type::kLinear ? "linear" : "rbf";
}

std::optional<Kernel::Type> parse_kernel(std::string_view s) {
  if (s == "linear") return Kernel::Type::kLinear;
  if (s == "rbf") return Kernel::Type::kRbf;
  return std::nullopt;
}

double SvmModel::decision_value(std::span<const double> x) const {
  double sum = bias;
  for (std::size_t i = 0; i < dual_coef.size(); ++i) {
    sum += dual_coef[i] * kernel(support_vectors.row(i), x);
  }
  return sum;
}

Label label_from_decision(double value) { return value > 0.0 ? Label::kAD : Label::kNonAD; }

double svm_dual_objective(const Matrix& x, std::span<const Label> y, const Kernel& kernel,
                          std::span<const double> alpha) {
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    lin += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < x.rows(); ++j) {
      if (alpha[j] == 0.0) continue;
      quad += alpha[i] * alpha[j] * sign_of(y[i]) * sign_of(y[j]) * kernel(x.row(i), x.row(j));
    }
  }
  return 0.5 * quad - lin;
}

SvmSolution train_svm(const Matrix& x, std::span<const Label> y, const SvmParams& params) {
  const std::size_t n = x.rows();
  if (y.size() != n) throw InputError("svm: label count does not match rows");
  if (!(params.c > 0.0)) throw InputError("svm: C must be positive");
  const bool has_pos = std::find(y.begin(), y.end(), Label::kAD) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), Label::kNonAD) != y.end();
  if (!has_pos || !has_neg) throw InputError("svm: training data must contain both classes");

  const Kernel kernel = resolve(params.kernel, x);
  const double c = params.c;
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = sign_of(y[i]);
  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      k[i * n + j] = k[j * n + i] = kernel(x.row(i), x.row(j));
    }
  }
  auto kij = [&](std::size_t i, std::size_t j) { return k[i * n + j]; };

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // Q alpha - e
  auto in_up = [&](std::size_t t) {
    return (ys[t] > 0 && alpha[t] < c) || (ys[t] < 0 && alpha[t] > 0);
  };
  auto in_low = [&](std::size_t t) {
    return (ys[t] > 0 && alpha[t] > 0) || (ys[t] < 0 && alpha[t] < c);
  };
  auto objective = [&] {
    double f = 0.0;
    for (std::size_t t = 0; t < n; ++t) f += alpha[t] * (grad[t] - 1.0);
    return 0.5 * f;
  };

  SvmTrace trace;
  while (true) {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -ys[t] * grad[t] > gmax) {
        gmax = -ys[t] * grad[t];
        i = t;
      }
    }
    std::size_t j = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      gmax2 = std::max(gmax2, ys[t] * grad[t]);
      if (i == n) continue;
      const double b = gmax + ys[t] * grad[t];
      if (b <= 0.0) continue;
      double a = kij(i, i) + kij(t, t) - 2.0 * kij(i, t);
      if (a <= 0.0) a = kTau;
      const double score = -(b * b) / a;
      if (score < best) {
        best = score;
        j = t;
      }
    }
    trace.kkt_gap = gmax + gmax2;
    if (i == n || j == n || trace.kkt_gap < params.tolerance) {
      trace.converged = true;
      break;
    }
    if (trace.iterations >= params.max_iterations) break;

    const double old_i = alpha[i], old_j = alpha[j];
    if (ys[i] != ys[j]) {
      double quad = kij(i, i) + kij(j, j) - 2.0 * kij(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = kij(i, i) + kij(j, j) - 2.0 * kij(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += ys[t] * (ys[i] * kij(t, i) * di + ys[j] * kij(t, j) * dj);
    }
    ++trace.iterations;
    trace.objective.push_back(objective());
  }

  // Bias from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = ys[t] * grad[t];
    if (alpha[t] >= c) {
      if (ys[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (ys[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;

  SvmSolution sol;
  sol.model.kernel = kernel;
  sol.model.c = c;
  sol.model.bias = -rho;
  sol.model.support_vectors = Matrix(0, x.cols());
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      sol.model.support_vectors.append_row(x.row(t));
      sol.model.dual_coef.push_back(alpha[t] * ys[t]);
    }
  }
  sol.alpha = std::move(alpha);
  sol.trace = std::move(trace);
  return sol;
}

std::vector<Prediction> predict(const SvmModel& model, const Matrix& scaled_rows) {
  std::vector<Prediction> out;
  out.reserve(scaled_rows.rows());
  for (std::size_t r = 0; r < scaled_rows.rows(); ++r) {
    Prediction p;
    p.decision_value = model.decision_value(scaled_rows.row(r));
    p.label = label_from_decision(p.decision_value);
    out.push_back(p);
  }
  return out;
}

std::vector<Prediction> predict(const ModelArtifact& model, const Matrix& rows) {
  if (rows.rows() > 0 && rows.cols() != model.scaler.mean.size()) {
    throw InputError("predict: expected " + std::to_string(model.scaler.mean.size()) +
                     " feature columns, got " + std::to_string(rows.cols()));
  }
  if (rows.rows() == 0) return {};
  return predict(model.svm, model.scaler.apply(rows));
}

ModelArtifact train_model(const LabeledDataset& data, const SvmParams& params) {
  ModelArtifact m;
  m.feature_names = data.columns;
  m.scaler = fit_scaler(data.features);
  const Matrix scaled = m.scaler.apply(data.features);
  SvmParams p = params;
  p.kernel = resolve(params.kernel, scaled);
  m.svm = train_svm(scaled, data.labels, p).model;
  return m;
}

std::string model_to_json(const ModelArtifact& m) {
  json j;
  j["format"] = "adscreen-model";
  j["version"] = ModelArtifact::kFormatVersion;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["feature_names"] = m.feature_names;
  j["scaler"] = {{"mean", m.scaler.mean}, {"stddev", m.scaler.stddev}};
  j["svm"] = {
      {"kernel", kernel_name(m.svm.kernel.type)},
      {"gamma", m.svm.kernel.gamma},
      {"C", m.svm.c},
      {"bias", m.svm.bias},
      {"dual_coef", m.svm.dual_coef},
      {"support_vectors", matrix_to_json(m.svm.support_vectors)},
  };
  j["lexicon"] = {
      {"k", m.vocabulary.k},
      {"words", m.vocabulary.words},
      {"counts", m.vocabulary.counts},
      {"max_turns", m.max_turns},
      {"stopword_hash", m.stopword_hash},
  };
  return j.dump(2) + "\n";
}

ModelArtifact model_from_json(std::string_view text) {
  ModelArtifact m;
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "adscreen-model") throw InputError("model: not an adscreen model");
    const int version = j.at("version").get<int>();
    if (version != ModelArtifact::kFormatVersion) {
      throw InputError("model: unsupported version " + std::to_string(version));
    }
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
    m.scaler.stddev = j.at("scaler").at("stddev").get<std::vector<double>>();
    const auto& svm = j.at("svm");
    auto type = parse_kernel(svm.at("kernel").get<std::string>());
    if (!type) throw InputError("model: unknown kernel");
    m.svm.kernel.type = *type;
    m.svm.kernel.gamma = svm.at("gamma").get<double>();
    m.svm.c = svm.at("C").get<double>();
    m.svm.bias = svm.at("bias").get<double>();
    m.svm.dual_coef = svm.at("dual_coef").get<std::vector<double>>();
    m.svm.support_vectors = matrix_from_json(svm.at("support_vectors"), m.scaler.mean.size());
    const auto& lex = j.at("lexicon");
    m.vocabulary.k = lex.at("k").get<std::size_t>();
    m.vocabulary.words = lex.at("words").get<std::vector<std::string>>();
    m.vocabulary.counts = lex.at("counts").get<std::vector<std::size_t>>();
    m.max_turns = lex.at("max_turns").get<int>();
    m.stopword_hash = lex.at("stopword_hash").get<std::string>();
  } catch (const json::exception& e) {
    throw InputError(std::string("model: ") + e.what());
  }
  if (m.feature_names.size() != m.scaler.mean.size() ||
      m.scaler.stddev.size() != m.scaler.mean.size() ||
      m.svm.dual_coef.size() != m.svm.support_vectors.rows()) {
    throw InputError("model: inconsistent dimensions");
  }
  return m;
}

std::vector<int> stratified_folds(std::span<const Label> labels, std::size_t folds,
                                  std::uint64_t seed) {
  if (folds == 0) throw InputError("folds must be positive");
  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(labels.size(), 0);
  std::size_t dealt = 0;
  for (Label cls : {Label::kNonAD, Label::kAD}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    // Fisher-Yates on raw engine output keeps the permutation identical
    // across standard libraries.
    for (std::size_t i = members.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(members[i - 1], members[j]);
    }
    for (std::size_t idx : members) fold_of[idx] = static_cast<int>(dealt++ % folds);
  }
  return fold_of;
}

CvReport cross_validate(const LabeledDataset& data, const SvmParams& params, std::size_t folds,
                        std::uint64_t seed, unsigned workers) {
  if (folds < 2) throw InputError("cross-validation needs at least 2 folds");
  const auto ad = static_cast<std::size_t>(std::count(data.labels.begin(), data.labels.end(), Label::kAD));
  const std::size_t non_ad = data.labels.size() - ad;
  if (std::min(ad, non_ad) < folds) {
    throw InputError("class count " + std::to_string(std::min(ad, non_ad)) + " is smaller than " +
                     std::to_string(folds) + " folds; use --folds with a smaller value");
  }

  CvReport report;
  report.folds = folds;
  report.seed = seed;
  report.fold_of = stratified_folds(data.labels, folds, seed);
  report.fold_accuracy.assign(folds, 0.0);
  std::vector<Confusion> per_fold(folds);

  auto run_fold = [&](std::size_t f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < data.size(); ++i) {
      (report.fold_of[i] == static_cast<int>(f) ? test : train).push_back(i);
    }
    const ModelArtifact model = train_model(data.subset(train), params);
    const auto preds = predict(model, data.features.select_rows(test));
    Confusion& cm = per_fold[f];
    for (std::size_t k = 0; k < test.size(); ++k) {
      const bool truth = data.labels[test[k]] == Label::kAD;
      const bool guess = preds[k].label == Label::kAD;
      if (truth && guess) ++cm.tp;
      else if (truth) ++cm.fn;
      else if (guess) ++cm.fp;
      else ++cm.tn;
    }
    report.fold_accuracy[f] =
        static_cast<double>(cm.tp + cm.tn) / static_cast<double>(test.size());
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(folds)));
  if (threads == 1) {
    for (std::size_t f = 0; f < folds; ++f) run_fold(f);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mu;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t f = t; f < folds; f += threads) {
          try {
            run_fold(f);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  double sum = 0.0;
  for (std::size_t f = 0; f < folds; ++f) {
    sum += report.fold_accuracy[f];
    report.confusion.tp += per_fold[f].tp;
    report.confusion.fp += per_fold[f].fp;
    report.confusion.tn += per_fold[f].tn;
    report.confusion.fn += per_fold[f].fn;
  }
  report.mean_accuracy = sum / static_cast<double>(folds);
  return report;
}

std::string cv_report_to_json(const CvReport& r) {
  json j;
  j["folds"] = r.folds;
  j["seed"] = r.seed;
  j["fold_accuracy"] = r.fold_accuracy;
  j["mean_accuracy"] = r.mean_accuracy;
  j["confusion"] = {{"tp", r.confusion.tp}, {"fp", r.confusion.fp},
                    {"tn", r.confusion.tn}, {"fn", r.confusion.fn}};
  j["fold_of"] = r.fold_of;
  return j.dump(2) + "\n";
}

std::string cv_report_table(const CvReport& r) {
  std::ostringstream out;
  out << "fold  accuracy\n";
  out.setf(std::ios::fixed);
  out.precision(4);
  for (std::size_t f = 0; f < r.fold_accuracy.size(); ++f) {
    out << (f + 1 < 10 ? " " : "") << f + 1 << "    " << r.fold_accuracy[f] << "\n";
  }
  out << "mean  " << r.mean_accuracy << "\n";
  out << "confusion (AD positive): TP=" << r.confusion.tp << " FP=" << r.confusion.fp
      << " TN=" << r.confusion.tn << " FN=" << r.confusion.fn << "\n";
  return out.str();
}

}  // namespace adscreen
