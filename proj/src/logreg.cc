//
// Copyright 2026 The dpdisc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpdisc/logreg.h"

#include <algorithm>
#include <cmath>

#include "dpdisc/error.h"

namespace dpdisc {

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

void CheckShapes(const FeatureMatrix& x, const std::vector<int>& y) {
  Require(!x.empty(), ErrorCode::kEmptyData, "logistic regression needs rows");
  Require(x.size() == y.size(), ErrorCode::kLengthMismatch,
          "feature rows and labels differ in count");
  for (const auto& row : x) {
    Require(row.size() == x.front().size(), ErrorCode::kLengthMismatch,
            "ragged feature matrix");
  }
}

double Margin(const std::vector<double>& w, double bias,
              const std::vector<double>& row) {
  double z = bias;
  for (size_t j = 0; j < w.size(); ++j) z += w[j] * row[j];
  return z;
}

}  // namespace

double LogisticLoss(const std::vector<double>& weights, double bias,
                    const FeatureMatrix& x, const std::vector<int>& y) {
  CheckShapes(x, y);
  double loss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double z = Margin(weights, bias, x[i]);
    // log(1 + exp(-z)) for y = 1, log(1 + exp(z)) for y = 0, overflow-safe.
    const double s = y[i] == 1 ? -z : z;
    loss += s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
  }
  return loss / static_cast<double>(x.size());
}

std::vector<double> LogisticGradient(const std::vector<double>& weights,
                                     double bias, const FeatureMatrix& x,
                                     const std::vector<int>& y) {
  CheckShapes(x, y);
  std::vector<double> grad(weights.size() + 1, 0.0);
  for (size_t i = 0; i < x.size(); ++i) {
    const double residual = Sigmoid(Margin(weights, bias, x[i])) - y[i];
    for (size_t j = 0; j < weights.size(); ++j) grad[j] += residual * x[i][j];
    grad.back() += residual;
  }
  for (double& g : grad) g /= static_cast<double>(x.size());
  return grad;
}

LogRegModel LogRegModel::Train(const FeatureMatrix& x, const std::vector<int>& y,
                               const LogRegOptions& options) {
  CheckShapes(x, y);
  const size_t d = x.front().size();
  const double n = static_cast<double>(x.size());
  LogRegModel model;
  model.mean_.assign(d, 0.0);
  model.scale_.assign(d, 1.0);
  for (const auto& row : x) {
    for (size_t j = 0; j < d; ++j) model.mean_[j] += row[j];
  }
  for (double& m : model.mean_) m /= n;
  std::vector<double> var(d, 0.0);
  for (const auto& row : x) {
    for (size_t j = 0; j < d; ++j) {
      const double c = row[j] - model.mean_[j];
      var[j] += c * c;
    }
  }
  for (size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / n);
    model.scale_[j] = sd > 0.0 ? sd : 1.0;
  }

  // Standardized copy, row-major in one buffer.
  const size_t rows = x.size();
  std::vector<double> z(rows * d);
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < d; ++j) {
      z[i * d + j] = (x[i][j] - model.mean_[j]) / model.scale_[j];
    }
  }
  model.weights_.assign(d, 0.0);
  model.bias_ = 0.0;
  std::vector<double> grad(d);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (size_t i = 0; i < rows; ++i) {
      const double* row = &z[i * d];
      double margin = model.bias_;
      for (size_t j = 0; j < d; ++j) margin += model.weights_[j] * row[j];
      const double residual = Sigmoid(margin) - y[i];
      for (size_t j = 0; j < d; ++j) grad[j] += residual * row[j];
      grad_bias += residual;
    }
    for (size_t j = 0; j < d; ++j) {
      model.weights_[j] -= options.learning_rate * grad[j] / n;
    }
    model.bias_ -= options.learning_rate * grad_bias / n;
  }
  return model;
}

double LogRegModel::PredictProbability(const std::vector<double>& row) const {
  Require(row.size() == weights_.size(), ErrorCode::kLengthMismatch,
          "feature row has the wrong width");
  double z = bias_;
  for (size_t j = 0; j < row.size(); ++j) {
    z += weights_[j] * (row[j] - mean_[j]) / scale_[j];
  }
  return Sigmoid(z);
}

std::vector<double> LogRegModel::PredictProbabilities(
    const FeatureMatrix& x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(PredictProbability(row));
  return out;
}

double F1Score(const std::vector<int>& truth, const std::vector<int>& predicted) {
  Require(truth.size() == predicted.size(), ErrorCode::kLengthMismatch,
          "truth and predictions differ in length");
  double tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == 1 && truth[i] == 1) ++tp;
    if (predicted[i] == 1 && truth[i] == 0) ++fp;
    if (predicted[i] == 0 && truth[i] == 1) ++fn;
  }
  if (tp == 0) return 0.0;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

}  // namespace dpdisc
