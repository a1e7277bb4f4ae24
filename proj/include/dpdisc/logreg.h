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

#ifndef DPDISC_LOGREG_H_
#define DPDISC_LOGREG_H_

#include <vector>

namespace dpdisc {

// Row-major design matrix.
using FeatureMatrix = std::vector<std::vector<double>>;

struct LogRegOptions {
  double learning_rate = 0.1;
  int epochs = 500;
};

// Binary logistic regression trained by full-batch gradient descent on
// standardized features, starting from zero weights. Deterministic for a
// given input order.
class LogRegModel {
 public:
  static LogRegModel Train(const FeatureMatrix& x, const std::vector<int>& y,
                           const LogRegOptions& options = {});

  double PredictProbability(const std::vector<double>& row) const;
  std::vector<double> PredictProbabilities(const FeatureMatrix& x) const;
  int Predict(const std::vector<double>& row) const {
    return PredictProbability(row) >= 0.5 ? 1 : 0;
  }

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::vector<double> mean_;
  std::vector<double> scale_;
};

double Sigmoid(double z);

// Mean binary cross-entropy of (weights, bias) on raw features, and its
// gradient (weights first, bias last).
double LogisticLoss(const std::vector<double>& weights, double bias,
                    const FeatureMatrix& x, const std::vector<int>& y);
std::vector<double> LogisticGradient(const std::vector<double>& weights,
                                     double bias, const FeatureMatrix& x,
                                     const std::vector<int>& y);

// F1 of the positive class; 0 when there are no true positives.
double F1Score(const std::vector<int>& truth, const std::vector<int>& predicted);

}  // namespace dpdisc

#endif  // DPDISC_LOGREG_H_
