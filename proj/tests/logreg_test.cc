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
#include <vector>

#include "dpdisc/mechanisms.h"
#include "gtest/gtest.h"

namespace dpdisc {
namespace {

TEST(LogRegTest, GradientMatchesFiniteDifferences) {
  SeededRng rng(1);
  FeatureMatrix x(40, std::vector<double>(3));
  std::vector<int> y(40);
  for (size_t i = 0; i < x.size(); ++i) {
    for (double& v : x[i]) v = rng.StandardNormal();
    y[i] = rng.Uniform() < 0.5 ? 1 : 0;
  }
  std::vector<double> w = {0.3, -0.7, 0.2};
  const double b = 0.1, h = 1e-6;
  const std::vector<double> grad = LogisticGradient(w, b, x, y);
  ASSERT_EQ(grad.size(), 4u);
  for (size_t j = 0; j < 3; ++j) {
    std::vector<double> up = w, down = w;
    up[j] += h;
    down[j] -= h;
    const double fd = (LogisticLoss(up, b, x, y) - LogisticLoss(down, b, x, y)) / (2 * h);
    EXPECT_NEAR(grad[j], fd, 1e-5 * std::max(1.0, std::fabs(fd)));
  }
  const double fd_b = (LogisticLoss(w, b + h, x, y) - LogisticLoss(w, b - h, x, y)) / (2 * h);
  EXPECT_NEAR(grad[3], fd_b, 1e-5 * std::max(1.0, std::fabs(fd_b)));
}

TEST(LogRegTest, SeparatesSeparableData) {
  FeatureMatrix x;
  std::vector<int> y;
  for (int i = 0; i < 100; ++i) {
    x.push_back({static_cast<double>(i), 1.0});
    y.push_back(i >= 50 ? 1 : 0);
  }
  const LogRegModel m = LogRegModel::Train(x, y);
  int correct = 0;
  for (size_t i = 0; i < x.size(); ++i) correct += m.Predict(x[i]) == y[i];
  EXPECT_GE(correct, 98);
  EXPECT_GT(m.PredictProbability({99.0, 1.0}), 0.9);
  EXPECT_LT(m.PredictProbability({0.0, 1.0}), 0.1);
}

TEST(LogRegTest, UninformativeFeaturesGiveBaseRate) {
  FeatureMatrix x(100, std::vector<double>{1.0});
  std::vector<int> y(100, 0);
  for (int i = 0; i < 25; ++i) y[i] = 1;
  const LogRegModel m = LogRegModel::Train(x, y, {0.5, 2000});
  EXPECT_NEAR(m.PredictProbability({1.0}), 0.25, 0.01);
}

TEST(LogRegTest, Deterministic) {
  SeededRng rng(2);
  FeatureMatrix x(60, std::vector<double>(2));
  std::vector<int> y(60);
  for (size_t i = 0; i < x.size(); ++i) {
    for (double& v : x[i]) v = rng.Uniform();
    y[i] = x[i][0] + 0.2 * rng.StandardNormal() > 0.5;
  }
  const LogRegModel a = LogRegModel::Train(x, y);
  const LogRegModel b = LogRegModel::Train(x, y);
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.bias(), b.bias());
  EXPECT_EQ(a.PredictProbabilities(x), b.PredictProbabilities(x));
}

TEST(LogRegTest, Sigmoid) {
  EXPECT_DOUBLE_EQ(Sigmoid(0.0), 0.5);
  EXPECT_NEAR(Sigmoid(800.0), 1.0, 1e-15);
  EXPECT_GE(Sigmoid(-800.0), 0.0);
  EXPECT_NEAR(Sigmoid(2.0) + Sigmoid(-2.0), 1.0, 1e-15);
}

TEST(F1ScoreTest, Values) {
  EXPECT_DOUBLE_EQ(F1Score({1, 1, 0, 0}, {1, 1, 0, 0}), 1.0);
  // tp=1, fp=1, fn=1.
  EXPECT_DOUBLE_EQ(F1Score({1, 1, 0, 0}, {1, 0, 1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(F1Score({1, 0}, {0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(F1Score({0, 0}, {1, 1}), 0.0);
}

}  // namespace
}  // namespace dpdisc
