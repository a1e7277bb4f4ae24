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

#include "dpdisc/controlled.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpdisc/error.h"

namespace dpdisc {
namespace {

// Gamma(k, 1) for integer k as a sum of exponentials.
double IntegerGamma(int k, SeededRng& rng) {
  double total = 0.0;
  for (int i = 0; i < k; ++i) total += rng.Exponential();
  return total;
}

}  // namespace

std::string_view DistributionName(Distribution d) {
  switch (d) {
    case Distribution::kUniform: return "uniform";
    case Distribution::kMonotone: return "monotone";
    case Distribution::kNormal: return "normal";
    case Distribution::kBeta: return "beta";
    case Distribution::kMixture: return "mixture";
    case Distribution::kImbalanced: return "imbalanced";
  }
  return "unknown";
}

Distribution ParseDistribution(std::string_view name) {
  for (Distribution d : {Distribution::kUniform, Distribution::kMonotone,
                         Distribution::kNormal, Distribution::kBeta,
                         Distribution::kMixture, Distribution::kImbalanced}) {
    if (DistributionName(d) == name) return d;
  }
  Fail(ErrorCode::kInvalidParameter,
       "unknown distribution '" + std::string(name) + "'");
}

const std::vector<Distribution>& StudyDistributions() {
  static const std::vector<Distribution> kStudy = {
      Distribution::kMonotone, Distribution::kNormal, Distribution::kBeta,
      Distribution::kMixture, Distribution::kImbalanced};
  return kStudy;
}

double DrawRaw(Distribution d, SeededRng& rng) {
  switch (d) {
    case Distribution::kUniform: return rng.Uniform();
    case Distribution::kMonotone: return std::sqrt(rng.Uniform());
    case Distribution::kNormal: return rng.StandardNormal();
    case Distribution::kBeta: {
      const double a = IntegerGamma(2, rng);
      const double b = IntegerGamma(14, rng);
      return a / (a + b);
    }
    case Distribution::kMixture: {
      const double mode = rng.Uniform() < 0.5 ? 2.0 : 9.0;
      return mode + rng.StandardNormal();
    }
    case Distribution::kImbalanced: {
      const double mode = rng.Uniform() < 0.95 ? 0.0 : 10.0;
      return mode + rng.StandardNormal();
    }
  }
  Fail(ErrorCode::kInvalidParameter, "unknown distribution");
}

std::pair<double, double> RawEnvelope(Distribution d) {
  switch (d) {
    case Distribution::kUniform:
    case Distribution::kMonotone:
    case Distribution::kBeta: return {0.0, 1.0};
    case Distribution::kNormal: return {-4.0, 4.0};
    case Distribution::kMixture: return {2.0 - 4.0, 9.0 + 4.0};
    case Distribution::kImbalanced: return {0.0 - 4.0, 10.0 + 4.0};
  }
  Fail(ErrorCode::kInvalidParameter, "unknown distribution");
}

std::vector<double> GenControlled(const ControlledSpec& spec) {
  Require(spec.n > 0, ErrorCode::kInvalidParameter, "n must be positive");
  SeededRng rng(spec.seed, HashLabel(DistributionName(spec.distribution)));
  const auto [lo, hi] = RawEnvelope(spec.distribution);
  std::vector<double> out;
  out.reserve(spec.n);
  for (size_t i = 0; i < spec.n; ++i) {
    const double x = std::clamp(DrawRaw(spec.distribution, rng), lo, hi);
    out.push_back(kControlledLo + (x - lo) / (hi - lo) * (kControlledHi - kControlledLo));
  }
  return out;
}

Table GenWineLike(const WineLikeSpec& spec) {
  Require(spec.n >= 2, ErrorCode::kInvalidParameter, "need at least two rows");
  SeededRng rng(spec.seed, HashLabel("wine-like"));
  struct Marginal {
    const char* name;
    double mean;
    double sd;
    double lo;
    double hi;
    bool log_normal;
  };
  // Upper limits for the sulfur dioxide columns sit well below the planted
  // target's values.
  static const Marginal kColumns[] = {
      {"fixed_acidity", 6.85, 0.84, 3.8, 14.2, false},
      {"volatile_acidity", 0.278, 0.10, 0.08, 1.1, false},
      {"citric_acid", 0.334, 0.121, 0.0, 1.66, false},
      {"residual_sugar", 6.39, 5.07, 0.6, 65.8, true},
      {"chlorides", 0.0458, 0.0218, 0.009, 0.346, true},
      {"free_sulfur_dioxide", 35.3, 17.0, 2.0, 146.5, false},
      {"total_sulfur_dioxide", 138.4, 42.5, 9.0, 366.5, false},
      {"density", 0.994, 0.003, 0.987, 1.039, false},
      {"ph", 3.19, 0.151, 2.72, 3.82, false},
      {"sulphates", 0.49, 0.114, 0.22, 1.08, false},
      {"alcohol", 10.51, 1.23, 8.0, 14.2, false},
  };
  constexpr size_t kNumColumns = std::size(kColumns);

  Table table;
  for (const Marginal& m : kColumns) table.columns.push_back({m.name, {}, false});
  Column label{"quality", {}, true};
  for (size_t r = 0; r < spec.n; ++r) {
    // Shared latent factors give sugar/density/alcohol and the two sulfur
    // columns realistic correlations.
    const double sweetness = rng.StandardNormal();
    const double sulfur = rng.StandardNormal();
    double z[kNumColumns];
    for (size_t c = 0; c < kNumColumns; ++c) z[c] = rng.StandardNormal();
    z[3] = 0.8 * sweetness + 0.6 * z[3];
    z[5] = 0.75 * sulfur + 0.66 * z[5];
    z[6] = 0.75 * sulfur + 0.4 * sweetness + 0.53 * z[6];
    z[10] = -0.6 * sweetness + 0.8 * z[10];
    z[7] = 0.6 * z[3] - 0.6 * z[10] + 0.53 * z[7];
    for (size_t c = 0; c < kNumColumns; ++c) {
      const Marginal& m = kColumns[c];
      double x;
      if (m.log_normal) {
        const double s2 = std::log(1.0 + (m.sd * m.sd) / (m.mean * m.mean));
        x = std::exp(std::log(m.mean) - s2 / 2.0 + std::sqrt(s2) * z[c]);
      } else {
        x = m.mean + m.sd * z[c];
      }
      table.columns[c].values.push_back(std::clamp(x, m.lo, m.hi));
    }
    const double logit = 0.7 + 1.4 * z[10] - 0.6 * z[1] + 0.3 * z[9] +
                         0.8 * rng.StandardNormal();
    label.values.push_back(logit > 0.0 ? 1.0 : 0.0);
  }
  if (spec.plant_target) {
    // Sulfur dioxide far above every other record, the remaining columns at
    // the low corner, so the plant is the most isolated record.
    const size_t last = spec.n - 1;
    for (size_t c = 0; c < kNumColumns; ++c) {
      auto& v = table.columns[c].values;
      v[last] = *std::min_element(v.begin(), v.end() - 1);
    }
    table.columns[5].values[last] = 289.0;
    table.columns[6].values[last] = 440.0;
  }
  if (spec.with_label) table.columns.push_back(std::move(label));
  return table;
}

}  // namespace dpdisc
