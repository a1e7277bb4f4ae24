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

#include "dpdisc/truncated_normal.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dpdisc/error.h"

namespace dpdisc {
namespace {

// Standard normal truncated to [a, b] with 0 <= a < b.
double SampleUpperTail(double a, double b, SeededRng& rng) {
  const double lambda = (a + std::sqrt(a * a + 4.0)) / 2.0;
  const double exp_bound =
      a + 2.0 * std::sqrt(std::numbers::e) / (a + std::sqrt(a * a + 4.0)) *
              std::exp((a * a - a * std::sqrt(a * a + 4.0)) / 4.0);
  if (b <= exp_bound) {
    // Narrow interval: uniform proposal.
    while (true) {
      const double z = a + (b - a) * rng.Uniform();
      if (rng.Uniform() <= std::exp((a * a - z * z) / 2.0)) return z;
    }
  }
  while (true) {
    const double z = a + rng.Exponential() / lambda;
    if (z > b) continue;
    if (rng.Uniform() <= std::exp(-(z - lambda) * (z - lambda) / 2.0)) return z;
  }
}

double SampleStandard(double a, double b, SeededRng& rng) {
  if (a >= 0.0) return SampleUpperTail(a, b, rng);
  if (b <= 0.0) return -SampleUpperTail(-b, -a, rng);
  if (b - a < std::sqrt(2.0 * std::numbers::pi)) {
    while (true) {
      const double z = a + (b - a) * rng.Uniform();
      if (rng.Uniform() <= std::exp(-z * z / 2.0)) return z;
    }
  }
  while (true) {
    const double z = rng.StandardNormal();
    if (z >= a && z <= b) return z;
  }
}

}  // namespace

double SampleTruncatedNormal(double mean, double stddev, double lo, double hi,
                             SeededRng& rng) {
  Require(lo <= hi, ErrorCode::kInvalidParameter,
          "truncation interval must satisfy lo <= hi");
  Require(stddev >= 0.0, ErrorCode::kInvalidParameter,
          "stddev must be non-negative");
  if (stddev == 0.0 || lo == hi) return std::clamp(mean, lo, hi);
  const double a = (lo - mean) / stddev;
  const double b = (hi - mean) / stddev;
  if (!std::isfinite(a) || !std::isfinite(b)) return std::clamp(mean, lo, hi);
  // Mass piles up on the near bound; avoid overflow in the tail sampler.
  if (a > 1e8) return lo;
  if (b < -1e8) return hi;
  const double z = SampleStandard(a, b, rng);
  return std::clamp(mean + stddev * z, lo, hi);
}

}  // namespace dpdisc
