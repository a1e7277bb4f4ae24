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

#include "dpdisc/binsel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dpdisc/error.h"

namespace dpdisc {
namespace {

constexpr double kCeilSlack = 1e-9;

// Guards against ceil(10.000000000000002) == 11 from rounding noise.
int TolerantCeil(double x) {
  return std::max(1, static_cast<int>(std::ceil(x - kCeilSlack)));
}

int RoundHalfUp(double x) {
  return std::max(1, static_cast<int>(std::floor(x + 0.5)));
}

}  // namespace

std::string_view BinRuleName(BinRule rule) {
  switch (rule) {
    case BinRule::kDoane: return "doane";
    case BinRule::kRice: return "rice";
    case BinRule::kFdr: return "fdr";
    case BinRule::kShimazaki: return "shimazaki";
    case BinRule::kRiceOpt: return "rice_opt";
    case BinRule::kFixed: return "fixed";
  }
  return "unknown";
}

BinCount BinsDoane(int64_t n, double skewness) {
  Require(n >= 3, ErrorCode::kInvalidParameter,
          "Doane's rule needs n >= 3, got " + std::to_string(n));
  const double nd = static_cast<double>(n);
  const double sigma = std::sqrt(6.0 * (nd - 2.0) / ((nd + 1.0) * (nd + 3.0)));
  const double b =
      1.0 + std::log2(nd) + std::log2(1.0 + std::fabs(skewness) / sigma);
  return {TolerantCeil(b), BinRule::kDoane, false};
}

BinCount BinsRice(int64_t n) {
  Require(n >= 1, ErrorCode::kInvalidParameter, "Rice rule needs n >= 1");
  return {RoundHalfUp(2.0 * std::cbrt(static_cast<double>(n))), BinRule::kRice,
          false};
}

BinCount BinsFdr(std::span<const double> values) {
  Require(!values.empty(), ErrorCode::kEmptyData,
          "Freedman-Diaconis rule needs data");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = SortedQuantile(sorted, 0.75) - SortedQuantile(sorted, 0.25);
  const double range = sorted.back() - sorted.front();
  if (!(iqr > 0.0) || !(range > 0.0)) {
    BinCount fallback = BinsRice(static_cast<int64_t>(sorted.size()));
    fallback.rule = BinRule::kFdr;
    fallback.fallback = true;
    return fallback;
  }
  const double b =
      range * std::cbrt(static_cast<double>(sorted.size())) / (2.0 * iqr);
  return {TolerantCeil(b), BinRule::kFdr, false};
}

double ShimazakiCost(std::span<const double> values, int b) {
  Require(b >= 1, ErrorCode::kInvalidParameter, "candidate b must be >= 1");
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it;
  const double range = *max_it - lo;
  const double h = range / b;
  std::vector<double> counts(b, 0.0);
  for (double x : values) {
    int bin = static_cast<int>((x - lo) / h);
    counts[std::clamp(bin, 0, b - 1)] += 1.0;
  }
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / b;
  double var = 0.0;
  for (double k : counts) var += (k - mean) * (k - mean);
  var /= b;
  return (2.0 * mean - var) / (h * h);
}

BinCount BinsShimazaki(std::span<const double> values,
                       std::span<const int> candidates) {
  Require(!values.empty(), ErrorCode::kEmptyData,
          "Shimazaki-Shinomoto rule needs data");
  Require(!candidates.empty(), ErrorCode::kInvalidParameter,
          "candidate list is empty");
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  if (*min_it == *max_it) {
    return {*std::min_element(candidates.begin(), candidates.end()),
            BinRule::kShimazaki, true};
  }
  int best_b = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int b : candidates) {
    const double cost = ShimazakiCost(values, b);
    if (cost < best_cost || (cost == best_cost && b < best_b)) {
      best_cost = cost;
      best_b = b;
    }
  }
  return {best_b, BinRule::kShimazaki, false};
}

BinCount BinsShimazaki(std::span<const double> values) {
  std::vector<int> candidates(99);
  std::iota(candidates.begin(), candidates.end(), 2);
  return BinsShimazaki(values, candidates);
}

BinCount BinsRiceOpt(int64_t n, double epsilon) {
  Require(n >= 1, ErrorCode::kInvalidParameter, "RiceOpt needs n >= 1");
  Require(epsilon >= 0.0, ErrorCode::kInvalidParameter,
          "RiceOpt needs epsilon >= 0");
  const double divisor = 1.0 + std::exp(-epsilon);  // exp(-inf) == 0
  return {RoundHalfUp(2.0 * std::cbrt(static_cast<double>(n)) / divisor),
          BinRule::kRiceOpt, false};
}

double SampleSkewness(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  Require(n >= 3, ErrorCode::kInvalidParameter, "skewness needs n >= 3");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : values) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 == 0.0) return 0.0;
  const double g1 = m3 / std::pow(m2, 1.5);
  return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

double SortedQuantile(std::span<const double> sorted, double q) {
  Require(!sorted.empty(), ErrorCode::kEmptyData, "quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const size_t below = static_cast<size_t>(std::floor(pos));
  const size_t above = std::min(below + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(below);
  return sorted[below] + frac * (sorted[above] - sorted[below]);
}

}  // namespace dpdisc
