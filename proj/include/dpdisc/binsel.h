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

// Bin-count selection rules. Only Rice and the epsilon-corrected Rice rule
// are data-independent; the others read the data without noise.

#ifndef DPDISC_BINSEL_H_
#define DPDISC_BINSEL_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace dpdisc {

enum class BinRule { kDoane, kRice, kFdr, kShimazaki, kRiceOpt, kFixed };

std::string_view BinRuleName(BinRule rule);

struct BinCount {
  int b = 1;
  BinRule rule = BinRule::kFixed;
  // Set when the rule could not be applied and a fallback was used.
  bool fallback = false;
};

// ceil(1 + log2 n + log2(1 + |g1| / sigma_g1)), n >= 3.
BinCount BinsDoane(int64_t n, double skewness);
// round(2 n^(1/3)).
BinCount BinsRice(int64_t n);
// ceil(range / (2 IQR n^(-1/3))); zero IQR falls back to Rice.
BinCount BinsFdr(std::span<const double> values);
// argmin over candidates of (2 mean(k) - var(k)) / h^2 on a uniform
// histogram; ties go to the smaller b.
BinCount BinsShimazaki(std::span<const double> values,
                       std::span<const int> candidates);
BinCount BinsShimazaki(std::span<const double> values);
// round(2 n^(1/3) / (1 + exp(-epsilon))); epsilon may be infinite.
BinCount BinsRiceOpt(int64_t n, double epsilon);

// Shimazaki-Shinomoto cost for a uniform histogram with b bins over the
// data range.
double ShimazakiCost(std::span<const double> values, int b);

// Adjusted Fisher-Pearson sample skewness (G1).
double SampleSkewness(std::span<const double> values);
// Linear-interpolation quantile of sorted data, q in [0, 1].
double SortedQuantile(std::span<const double> sorted, double q);

}  // namespace dpdisc

#endif  // DPDISC_BINSEL_H_
