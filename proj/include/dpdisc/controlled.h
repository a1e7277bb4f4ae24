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

// Synthetic data sources: the controlled 1-d laws used for single-column
// studies and a Wine-like multi-column table for pipeline and attack runs.

#ifndef DPDISC_CONTROLLED_H_
#define DPDISC_CONTROLLED_H_

#include <cstddef>
#include <string_view>
#include <vector>

#include "dpdisc/mechanisms.h"
#include "dpdisc/table.h"

namespace dpdisc {

enum class Distribution { kUniform, kMonotone, kNormal, kBeta, kMixture, kImbalanced };

std::string_view DistributionName(Distribution d);
Distribution ParseDistribution(std::string_view name);

// The five laws averaged over in single-column studies (uniform is only for
// display).
const std::vector<Distribution>& StudyDistributions();

inline constexpr double kControlledLo = -10.0;
inline constexpr double kControlledHi = 10.0;

struct ControlledSpec {
  Distribution distribution = Distribution::kNormal;
  size_t n = 1000;
  uint64_t seed = 0;
};

// One draw from the named law before clipping and rescaling.
double DrawRaw(Distribution d, SeededRng& rng);

// [lo, hi] envelope of the raw law: the support for bounded laws, the
// component means -+ 4 sigma otherwise.
std::pair<double, double> RawEnvelope(Distribution d);

// Samples, clips to the envelope, and maps the envelope affinely onto
// [-10, 10].
std::vector<double> GenControlled(const ControlledSpec& spec);

struct WineLikeSpec {
  size_t n = 2000;
  uint64_t seed = 0;
  // Adds a binary "quality" label column.
  bool with_label = false;
  // Replaces the last row with a record whose sulfur dioxide columns lie far
  // above every other record and whose other columns sit at their minimum.
  bool plant_target = false;
};

// Eleven numeric columns with marginals and a few correlations loosely
// modelled on the white-wine physicochemical data.
Table GenWineLike(const WineLikeSpec& spec);

}  // namespace dpdisc

#endif  // DPDISC_CONTROLLED_H_
