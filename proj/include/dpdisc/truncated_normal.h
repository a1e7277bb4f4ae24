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

#ifndef DPDISC_TRUNCATED_NORMAL_H_
#define DPDISC_TRUNCATED_NORMAL_H_

#include "dpdisc/mechanisms.h"

namespace dpdisc {

// Draws from N(mean, stddev^2) restricted to [lo, hi] using Robert's (1995)
// accept-reject scheme, which stays stable deep in the tails. stddev == 0
// returns mean clamped into the interval.
double SampleTruncatedNormal(double mean, double stddev, double lo, double hi,
                             SeededRng& rng);

}  // namespace dpdisc

#endif  // DPDISC_TRUNCATED_NORMAL_H_
