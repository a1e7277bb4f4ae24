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

#ifndef DPDISC_DOMAIN_H_
#define DPDISC_DOMAIN_H_

#include <span>
#include <string_view>

#include "dpdisc/mechanisms.h"

namespace dpdisc {

enum class DomainSource { kProvided, kRaw, kDp };

std::string_view DomainSourceName(DomainSource source);
DomainSource ParseDomainSource(std::string_view name);

struct Domain {
  double lo = 0.0;
  double hi = 1.0;
  DomainSource source = DomainSource::kProvided;

  double width() const { return hi - lo; }
  bool Contains(double x) const { return x >= lo && x <= hi; }
  // Throws kInvalidParameter unless lo < hi and both are finite.
  void Validate() const;
};

Domain ProvidedDomain(double lo, double hi);

// Min/max of the data. Constant columns are widened by 0.5 on either side.
// Not differentially private.
Domain ExtractDomainRaw(std::span<const double> values);

inline constexpr int kDefaultExponentRange = 32;
inline constexpr double kDomainFailureProbability = 1e-9;

// Bounds from a Laplace-noised histogram over the exponential bins
// [-2^m, -2^(m-1)), ..., [-1, 0), [0, 1), [1, 2), ..., [2^(m-1), 2^m].
// The threshold starts at ln(2(m+1) / 1e-9) / epsilon and halves until a
// noisy count exceeds it; it may not drop below 1.
Domain ExtractDomainDp(std::span<const double> values, double epsilon,
                       SeededRng& rng, int m = kDefaultExponentRange);

}  // namespace dpdisc

#endif  // DPDISC_DOMAIN_H_
