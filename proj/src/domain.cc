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

#include "dpdisc/domain.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dpdisc/error.h"

namespace dpdisc {
namespace {

// Position of x among the 2(m+1) exponential bins, counted from the most
// negative bin. The first m+1 slots are the negative side.
int ExponentialBin(double x, int m) {
  if (x >= 0.0) {
    if (x < 1.0) return m + 1;
    int exponent = 0;
    std::frexp(x, &exponent);  // x in [2^(e-1), 2^e)
    return m + 1 + std::min(exponent, m);
  }
  const double magnitude = -x;
  int side_index = 0;
  if (magnitude > 1.0) {
    int exponent = 0;
    const double mantissa = std::frexp(magnitude, &exponent);
    // Negative bins are (-2^k, -2^(k-1)] mirrored, so exact powers of two
    // belong to the lower-magnitude bin.
    side_index = mantissa == 0.5 ? exponent - 1 : exponent;
  }
  return m - side_index;
}

double BinLowEdge(int bin, int m) {
  if (bin <= m) {
    const int k = m - bin;
    return -std::ldexp(1.0, k);
  }
  const int k = bin - (m + 1);
  return k == 0 ? 0.0 : std::ldexp(1.0, k - 1);
}

double BinHighEdge(int bin, int m) {
  if (bin <= m) {
    const int k = m - bin;
    return k == 0 ? 0.0 : -std::ldexp(1.0, k - 1);
  }
  return std::ldexp(1.0, bin - (m + 1));
}

}  // namespace

std::string_view DomainSourceName(DomainSource source) {
  switch (source) {
    case DomainSource::kProvided: return "provided";
    case DomainSource::kRaw: return "raw";
    case DomainSource::kDp: return "dp";
  }
  return "unknown";
}

DomainSource ParseDomainSource(std::string_view name) {
  if (name == "provided") return DomainSource::kProvided;
  if (name == "raw") return DomainSource::kRaw;
  if (name == "dp") return DomainSource::kDp;
  Fail(ErrorCode::kInvalidParameter,
       "unknown domain strategy '" + std::string(name) + "'");
}

void Domain::Validate() const {
  Require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          ErrorCode::kInvalidParameter,
          "domain requires finite lo < hi, got [" + std::to_string(lo) + ", " +
              std::to_string(hi) + "]");
}

Domain ProvidedDomain(double lo, double hi) {
  Domain d{lo, hi, DomainSource::kProvided};
  d.Validate();
  return d;
}

Domain ExtractDomainRaw(std::span<const double> values) {
  Require(!values.empty(), ErrorCode::kEmptyData,
          "cannot extract a domain from an empty column");
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  Domain d{*min_it, *max_it, DomainSource::kRaw};
  if (d.lo == d.hi) {
    d.lo -= 0.5;
    d.hi += 0.5;
  }
  d.Validate();
  return d;
}

Domain ExtractDomainDp(std::span<const double> values, double epsilon,
                       SeededRng& rng, int m) {
  Require(epsilon > 0.0, ErrorCode::kInvalidParameter,
          "DP domain extraction requires epsilon > 0");
  Require(m >= 1 && m <= 1000, ErrorCode::kInvalidParameter,
          "exponent range must lie in [1, 1000]");
  const double limit = std::ldexp(1.0, m);
  const int num_bins = 2 * (m + 1);
  std::vector<double> counts(num_bins, 0.0);
  for (double x : values) {
    if (!std::isfinite(x) || std::fabs(x) > limit) {
      Fail(ErrorCode::kOutOfRange, "value " + std::to_string(x) +
                                       " lies outside +-2^" + std::to_string(m));
    }
    counts[ExponentialBin(x, m)] += 1.0;
  }
  const double scale = epsilon == kInfinity ? 0.0 : 1.0 / epsilon;
  for (double& c : counts) c += LaplaceNoise(scale, rng);

  double threshold =
      std::log(num_bins / kDomainFailureProbability) / epsilon;
  while (true) {
    int first = -1;
    int last = -1;
    for (int i = 0; i < num_bins; ++i) {
      if (counts[i] > threshold) {
        if (first < 0) first = i;
        last = i;
      }
    }
    if (first >= 0) {
      return Domain{BinLowEdge(first, m), BinHighEdge(last, m),
                    DomainSource::kDp};
    }
    threshold /= 2.0;
    if (threshold < 1.0) {
      Fail(ErrorCode::kExtractionFailed,
           "no noisy bin count exceeded the threshold; epsilon too small");
    }
  }
}

}  // namespace dpdisc
