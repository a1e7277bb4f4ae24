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

#ifndef DPDISC_DISCRETIZERS_H_
#define DPDISC_DISCRETIZERS_H_

#include <span>
#include <string_view>
#include <vector>

#include "dpdisc/domain.h"
#include "dpdisc/mechanisms.h"

namespace dpdisc {

enum class DiscretizerKind { kUniform, kQuantile, kKMeans, kPrivTree };

std::string_view DiscretizerName(DiscretizerKind kind);
DiscretizerKind ParseDiscretizer(std::string_view name);

// Strictly increasing edges e_0 < ... < e_b with e_0 = domain.lo and
// e_b = domain.hi. Bin i is [e_i, e_{i+1}); the last bin is closed.
class BinSpec {
 public:
  // Throws kInvalidParameter if the invariants above do not hold.
  BinSpec(std::vector<double> edges, Domain domain, DiscretizerKind strategy);

  const std::vector<double>& edges() const { return edges_; }
  const Domain& domain() const { return domain_; }
  DiscretizerKind strategy() const { return strategy_; }
  int num_bins() const { return static_cast<int>(edges_.size()) - 1; }
  double lower(int bin) const { return edges_[bin]; }
  double upper(int bin) const { return edges_[bin + 1]; }

  // Zero-based bin of x; out-of-domain values clamp to the first/last bin.
  int BinOf(double x) const;

 private:
  std::vector<double> edges_;
  Domain domain_;
  DiscretizerKind strategy_;
};

// Zero-based bin indices, each in [0, spec.num_bins()).
struct BinnedColumn {
  std::vector<int> indices;
  BinSpec spec;
};

struct BinMoments {
  double mean = 0.0;
  double stddev = 0.0;
};

// One truncated-normal component per bin of the BinSpec it was fitted on.
struct BinMixture {
  std::vector<BinMoments> bins;
};

inline constexpr int kKMeansDefaultIterations = 10;
inline constexpr double kEdgeMergeTolerance = 1e-9;

BinSpec FitUniform(const Domain& domain, int b);

// Exponential-mechanism quantiles (gap weight (x_{i+1} - x_i) *
// exp(-(eps/b) |i - alpha n|)), one per interior edge.
BinSpec FitQuantileDp(std::span<const double> values, const Domain& domain,
                      int b, const PrivacyBudget& budget, SeededRng& rng);

// Lloyd iterations with geometric-noised counts and Laplace-noised sums.
// Centers start evenly spread; clusters with a non-positive final noisy count
// are dropped, so fewer than b bins may come back.
BinSpec FitKMeansDp(std::span<const double> values, const Domain& domain,
                    int b, const PrivacyBudget& budget, SeededRng& rng,
                    int iterations = kKMeansDefaultIterations);

// Binary PrivTree with fanout 2, threshold tau = n/b, and at most b leaves.
BinSpec FitPrivTree(std::span<const double> values, const Domain& domain,
                    int b, const PrivacyBudget& budget, SeededRng& rng);

BinSpec Fit(DiscretizerKind kind, std::span<const double> values,
            const Domain& domain, int b, const PrivacyBudget& budget,
            SeededRng& rng);

BinnedColumn Encode(std::span<const double> values, const BinSpec& spec);

std::vector<double> DecodeUniform(const BinnedColumn& binned, SeededRng& rng);

// Per-bin DP mean and standard deviation. Each bin gets eps / (3 b) for each
// of its count, sum and sum of squares.
BinMixture FitMixture(std::span<const double> values,
                      const BinnedColumn& binned, const PrivacyBudget& budget,
                      SeededRng& rng);

std::vector<double> DecodeMixture(const BinnedColumn& binned,
                                  const BinMixture& mixture, SeededRng& rng);

// Sorts interior edges and drops any closer than tol * width to a neighbour
// or to the domain bounds.
std::vector<double> MergeEdges(const Domain& domain,
                               std::vector<double> interior);

}  // namespace dpdisc

#endif  // DPDISC_DISCRETIZERS_H_
