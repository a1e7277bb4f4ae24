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

#include "dpdisc/discretizers.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "dpdisc/error.h"
#include "dpdisc/truncated_normal.h"

namespace dpdisc {
namespace {

void RequireBins(int b) {
  Require(b >= 1, ErrorCode::kInvalidParameter,
          "number of bins must be at least 1, got " + std::to_string(b));
}

void RequirePositiveEpsilon(const PrivacyBudget& budget, std::string_view who) {
  budget.Validate();
  Require(budget.epsilon > 0.0, ErrorCode::kInvalidParameter,
          std::string(who) + " requires epsilon > 0");
}

std::vector<double> ClampedSorted(std::span<const double> values,
                                  const Domain& domain) {
  std::vector<double> out(values.begin(), values.end());
  for (double& x : out) x = std::clamp(x, domain.lo, domain.hi);
  std::sort(out.begin(), out.end());
  return out;
}

BinSpec FromInterior(const Domain& domain, std::vector<double> interior,
                     DiscretizerKind kind) {
  return BinSpec(MergeEdges(domain, std::move(interior)), domain, kind);
}

// Index of the gap chosen for target rank `rank` at infinite epsilon: the
// closest positive-width gap, ties broken uniformly.
size_t NearestGap(const std::vector<double>& augmented, double rank,
                  SeededRng& rng) {
  double best = kInfinity;
  std::vector<size_t> ties;
  for (size_t i = 0; i + 1 < augmented.size(); ++i) {
    if (augmented[i + 1] <= augmented[i]) continue;
    const double distance = std::fabs(static_cast<double>(i) - rank);
    if (distance < best) {
      best = distance;
      ties.assign(1, i);
    } else if (distance == best) {
      ties.push_back(i);
    }
  }
  return ties[rng.UniformInt(ties.size())];
}

}  // namespace

std::string_view DiscretizerName(DiscretizerKind kind) {
  switch (kind) {
    case DiscretizerKind::kUniform: return "uniform";
    case DiscretizerKind::kQuantile: return "quantile";
    case DiscretizerKind::kKMeans: return "kmeans";
    case DiscretizerKind::kPrivTree: return "privtree";
  }
  return "unknown";
}

DiscretizerKind ParseDiscretizer(std::string_view name) {
  if (name == "uniform") return DiscretizerKind::kUniform;
  if (name == "quantile") return DiscretizerKind::kQuantile;
  if (name == "kmeans" || name == "k-means") return DiscretizerKind::kKMeans;
  if (name == "privtree") return DiscretizerKind::kPrivTree;
  Fail(ErrorCode::kInvalidParameter,
       "unknown discretizer '" + std::string(name) + "'");
}

BinSpec::BinSpec(std::vector<double> edges, Domain domain,
                 DiscretizerKind strategy)
    : edges_(std::move(edges)), domain_(domain), strategy_(strategy) {
  domain_.Validate();
  Require(edges_.size() >= 2, ErrorCode::kInvalidParameter,
          "a bin spec needs at least two edges");
  Require(edges_.front() == domain_.lo && edges_.back() == domain_.hi,
          ErrorCode::kInvalidParameter, "edges must span the domain exactly");
  for (size_t i = 1; i < edges_.size(); ++i) {
    Require(edges_[i - 1] < edges_[i], ErrorCode::kInvalidParameter,
            "edges must be strictly increasing");
  }
}

int BinSpec::BinOf(double x) const {
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  const int bin = static_cast<int>(it - edges_.begin()) - 1;
  return std::clamp(bin, 0, num_bins() - 1);
}

std::vector<double> MergeEdges(const Domain& domain,
                               std::vector<double> interior) {
  const double tol = kEdgeMergeTolerance * domain.width();
  std::sort(interior.begin(), interior.end());
  std::vector<double> edges{domain.lo};
  for (double e : interior) {
    if (e <= edges.back() + tol || e >= domain.hi - tol) continue;
    edges.push_back(e);
  }
  edges.push_back(domain.hi);
  return edges;
}

BinSpec FitUniform(const Domain& domain, int b) {
  RequireBins(b);
  domain.Validate();
  std::vector<double> edges(b + 1);
  for (int i = 0; i <= b; ++i) {
    edges[i] = domain.lo + i * (domain.hi - domain.lo) / b;
  }
  edges.front() = domain.lo;
  edges.back() = domain.hi;
  return BinSpec(std::move(edges), domain, DiscretizerKind::kUniform);
}

BinSpec FitQuantileDp(std::span<const double> values, const Domain& domain,
                      int b, const PrivacyBudget& budget, SeededRng& rng) {
  RequireBins(b);
  domain.Validate();
  budget.Validate();
  Require(!values.empty(), ErrorCode::kEmptyData,
          "quantile discretizer needs data");
  const std::vector<double> sorted = ClampedSorted(values, domain);
  const size_t n = sorted.size();

  // x_0 = lo, x_1..x_n = data, x_{n+1} = hi; gap i sits above i data points.
  std::vector<double> augmented;
  augmented.reserve(n + 2);
  augmented.push_back(domain.lo);
  augmented.insert(augmented.end(), sorted.begin(), sorted.end());
  augmented.push_back(domain.hi);

  const double per_quantile = budget.epsilon / b;
  std::vector<double> log_weights(n + 1);
  std::vector<double> interior;
  interior.reserve(b - 1);
  for (int j = 1; j < b; ++j) {
    const double rank = static_cast<double>(j) / b * static_cast<double>(n);
    size_t gap = 0;
    if (budget.is_infinite()) {
      gap = NearestGap(augmented, rank, rng);
    } else {
      for (size_t i = 0; i <= n; ++i) {
        const double width = augmented[i + 1] - augmented[i];
        log_weights[i] =
            width > 0.0 ? std::log(width) -
                              per_quantile * std::fabs(static_cast<double>(i) - rank)
                        : -kInfinity;
      }
      gap = SampleLogWeightedIndex(log_weights, rng);
    }
    const double left = augmented[gap];
    const double right = augmented[gap + 1];
    interior.push_back(left + (right - left) * rng.Uniform());
  }
  return FromInterior(domain, std::move(interior), DiscretizerKind::kQuantile);
}

BinSpec FitKMeansDp(std::span<const double> values, const Domain& domain,
                    int b, const PrivacyBudget& budget, SeededRng& rng,
                    int iterations) {
  RequireBins(b);
  domain.Validate();
  RequirePositiveEpsilon(budget, "k-means discretizer");
  Require(iterations >= 1, ErrorCode::kInvalidParameter,
          "k-means needs at least one iteration");
  if (b == 1) return FitUniform(domain, 1);

  const std::vector<double> data = ClampedSorted(values, domain);
  const double width = domain.width();
  // Half of each iteration's share goes to counts, half to sums.
  const double eps_stat = budget.epsilon / iterations / 2.0;
  const double sum_scale = budget.is_infinite() ? 0.0 : width / eps_stat;

  std::vector<double> centers(b);
  for (int k = 0; k < b; ++k) centers[k] = domain.lo + (k + 0.5) * width / b;

  std::vector<double> noisy_counts(b, 0.0);
  std::vector<double> shifted_sums(b);
  std::vector<int64_t> counts(b);
  std::vector<double> boundaries(b - 1);
  for (int iter = 0; iter < iterations; ++iter) {
    std::sort(centers.begin(), centers.end());
    for (int k = 0; k + 1 < b; ++k) {
      boundaries[k] = (centers[k] + centers[k + 1]) / 2.0;
    }
    std::fill(counts.begin(), counts.end(), 0);
    std::fill(shifted_sums.begin(), shifted_sums.end(), 0.0);
    // Ties at a boundary go to the lower center.
    for (double x : data) {
      const int k = static_cast<int>(
          std::lower_bound(boundaries.begin(), boundaries.end(), x) -
          boundaries.begin());
      ++counts[k];
      shifted_sums[k] += x - domain.lo;
    }
    for (int k = 0; k < b; ++k) {
      const int64_t noise =
          budget.is_infinite() ? 0 : GeometricNoise(eps_stat, rng);
      noisy_counts[k] = static_cast<double>(counts[k] + noise);
      const double noisy_sum = shifted_sums[k] + LaplaceNoise(sum_scale, rng);
      // A non-positive noisy count carries no usable location; keep the
      // center where it was.
      if (noisy_counts[k] <= 0.0) continue;
      centers[k] = std::clamp(
          domain.lo + noisy_sum / std::max(noisy_counts[k], 1.0), domain.lo,
          domain.hi);
    }
  }

  std::vector<double> surviving;
  for (int k = 0; k < b; ++k) {
    if (noisy_counts[k] > 0.0) surviving.push_back(centers[k]);
  }
  std::sort(surviving.begin(), surviving.end());
  std::vector<double> interior;
  for (size_t k = 0; k + 1 < surviving.size(); ++k) {
    interior.push_back((surviving[k] + surviving[k + 1]) / 2.0);
  }
  return FromInterior(domain, std::move(interior), DiscretizerKind::kKMeans);
}

BinSpec FitPrivTree(std::span<const double> values, const Domain& domain,
                    int b, const PrivacyBudget& budget, SeededRng& rng) {
  RequireBins(b);
  domain.Validate();
  RequirePositiveEpsilon(budget, "PrivTree discretizer");
  const std::vector<double> data = ClampedSorted(values, domain);
  const double n = static_cast<double>(data.size());
  const double tau = n / b;
  const double lambda = budget.is_infinite() ? 0.0 : 3.0 / budget.epsilon;
  const double decay = lambda * std::log(2.0);

  struct Node {
    double lo;
    double hi;
    int depth;
  };
  auto count_in = [&](const Node& node) {
    const auto first = std::lower_bound(data.begin(), data.end(), node.lo);
    const auto last =
        node.hi == domain.hi
            ? data.end()
            : std::lower_bound(data.begin(), data.end(), node.hi);
    return static_cast<double>(last - first);
  };

  std::deque<Node> frontier{{domain.lo, domain.hi, 0}};
  std::vector<double> interior;
  int leaves = 1;
  while (!frontier.empty()) {
    const Node node = frontier.front();
    frontier.pop_front();
    const double biased =
        std::max(count_in(node) - node.depth * decay, tau - decay);
    const double noisy = biased + LaplaceNoise(lambda, rng);
    const double mid = node.lo + (node.hi - node.lo) / 2.0;
    if (noisy > tau && leaves < b && mid > node.lo && mid < node.hi) {
      ++leaves;
      interior.push_back(mid);
      frontier.push_back({node.lo, mid, node.depth + 1});
      frontier.push_back({mid, node.hi, node.depth + 1});
    }
  }
  return FromInterior(domain, std::move(interior), DiscretizerKind::kPrivTree);
}

BinSpec Fit(DiscretizerKind kind, std::span<const double> values,
            const Domain& domain, int b, const PrivacyBudget& budget,
            SeededRng& rng) {
  switch (kind) {
    case DiscretizerKind::kUniform: return FitUniform(domain, b);
    case DiscretizerKind::kQuantile:
      return FitQuantileDp(values, domain, b, budget, rng);
    case DiscretizerKind::kKMeans:
      return FitKMeansDp(values, domain, b, budget, rng);
    case DiscretizerKind::kPrivTree:
      return FitPrivTree(values, domain, b, budget, rng);
  }
  Fail(ErrorCode::kInvalidParameter, "unknown discretizer");
}

BinnedColumn Encode(std::span<const double> values, const BinSpec& spec) {
  BinnedColumn out{{}, spec};
  out.indices.reserve(values.size());
  for (double x : values) out.indices.push_back(spec.BinOf(x));
  return out;
}

namespace {

// Keeps a decoded value inside [lower, upper), or [lower, upper] for the last
// bin, so that re-encoding returns the same bin.
double KeepInBin(double x, const BinSpec& spec, int bin) {
  const double lower = spec.lower(bin);
  const double upper = spec.upper(bin);
  if (x < lower) return lower;
  if (bin == spec.num_bins() - 1) return std::min(x, upper);
  if (x >= upper) return std::nextafter(upper, lower);
  return x;
}

}  // namespace

std::vector<double> DecodeUniform(const BinnedColumn& binned, SeededRng& rng) {
  const BinSpec& spec = binned.spec;
  std::vector<double> out;
  out.reserve(binned.indices.size());
  for (int bin : binned.indices) {
    const double lower = spec.lower(bin);
    const double x = lower + (spec.upper(bin) - lower) * rng.Uniform();
    out.push_back(KeepInBin(x, spec, bin));
  }
  return out;
}

BinMixture FitMixture(std::span<const double> values,
                      const BinnedColumn& binned, const PrivacyBudget& budget,
                      SeededRng& rng) {
  budget.Validate();
  Require(budget.epsilon > 0.0, ErrorCode::kInvalidParameter,
          "mixture fitting requires epsilon > 0");
  Require(values.size() == binned.indices.size(), ErrorCode::kLengthMismatch,
          "values and bin indices differ in length");
  const BinSpec& spec = binned.spec;
  const int b = spec.num_bins();
  const double eps_stat = budget.epsilon / (3.0 * b);

  // Moments of x - lower so that sensitivities are the bin width and its
  // square.
  std::vector<double> count(b, 0.0), sum(b, 0.0), sum_sq(b, 0.0);
  for (size_t i = 0; i < values.size(); ++i) {
    const int bin = binned.indices[i];
    const double y =
        std::clamp(values[i], spec.lower(bin), spec.upper(bin)) - spec.lower(bin);
    count[bin] += 1.0;
    sum[bin] += y;
    sum_sq[bin] += y * y;
  }

  BinMixture mixture;
  mixture.bins.reserve(b);
  for (int bin = 0; bin < b; ++bin) {
    const double lower = spec.lower(bin);
    const double width = spec.upper(bin) - lower;
    const bool exact = budget.is_infinite();
    const double noisy_count =
        count[bin] + (exact ? 0.0 : LaplaceNoise(1.0 / eps_stat, rng));
    const double noisy_sum =
        sum[bin] + (exact ? 0.0 : LaplaceNoise(width / eps_stat, rng));
    const double noisy_sum_sq =
        sum_sq[bin] + (exact ? 0.0 : LaplaceNoise(width * width / eps_stat, rng));
    if (noisy_count < 1.0) {
      mixture.bins.push_back({lower + width / 2.0, width / 4.0});
      continue;
    }
    const double mean_shift = std::clamp(noisy_sum / noisy_count, 0.0, width);
    const double second = noisy_sum_sq / noisy_count;
    const double variance = std::max(second - mean_shift * mean_shift, 0.0);
    mixture.bins.push_back({lower + mean_shift, std::sqrt(variance)});
  }
  return mixture;
}

std::vector<double> DecodeMixture(const BinnedColumn& binned,
                                  const BinMixture& mixture, SeededRng& rng) {
  const BinSpec& spec = binned.spec;
  Require(static_cast<int>(mixture.bins.size()) == spec.num_bins(),
          ErrorCode::kLengthMismatch, "mixture was fitted on a different spec");
  std::vector<double> out;
  out.reserve(binned.indices.size());
  for (int bin : binned.indices) {
    const BinMoments& m = mixture.bins[bin];
    const double x = SampleTruncatedNormal(m.mean, m.stddev, spec.lower(bin),
                                           spec.upper(bin), rng);
    out.push_back(KeepInBin(x, spec, bin));
  }
  return out;
}

}  // namespace dpdisc
