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

// Noise primitives, a portable seeded generator, and privacy-budget
// accounting. Every randomized routine in the library takes its randomness
// from an explicit SeededRng so results are reproducible bit-for-bit.

#ifndef DPDISC_MECHANISMS_H_
#define DPDISC_MECHANISMS_H_

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dpdisc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// xoshiro256** keyed by (seed, stream). The state is expanded from the pair
// with splitmix64, so any two distinct streams start from unrelated states.
class SeededRng {
 public:
  SeededRng(uint64_t seed, uint64_t stream = 0);

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

  // A generator on a new stream identified by `salt`, independent of the
  // draws already taken from this one.
  SeededRng Fork(uint64_t salt) const;
  SeededRng Fork(std::string_view label) const;

  uint64_t NextU64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform on the open interval (0, 1).
  double OpenUniform();
  // Uniform integer in [0, bound). bound must be positive.
  uint64_t UniformInt(uint64_t bound);
  double StandardNormal();
  double Exponential();

 private:
  uint64_t seed_;
  uint64_t stream_;
  uint64_t state_[4];
};

uint64_t SplitMix64(uint64_t x);
uint64_t HashLabel(std::string_view label);
// Order-sensitive combination of stream coordinates.
uint64_t CombineHash(uint64_t a, uint64_t b);

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;

  static PrivacyBudget Infinite() { return {kInfinity, 0.0}; }
  bool is_infinite() const { return epsilon == kInfinity; }
  // Throws kInvalidParameter unless epsilon >= 0 and delta in [0, 1).
  void Validate() const;
  PrivacyBudget Scaled(double fraction) const;
};

// Sequential-composition accounting. Each entry consumes a fraction of the
// total; the fractions may never sum past one.
class BudgetLedger {
 public:
  struct Entry {
    std::string label;
    double fraction;
    PrivacyBudget budget;
  };

  explicit BudgetLedger(PrivacyBudget total);

  const PrivacyBudget& total() const { return total_; }
  const std::vector<Entry>& entries() const { return entries_; }
  double spent_fraction() const { return spent_; }
  double spent_epsilon() const;

  PrivacyBudget Spend(std::string label, double fraction);
  // Validates the whole batch before recording any of it.
  std::vector<PrivacyBudget> Split(
      std::span<const std::pair<std::string, double>> fractions);

 private:
  PrivacyBudget total_;
  std::vector<Entry> entries_;
  double spent_ = 0.0;
};

// Laplace(0, scale). scale == 0 returns exactly 0.
double LaplaceNoise(double scale, SeededRng& rng);

// Two-sided geometric noise, P(k) proportional to exp(-epsilon * |k|).
int64_t GeometricNoise(double epsilon, SeededRng& rng);

// Index i with probability weights[i] / sum(weights).
size_t SampleWeightedIndex(std::span<const double> weights, SeededRng& rng);

// Same distribution as SampleWeightedIndex(exp(log_weights)) but stable for
// log-weights far below zero. -inf entries are never chosen.
size_t SampleLogWeightedIndex(std::span<const double> log_weights,
                              SeededRng& rng);

}  // namespace dpdisc

#endif  // DPDISC_MECHANISMS_H_
