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

#include "dpdisc/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpdisc/error.h"

namespace dpdisc {
namespace {

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
constexpr double kLedgerSlack = 1e-12;

uint64_t Rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t HashLabel(std::string_view label) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(h);
}

uint64_t CombineHash(uint64_t a, uint64_t b) {
  return SplitMix64(a ^ (SplitMix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) +
                         (a >> 2)));
}

SeededRng::SeededRng(uint64_t seed, uint64_t stream)
    : seed_(seed), stream_(stream) {
  uint64_t x = CombineHash(seed, stream);
  for (uint64_t& word : state_) {
    x = SplitMix64(x);
    word = x;
  }
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

SeededRng SeededRng::Fork(uint64_t salt) const {
  return SeededRng(seed_, CombineHash(stream_, salt));
}

SeededRng SeededRng::Fork(std::string_view label) const {
  return Fork(HashLabel(label));
}

uint64_t SeededRng::NextU64() {
  const uint64_t result = Rotl(state_[1] * 5, 7) * 9;
  const uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = Rotl(state_[3], 45);
  return result;
}

double SeededRng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * kTwoPow53Inv;
}

double SeededRng::OpenUniform() {
  return (static_cast<double>(NextU64() >> 11) + 0.5) * kTwoPow53Inv;
}

uint64_t SeededRng::UniformInt(uint64_t bound) {
  Require(bound > 0, ErrorCode::kInvalidParameter, "UniformInt bound is zero");
  // Lemire's nearly-divisionless rejection.
  unsigned __int128 m =
      static_cast<unsigned __int128>(NextU64()) * static_cast<unsigned __int128>(bound);
  uint64_t low = static_cast<uint64_t>(m);
  if (low < bound) {
    const uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(NextU64()) *
          static_cast<unsigned __int128>(bound);
      low = static_cast<uint64_t>(m);
    }
  }
  return static_cast<uint64_t>(m >> 64);
}

double SeededRng::StandardNormal() {
  // Marsaglia polar method; the second variate is discarded so the generator
  // carries no hidden cache.
  while (true) {
    const double u = 2.0 * Uniform() - 1.0;
    const double v = 2.0 * Uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double SeededRng::Exponential() { return -std::log(OpenUniform()); }

void PrivacyBudget::Validate() const {
  Require(!std::isnan(epsilon) && epsilon >= 0.0, ErrorCode::kInvalidParameter,
          "epsilon must be non-negative");
  Require(delta >= 0.0 && delta < 1.0, ErrorCode::kInvalidParameter,
          "delta must lie in [0, 1)");
}

PrivacyBudget PrivacyBudget::Scaled(double fraction) const {
  if (is_infinite()) return {kInfinity, delta * fraction};
  return {epsilon * fraction, delta * fraction};
}

BudgetLedger::BudgetLedger(PrivacyBudget total) : total_(total) {
  total_.Validate();
}

double BudgetLedger::spent_epsilon() const {
  double sum = 0.0;
  for (const Entry& e : entries_) sum += e.budget.epsilon;
  return sum;
}

PrivacyBudget BudgetLedger::Spend(std::string label, double fraction) {
  const std::pair<std::string, double> one{std::move(label), fraction};
  return Split(std::span(&one, 1)).front();
}

std::vector<PrivacyBudget> BudgetLedger::Split(
    std::span<const std::pair<std::string, double>> fractions) {
  double batch = 0.0;
  for (const auto& [label, fraction] : fractions) {
    Require(fraction > 0.0 && fraction <= 1.0, ErrorCode::kInvalidParameter,
            "ledger fraction for '" + label + "' must lie in (0, 1]");
    batch += fraction;
  }
  if (spent_ + batch > 1.0 + kLedgerSlack) {
    Fail(ErrorCode::kBudgetOverspend,
         "requested fractions sum to " + std::to_string(spent_ + batch) +
             " of the total budget");
  }
  std::vector<PrivacyBudget> children;
  children.reserve(fractions.size());
  for (const auto& [label, fraction] : fractions) {
    PrivacyBudget child = total_.Scaled(fraction);
    entries_.push_back({label, fraction, child});
    children.push_back(child);
  }
  spent_ += batch;
  return children;
}

double LaplaceNoise(double scale, SeededRng& rng) {
  Require(scale >= 0.0, ErrorCode::kInvalidParameter,
          "Laplace scale must be non-negative");
  if (scale == 0.0) return 0.0;
  const double u = rng.OpenUniform();
  if (u < 0.5) return scale * std::log(2.0 * u);
  return -scale * std::log(2.0 * (1.0 - u));
}

int64_t GeometricNoise(double epsilon, SeededRng& rng) {
  Require(epsilon > 0.0, ErrorCode::kInvalidParameter,
          "geometric noise requires epsilon > 0");
  if (epsilon == kInfinity) return 0;
  // Difference of two one-sided geometrics with P(G >= k) = exp(-eps * k).
  constexpr double kCap = 4.0e18;
  auto one_sided = [&] {
    return std::floor(std::min(rng.Exponential() / epsilon, kCap));
  };
  const double a = one_sided();
  const double b = one_sided();
  return static_cast<int64_t>(a) - static_cast<int64_t>(b);
}

size_t SampleWeightedIndex(std::span<const double> weights, SeededRng& rng) {
  double total = 0.0;
  for (double w : weights) {
    Require(w >= 0.0 && std::isfinite(w), ErrorCode::kInvalidParameter,
            "weights must be finite and non-negative");
    total += w;
  }
  Require(total > 0.0, ErrorCode::kInvalidParameter,
          "weights must contain positive mass");
  const double target = rng.Uniform() * total;
  double cumulative = 0.0;
  size_t last_positive = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    last_positive = i;
    if (target < cumulative) return i;
  }
  return last_positive;
}

size_t SampleLogWeightedIndex(std::span<const double> log_weights,
                              SeededRng& rng) {
  double max_log = -kInfinity;
  for (double lw : log_weights) {
    Require(!std::isnan(lw) && lw != kInfinity, ErrorCode::kInvalidParameter,
            "log-weights must be finite or -inf");
    max_log = std::max(max_log, lw);
  }
  Require(max_log > -kInfinity, ErrorCode::kInvalidParameter,
          "log-weights must contain positive mass");
  std::vector<double> weights(log_weights.size());
  for (size_t i = 0; i < log_weights.size(); ++i) {
    weights[i] = std::exp(log_weights[i] - max_log);
  }
  return SampleWeightedIndex(weights, rng);
}

}  // namespace dpdisc
