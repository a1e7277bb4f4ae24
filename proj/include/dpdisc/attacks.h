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

// Membership-inference game against the DP synthesis pipeline: a worst-case
// target, shadow models trained with and without it, summary features of
// their synthetic output, and the AUC of a classifier on those features.

#ifndef DPDISC_ATTACKS_H_
#define DPDISC_ATTACKS_H_

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpdisc/discretizers.h"
#include "dpdisc/domain.h"
#include "dpdisc/generator.h"
#include "dpdisc/logreg.h"
#include "dpdisc/table.h"

namespace dpdisc {

struct TargetRecord {
  size_t index = 0;
  std::vector<double> values;
  // Some column value lies strictly outside the min/max of the other
  // records.
  bool outside_domain = false;
};

// Record with the largest mean L2 distance to all others after scaling each
// column by its domain width; ties go to the lowest index.
TargetRecord SelectTarget(const Table& data, std::span<const Domain> domains);

// (min, max, mean, median, population std) per column, concatenated.
std::vector<double> GroundhogFeatures(const Table& synth);

inline constexpr int kMaxQuerybasedColumns = 12;

// For every column subset S (bitmask order, S = {} first), the number of
// synthetic rows whose bins equal the target's bins on all of S.
std::vector<double> QuerybasedFeatures(const Table& synth,
                                       std::span<const double> target,
                                       std::span<const BinSpec> specs,
                                       int max_columns = kMaxQuerybasedColumns);

enum class FeatureExtractor { kGroundhog, kQuerybased };

std::string_view ExtractorName(FeatureExtractor extractor);
FeatureExtractor ParseExtractor(std::string_view name);

struct ShadowGameConfig {
  int n_models_per_class = 50;
  DiscretizerKind discretizer = DiscretizerKind::kUniform;
  DomainSource domain_strategy = DomainSource::kRaw;
  BinChoice bins = BinChoice::Fixed(20);
  double epsilon_generator = 1.0;
  double epsilon_discretizer = 1.0;
  FeatureExtractor extractor = FeatureExtractor::kGroundhog;
  // Bins per column of the attacker's own uniform grid for Querybased.
  int attacker_bins = 20;
  uint64_t seed = 0;
  // Worker threads for shadow models; results do not depend on it.
  int jobs = 1;

  void Validate() const;
  std::string Fingerprint() const;
};

struct AttackScore {
  double auc = 0.5;
  std::string fingerprint;
  FeatureMatrix features_in;
  FeatureMatrix features_out;
};

// Produces one synthetic table from a training table.
using Synthesizer = std::function<Table(const Table& train, SeededRng& rng)>;

// The pipeline under attack for a config. Provided domains come from the
// full dataset, so they are identical in both worlds.
Synthesizer PipelineSynthesizer(const ShadowGameConfig& config,
                                const Table& full_data);

AttackScore RunShadowGame(const Table& data, const TargetRecord& target,
                          const ShadowGameConfig& config);
AttackScore RunShadowGame(const Table& data, const TargetRecord& target,
                          const ShadowGameConfig& config,
                          const Synthesizer& synthesizer);

// P(in > out) + P(in == out) / 2 over all pairs.
double Auc(std::span<const double> scores_in, std::span<const double> scores_out);

}  // namespace dpdisc

#endif  // DPDISC_ATTACKS_H_
