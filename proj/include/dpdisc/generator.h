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

// Baseline DP synthesizer: one Laplace-noised histogram per column, sampled
// independently, with DP discretization in front of it.

#ifndef DPDISC_GENERATOR_H_
#define DPDISC_GENERATOR_H_

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dpdisc/binsel.h"
#include "dpdisc/discretizers.h"
#include "dpdisc/domain.h"
#include "dpdisc/mechanisms.h"
#include "dpdisc/table.h"

namespace dpdisc {

struct HistogramModel {
  std::vector<double> probs;
  BinSpec spec;
};

// Laplace(1/eps) on every bin count, negatives clamped to zero, normalized.
// An all-zero noisy histogram becomes uniform.
HistogramModel FitHistogramDp(const BinnedColumn& binned,
                              const PrivacyBudget& budget, SeededRng& rng);

BinnedColumn SampleHistogram(const HistogramModel& model, size_t n,
                             SeededRng& rng);

enum class SamplingKind { kUniform, kMixture };

std::string_view SamplingName(SamplingKind kind);
SamplingKind ParseSampling(std::string_view name);

// How many bins each numeric column gets: a fixed count or a named rule.
struct BinChoice {
  BinRule rule = BinRule::kFixed;
  int fixed = 20;

  static BinChoice Fixed(int b) { return {BinRule::kFixed, b}; }
  static BinChoice Parse(std::string_view text);
  std::string ToString() const;
  // epsilon feeds the RiceOpt correction; the other rules ignore it.
  int Resolve(std::span<const double> values, double epsilon) const;
};

struct PipelineConfig {
  DomainSource domain_strategy = DomainSource::kProvided;
  DiscretizerKind discretizer = DiscretizerKind::kUniform;
  BinChoice bins;
  SamplingKind sampling = SamplingKind::kUniform;
  PrivacyBudget budget = PrivacyBudget::Infinite();
  // Fractions of the total budget.
  double discretization_share = 0.1;
  double modeling_share = 0.9;
  // Fraction of a column's discretization share spent on DP domain
  // extraction (only when domain_strategy is kDp).
  double domain_share = 0.5;
  // Fraction of a column's discretizer share spent on mixture fitting.
  double mixture_share = 0.5;
  // Required for every numeric column when domain_strategy is kProvided.
  std::map<std::string, Domain> provided_domains;

  // Discretization gets eps_d and modeling gets eps_g out of eps_d + eps_g.
  static PipelineConfig WithSplitBudgets(double eps_discretization,
                                         double eps_model);
  void Validate() const;
};

struct ColumnFit {
  std::string name;
  bool categorical = false;
  Domain domain;
  HistogramModel model;
  std::optional<BinMixture> mixture;
};

// A fitted product model. Sampling from it is post-processing and never
// touches the ledger.
class FittedPipeline {
 public:
  FittedPipeline(std::vector<ColumnFit> columns, BudgetLedger ledger);

  const std::vector<ColumnFit>& columns() const { return columns_; }
  const BudgetLedger& ledger() const { return ledger_; }

  Table Sample(size_t n, SeededRng& rng) const;

 private:
  std::vector<ColumnFit> columns_;
  BudgetLedger ledger_;
};

FittedPipeline FitPipeline(const Table& data, const PipelineConfig& config,
                           SeededRng& rng);

struct SyntheticDataset {
  Table data;
  PipelineConfig config;
  uint64_t seed = 0;
  uint64_t stream = 0;
};

struct PipelineResult {
  SyntheticDataset synthetic;
  FittedPipeline fitted;
};

PipelineResult PipelineRun(const Table& data, const PipelineConfig& config,
                           size_t n_out, SeededRng& rng);

}  // namespace dpdisc

#endif  // DPDISC_GENERATOR_H_
