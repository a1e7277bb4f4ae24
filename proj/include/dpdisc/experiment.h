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

// Experiment configuration, run records, and their JSON/CSV forms.

#ifndef DPDISC_EXPERIMENT_H_
#define DPDISC_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpdisc/attacks.h"
#include "dpdisc/controlled.h"
#include "dpdisc/discretizers.h"
#include "dpdisc/domain.h"
#include "dpdisc/generator.h"
#include "dpdisc/metrics.h"

namespace dpdisc {

enum class Setting { kUs1, kUs2, kUs3Lite, kPs1 };

std::string_view SettingName(Setting setting);
Setting ParseSetting(std::string_view name);

struct DatasetSource {
  enum class Kind { kControlled, kCsv, kWineLike };
  Kind kind = Kind::kControlled;
  // kControlled
  std::vector<Distribution> distributions = {Distribution::kNormal};
  std::vector<size_t> sizes = {10000};
  // kCsv
  std::string path;
  // Single-column settings read this column (default: first numeric one).
  std::string column;
  // kWineLike
  size_t n = 2000;
  bool plant_target = false;
  // Name of a 0/1 label column (kCsv) or whether to add one (kWineLike).
  std::string label;
  bool with_label = false;
};

inline const std::vector<int> kDefaultBinGrid = {5, 10, 20, 50, 100, 250};
inline const std::vector<double> kDefaultEpsilonGrid = {0.01, 0.1, 1.0,
                                                        10.0, 100.0, kInfinity};

struct ExperimentConfig {
  Setting setting = Setting::kUs1;
  DatasetSource dataset;
  std::vector<DiscretizerKind> discretizers = {
      DiscretizerKind::kUniform, DiscretizerKind::kQuantile,
      DiscretizerKind::kKMeans, DiscretizerKind::kPrivTree};
  std::vector<BinChoice> bins;
  std::vector<double> epsilons;
  std::vector<DomainSource> domain_strategies = {DomainSource::kProvided};
  SamplingKind sampling = SamplingKind::kUniform;
  int models = 3;
  int synth_per_model = 3;
  uint64_t seed = 0;
  std::string output = "results";
  // Uniform bins per column of the grid that 1-3 way queries are scored on.
  int qs_eval_bins = 50;
  double discretization_share = 0.1;
  // Fraction of held-out rows for the multi-column setting.
  double test_fraction = 0.2;

  // PS1 only.
  int models_per_class = 50;
  std::vector<FeatureExtractor> extractors = {FeatureExtractor::kGroundhog,
                                              FeatureExtractor::kQuerybased};
  // Sweeps pair every entry of `epsilons` (discretization) with each of
  // these (generator).
  std::vector<double> generator_epsilons = {1.0};
  int attacker_bins = 20;

  ExperimentConfig();
  // Throws kValidation on empty sweeps or bad repeats.
  void Validate() const;
};

// Unknown keys anywhere in the document are rejected.
ExperimentConfig ParseExperimentConfig(std::string_view json_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);
std::string ExperimentConfigToJson(const ExperimentConfig& config);

// Pipeline settings as a JSON object; unknown keys are rejected.
std::string PipelineConfigToJson(const PipelineConfig& config);
PipelineConfig ParsePipelineConfig(std::string_view json_text);

struct StageTimings {
  double fit_ms = 0.0;
  double sample_ms = 0.0;
  double metrics_ms = 0.0;
  double total_ms = 0.0;
};

// One output row. The coordinates plus the master seed reproduce it.
struct RunRecord {
  std::string setting;
  std::string dataset;
  size_t n = 0;
  std::string discretizer;
  std::string bins;
  std::string domain_strategy;
  std::string sampling;
  std::string extractor;
  double epsilon = 0.0;
  std::optional<double> epsilon_generator;
  int model_rep = 0;
  int synth_rep = 0;
  uint64_t seed = 0;
  uint64_t stream = 0;

  std::vector<int> bins_produced;
  MetricReport metrics;
  std::optional<double> aggregate;
  std::optional<double> auc;
  std::optional<size_t> target_index;
  std::optional<bool> target_outside_domain;
  std::vector<BudgetLedger::Entry> ledger;
  double spent_epsilon = 0.0;
  StageTimings timings;
  std::string status = "ok";
  std::string error;
  std::string note;
};

// Timing-free columns in a fixed order, so reruns are byte-identical.
std::vector<std::string> RecordCsvHeader();
std::vector<std::string> RecordCsvRow(const RunRecord& record);
void WriteRecordsCsv(const std::vector<RunRecord>& records, std::ostream& out);
// Nested records including ledgers and timings.
std::string RecordsToJson(const std::vector<RunRecord>& records,
                          const ExperimentConfig& config);
// Writes <dir>/results.csv and <dir>/results.json.
void PersistRecords(const std::vector<RunRecord>& records,
                    const ExperimentConfig& config, const std::string& dir);

std::string FormatDouble(double value);

}  // namespace dpdisc

#endif  // DPDISC_EXPERIMENT_H_
