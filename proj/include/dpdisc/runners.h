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

// Sweep runners for the four experiment settings.

#ifndef DPDISC_RUNNERS_H_
#define DPDISC_RUNNERS_H_

#include <string>
#include <vector>

#include "dpdisc/experiment.h"

namespace dpdisc {

struct ExperimentData {
  std::string name;
  // Rows the synthesizer is fitted on; equal to `full` for single-column
  // settings.
  Table train;
  Table test;
  Table full;
  // Domains of `full`, handed to the pipeline as provided domains and used
  // to scale metrics.
  std::vector<Domain> domains;
  std::string label;
};

// Materializes every dataset of the config, in sweep order.
std::vector<ExperimentData> LoadExperimentData(const ExperimentConfig& config);

struct SweepPoint {
  size_t data_index = 0;
  DiscretizerKind discretizer = DiscretizerKind::kUniform;
  BinChoice bins;
  double epsilon = 1.0;
  DomainSource domain_strategy = DomainSource::kProvided;
  FeatureExtractor extractor = FeatureExtractor::kGroundhog;
  double epsilon_generator = 1.0;

  // Canonical text of the coordinates; its hash keys the point's RNG.
  std::string Key(const ExperimentConfig& config,
                  const ExperimentData& data) const;
};

// Cartesian product of the config's sweeps.
std::vector<SweepPoint> EnumerateSweep(const ExperimentConfig& config,
                                       const std::vector<ExperimentData>& data);

struct RunOptions {
  int jobs = 1;
};

// One record per (point, model repeat, synthetic repeat), or per point for
// PS1. Failures become records with status "error".
std::vector<RunRecord> RunExperiment(const ExperimentConfig& config,
                                     const RunOptions& options = {});

// Same as RunExperiment on preloaded data.
std::vector<RunRecord> RunExperiment(const ExperimentConfig& config,
                                     const std::vector<ExperimentData>& data,
                                     const RunOptions& options = {});

// Recomputes a single record from its coordinates.
RunRecord ReplayRecord(const ExperimentConfig& config,
                       const std::vector<ExperimentData>& data,
                       const RunRecord& record);

// Uniform grid of `bins` bins over each column's domain; categorical columns
// get one bin per code.
std::vector<BinSpec> EvaluationSpecs(const Table& table,
                                     const std::vector<Domain>& domains,
                                     int bins);

inline constexpr char kOutOfScopeNote[] =
    "five-model comparison: not run, out of scope; product histogram model used";

}  // namespace dpdisc

#endif  // DPDISC_RUNNERS_H_
