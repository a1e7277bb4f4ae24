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

// Utility metrics between a real and a synthetic table. Every score lies in
// [0, 1] and equals 1 when the synthetic data is a copy of the real data.

#ifndef DPDISC_METRICS_H_
#define DPDISC_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpdisc/discretizers.h"
#include "dpdisc/domain.h"
#include "dpdisc/mechanisms.h"
#include "dpdisc/table.h"

namespace dpdisc {

// 1 - mean |train - synth| / domain width over aligned records and columns.
double RecordSimilarity(const Table& train, const Table& synth,
                        std::span<const Domain> domains);

// 1 - max_{p=1..100} |q(train, p) - q(synth, p)| after scaling both columns
// by their joint min/max.
double MaxPercentileDistance(std::span<const double> train,
                             std::span<const double> synth);

// Mean of MaxPercentileDistance over the columns of two tables.
double MaxPercentileDistance(const Table& train, const Table& synth);

struct DiscriminatorOptions {
  double holdout_fraction = 0.3;
};

// 1 - (2/n) sum |0.5 - p_i| over held-out probabilities of a logistic
// real-vs-synthetic classifier. Classes are balanced by subsampling.
double DiscriminatorSimilarity(const Table& train, const Table& synth,
                               SeededRng& rng,
                               const DiscriminatorOptions& options = {});

// Same score given held-out probabilities directly.
double DiscriminatorScore(std::span<const double> probabilities);

// A conjunction over columns; each term keeps the rows whose bin is set in
// the mask.
struct BinQuery {
  struct Term {
    size_t column;
    std::vector<bool> bins;
  };
  std::vector<Term> terms;
};

// Bin indices per column of an encoded table.
using EncodedTable = std::vector<std::vector<int>>;

EncodedTable EncodeTable(const Table& table, std::span<const BinSpec> specs);

// For each k in dims (k <= number of columns) draw n_per_dim queries over k
// distinct columns, each with a uniformly random non-empty subset of bins.
std::vector<BinQuery> SampleQueries(std::span<const int> bins_per_column,
                                    std::span<const int> dims,
                                    int n_per_dim, SeededRng& rng);

// Mean over queries of min(f_train, f_synth) / max(f_train, f_synth), where
// f is the matching fraction of rows; 0/0 counts as 1.
double ScoreQueries(const EncodedTable& train, const EncodedTable& synth,
                    std::span<const BinQuery> queries);

struct QueryOptions {
  int queries_per_dim = 100;
  std::vector<int> dims = {1, 2, 3};
};

double QuerySimilarity(const Table& train, const Table& synth,
                       std::span<const BinSpec> specs, SeededRng& rng,
                       const QueryOptions& options = {});

struct CorrelationScore {
  double score = 1.0;
  // Some column was constant, its correlations were taken as 0.
  bool constant_column = false;
};

// Mean over the d x d Pearson matrices of min/max of (r + 1) / 2, 0/0 := 1.
CorrelationScore CorrelationSimilarity(const Table& train, const Table& synth);

std::vector<std::vector<double>> PearsonMatrix(const Table& table,
                                               bool* constant_column = nullptr);

// F1(trained on synth) / F1(trained on train), both scored on test, clipped
// to [0, 1]. The label column must hold 0/1.
double PredictiveUtility(const Table& train, const Table& synth,
                         const Table& test, const std::string& label_column);

struct MetricReport {
  std::optional<double> rs, mpd, ds, qs, cs, pu;

  // Arithmetic mean of the present scores; throws on an empty report.
  double Aggregate() const;
  int count() const;
};

}  // namespace dpdisc

#endif  // DPDISC_METRICS_H_
