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

#include "dpdisc/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpdisc/binsel.h"
#include "dpdisc/error.h"
#include "dpdisc/logreg.h"

namespace dpdisc {
namespace {

double Ratio(double a, double b) {
  const double hi = std::max(a, b);
  if (hi == 0.0) return 1.0;
  return std::min(a, b) / hi;
}

std::vector<size_t> Shuffled(size_t n, SeededRng& rng) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.UniformInt(i)]);
  }
  return order;
}

FeatureMatrix Rows(const Table& table, std::span<const size_t> rows,
                   const std::vector<size_t>& columns) {
  FeatureMatrix out;
  out.reserve(rows.size());
  for (size_t r : rows) {
    std::vector<double> row;
    row.reserve(columns.size());
    for (size_t c : columns) row.push_back(table.columns[c].values[r]);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<size_t> AllColumns(const Table& t) {
  std::vector<size_t> out(t.num_columns());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::vector<int> Labels(const Column& column) {
  std::vector<int> out;
  out.reserve(column.values.size());
  for (double v : column.values) {
    const long rounded = std::lround(v);
    Require(rounded == 0 || rounded == 1, ErrorCode::kInvalidParameter,
            "label column '" + column.name + "' must be binary 0/1");
    out.push_back(static_cast<int>(rounded));
  }
  return out;
}

void RequireSameColumns(const Table& a, const Table& b) {
  Require(a.num_columns() == b.num_columns(), ErrorCode::kLengthMismatch,
          "tables have different column counts");
}

}  // namespace

double RecordSimilarity(const Table& train, const Table& synth,
                        std::span<const Domain> domains) {
  RequireSameColumns(train, synth);
  Require(train.num_rows() == synth.num_rows(), ErrorCode::kLengthMismatch,
          "record similarity needs aligned tables of equal length");
  Require(domains.size() == train.num_columns(), ErrorCode::kLengthMismatch,
          "one domain per column is required");
  Require(train.num_rows() > 0, ErrorCode::kEmptyData, "empty tables");
  double total = 0.0;
  for (size_t c = 0; c < train.num_columns(); ++c) {
    const double width = domains[c].width();
    const auto& a = train.columns[c].values;
    const auto& b = synth.columns[c].values;
    for (size_t i = 0; i < a.size(); ++i) total += std::fabs(a[i] - b[i]) / width;
  }
  const double mean =
      total / static_cast<double>(train.num_rows() * train.num_columns());
  return std::clamp(1.0 - mean, 0.0, 1.0);
}

double MaxPercentileDistance(std::span<const double> train,
                             std::span<const double> synth) {
  Require(!train.empty() && !synth.empty(), ErrorCode::kEmptyData,
          "percentile distance needs non-empty columns");
  const auto [tmin, tmax] = std::minmax_element(train.begin(), train.end());
  const auto [smin, smax] = std::minmax_element(synth.begin(), synth.end());
  const double lo = std::min(*tmin, *smin);
  const double width = std::max(*tmax, *smax) - lo;
  if (width <= 0.0) return 1.0;
  auto normalized_sorted = [&](std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    for (double& x : out) x = (x - lo) / width;
    std::sort(out.begin(), out.end());
    return out;
  };
  const std::vector<double> a = normalized_sorted(train);
  const std::vector<double> b = normalized_sorted(synth);
  double worst = 0.0;
  for (int p = 1; p <= 100; ++p) {
    const double q = p / 100.0;
    worst = std::max(worst, std::fabs(SortedQuantile(a, q) - SortedQuantile(b, q)));
  }
  return std::clamp(1.0 - worst, 0.0, 1.0);
}

double MaxPercentileDistance(const Table& train, const Table& synth) {
  RequireSameColumns(train, synth);
  Require(train.num_columns() > 0, ErrorCode::kEmptyData, "no columns");
  double total = 0.0;
  for (size_t c = 0; c < train.num_columns(); ++c) {
    total += MaxPercentileDistance(train.columns[c].values,
                                   synth.columns[c].values);
  }
  return total / static_cast<double>(train.num_columns());
}

double DiscriminatorScore(std::span<const double> probabilities) {
  Require(!probabilities.empty(), ErrorCode::kEmptyData,
          "no held-out probabilities");
  double total = 0.0;
  for (double p : probabilities) total += std::fabs(0.5 - p);
  const double n = static_cast<double>(probabilities.size());
  return std::clamp(1.0 - 2.0 * total / n, 0.0, 1.0);
}

double DiscriminatorSimilarity(const Table& train, const Table& synth,
                               SeededRng& rng,
                               const DiscriminatorOptions& options) {
  RequireSameColumns(train, synth);
  const size_t n = std::min(train.num_rows(), synth.num_rows());
  const auto holdout =
      static_cast<size_t>(std::floor(options.holdout_fraction * static_cast<double>(n)));
  Require(holdout >= 1 && holdout < n, ErrorCode::kDegenerate,
          "held-out set would contain a single class");
  const std::vector<size_t> columns = AllColumns(train);
  const std::vector<size_t> real_order = Shuffled(train.num_rows(), rng);
  const std::vector<size_t> synth_order = Shuffled(synth.num_rows(), rng);
  const std::span<const size_t> real_rows(real_order.data(), n);
  const std::span<const size_t> synth_rows(synth_order.data(), n);

  FeatureMatrix fit_x = Rows(train, real_rows.subspan(holdout), columns);
  std::vector<int> fit_y(fit_x.size(), 0);
  FeatureMatrix synth_fit = Rows(synth, synth_rows.subspan(holdout), columns);
  fit_x.insert(fit_x.end(), synth_fit.begin(), synth_fit.end());
  fit_y.resize(fit_x.size(), 1);

  FeatureMatrix eval_x = Rows(train, real_rows.first(holdout), columns);
  FeatureMatrix synth_eval = Rows(synth, synth_rows.first(holdout), columns);
  eval_x.insert(eval_x.end(), synth_eval.begin(), synth_eval.end());

  const LogRegModel model = LogRegModel::Train(fit_x, fit_y);
  return DiscriminatorScore(model.PredictProbabilities(eval_x));
}

EncodedTable EncodeTable(const Table& table, std::span<const BinSpec> specs) {
  Require(specs.size() == table.num_columns(), ErrorCode::kLengthMismatch,
          "one bin spec per column is required");
  EncodedTable out;
  for (size_t c = 0; c < table.num_columns(); ++c) {
    out.push_back(Encode(table.columns[c].values, specs[c]).indices);
  }
  return out;
}

std::vector<BinQuery> SampleQueries(std::span<const int> bins_per_column,
                                    std::span<const int> dims, int n_per_dim,
                                    SeededRng& rng) {
  const size_t d = bins_per_column.size();
  std::vector<BinQuery> queries;
  for (int k : dims) {
    if (k < 1 || static_cast<size_t>(k) > d) continue;
    for (int q = 0; q < n_per_dim; ++q) {
      const std::vector<size_t> order = Shuffled(d, rng);
      BinQuery query;
      for (int t = 0; t < k; ++t) {
        const size_t column = order[t];
        const int b = bins_per_column[column];
        std::vector<bool> mask(b, false);
        // Rejection gives a uniform non-empty subset.
        while (std::none_of(mask.begin(), mask.end(), [](bool m) { return m; })) {
          for (int i = 0; i < b; ++i) mask[i] = (rng.NextU64() >> 63) != 0;
        }
        query.terms.push_back({column, std::move(mask)});
      }
      queries.push_back(std::move(query));
    }
  }
  return queries;
}

namespace {

double MatchingFraction(const EncodedTable& table, const BinQuery& query) {
  if (table.empty() || table.front().empty()) return 0.0;
  const size_t rows = table.front().size();
  size_t matches = 0;
  for (size_t r = 0; r < rows; ++r) {
    bool ok = true;
    for (const auto& term : query.terms) {
      if (!term.bins[table[term.column][r]]) {
        ok = false;
        break;
      }
    }
    matches += ok ? 1 : 0;
  }
  return static_cast<double>(matches) / static_cast<double>(rows);
}

}  // namespace

double ScoreQueries(const EncodedTable& train, const EncodedTable& synth,
                    std::span<const BinQuery> queries) {
  Require(!queries.empty(), ErrorCode::kInvalidParameter, "no queries to score");
  double total = 0.0;
  for (const BinQuery& query : queries) {
    total += Ratio(MatchingFraction(train, query), MatchingFraction(synth, query));
  }
  return total / static_cast<double>(queries.size());
}

double QuerySimilarity(const Table& train, const Table& synth,
                       std::span<const BinSpec> specs, SeededRng& rng,
                       const QueryOptions& options) {
  RequireSameColumns(train, synth);
  const EncodedTable a = EncodeTable(train, specs);
  const EncodedTable b = EncodeTable(synth, specs);
  std::vector<int> bins;
  for (const BinSpec& s : specs) bins.push_back(s.num_bins());
  const std::vector<BinQuery> queries =
      SampleQueries(bins, options.dims, options.queries_per_dim, rng);
  return ScoreQueries(a, b, queries);
}

std::vector<std::vector<double>> PearsonMatrix(const Table& table,
                                               bool* constant_column) {
  const size_t d = table.num_columns();
  const double n = static_cast<double>(table.num_rows());
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (size_t c = 0; c < d; ++c) {
    const auto& v = table.columns[c].values;
    mean[c] = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean[c]) * (x - mean[c]);
    sd[c] = std::sqrt(ss);
  }
  std::vector<std::vector<double>> r(d, std::vector<double>(d, 0.0));
  for (size_t i = 0; i < d; ++i) {
    r[i][i] = 1.0;
    for (size_t j = i + 1; j < d; ++j) {
      double value = 0.0;
      if (sd[i] > 0.0 && sd[j] > 0.0) {
        const auto& a = table.columns[i].values;
        const auto& b = table.columns[j].values;
        double cross = 0.0;
        for (size_t k = 0; k < a.size(); ++k) {
          cross += (a[k] - mean[i]) * (b[k] - mean[j]);
        }
        value = std::clamp(cross / (sd[i] * sd[j]), -1.0, 1.0);
      } else if (constant_column != nullptr) {
        *constant_column = true;
      }
      r[i][j] = r[j][i] = value;
    }
  }
  return r;
}

CorrelationScore CorrelationSimilarity(const Table& train, const Table& synth) {
  RequireSameColumns(train, synth);
  Require(train.num_columns() >= 2, ErrorCode::kInvalidParameter,
          "correlation similarity needs at least two columns");
  CorrelationScore result;
  const auto a = PearsonMatrix(train, &result.constant_column);
  const auto b = PearsonMatrix(synth, &result.constant_column);
  const size_t d = a.size();
  double total = 0.0;
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) {
      total += Ratio((a[i][j] + 1.0) / 2.0, (b[i][j] + 1.0) / 2.0);
    }
  }
  result.score = total / static_cast<double>(d * d);
  return result;
}

double PredictiveUtility(const Table& train, const Table& synth,
                         const Table& test, const std::string& label_column) {
  auto fit_and_score = [&](const Table& source) {
    const Table features = source.WithoutColumn(label_column);
    const std::vector<int> y = Labels(source.at(label_column));
    std::vector<size_t> rows(source.num_rows());
    std::iota(rows.begin(), rows.end(), 0);
    const LogRegModel model =
        LogRegModel::Train(Rows(features, rows, AllColumns(features)), y);
    const Table test_features = test.WithoutColumn(label_column);
    std::vector<size_t> test_rows(test.num_rows());
    std::iota(test_rows.begin(), test_rows.end(), 0);
    const FeatureMatrix tx =
        Rows(test_features, test_rows, AllColumns(test_features));
    std::vector<int> predicted;
    predicted.reserve(tx.size());
    for (const auto& row : tx) predicted.push_back(model.Predict(row));
    return F1Score(Labels(test.at(label_column)), predicted);
  };
  const double f1_real = fit_and_score(train);
  Require(f1_real > 0.0, ErrorCode::kUndefinedRatio,
          "F1 of the model trained on real data is zero");
  const double f1_synth = fit_and_score(synth);
  return std::clamp(f1_synth / f1_real, 0.0, 1.0);
}

double MetricReport::Aggregate() const {
  double total = 0.0;
  int present = 0;
  for (const auto& m : {rs, mpd, ds, qs, cs, pu}) {
    if (m.has_value()) {
      total += *m;
      ++present;
    }
  }
  Require(present > 0, ErrorCode::kEmptyData, "metric report is empty");
  return total / present;
}

int MetricReport::count() const {
  int present = 0;
  for (const auto& m : {rs, mpd, ds, qs, cs, pu}) present += m.has_value() ? 1 : 0;
  return present;
}

}  // namespace dpdisc
