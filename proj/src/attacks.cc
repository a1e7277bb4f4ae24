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

#include "dpdisc/attacks.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dpdisc/binsel.h"
#include "dpdisc/error.h"
#include "dpdisc/parallel.h"

namespace dpdisc {

TargetRecord SelectTarget(const Table& data, std::span<const Domain> domains) {
  data.Validate();
  const size_t n = data.num_rows();
  const size_t d = data.num_columns();
  Require(n >= 2, ErrorCode::kInvalidParameter,
          "target selection needs at least two records");
  Require(domains.size() == d, ErrorCode::kLengthMismatch,
          "one domain per column is required");

  std::vector<std::vector<double>> scaled(n, std::vector<double>(d));
  for (size_t c = 0; c < d; ++c) {
    const double width = domains[c].width();
    for (size_t r = 0; r < n; ++r) {
      scaled[r][c] = (data.columns[c].values[r] - domains[c].lo) / width;
    }
  }
  std::vector<double> total(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double sq = 0.0;
      for (size_t c = 0; c < d; ++c) {
        const double diff = scaled[i][c] - scaled[j][c];
        sq += diff * diff;
      }
      const double dist = std::sqrt(sq);
      total[i] += dist;
      total[j] += dist;
    }
  }
  size_t best = 0;
  for (size_t i = 1; i < n; ++i) {
    if (total[i] > total[best]) best = i;
  }
  Require(total[best] > 0.0, ErrorCode::kNoTarget,
          "all records are identical; no target stands out");

  TargetRecord target{best, data.Row(best), false};
  for (size_t c = 0; c < d; ++c) {
    double lo = kInfinity;
    double hi = -kInfinity;
    for (size_t r = 0; r < n; ++r) {
      if (r == best) continue;
      lo = std::min(lo, data.columns[c].values[r]);
      hi = std::max(hi, data.columns[c].values[r]);
    }
    if (target.values[c] > hi || target.values[c] < lo) {
      target.outside_domain = true;
    }
  }
  return target;
}

std::vector<double> GroundhogFeatures(const Table& synth) {
  Require(synth.num_rows() > 0, ErrorCode::kEmptyData,
          "GroundHog features need a non-empty synthetic table");
  std::vector<double> features;
  features.reserve(5 * synth.num_columns());
  for (const Column& column : synth.columns) {
    std::vector<double> sorted = column.values;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : sorted) ss += (x - mean) * (x - mean);
    features.push_back(sorted.front());
    features.push_back(sorted.back());
    features.push_back(mean);
    features.push_back(SortedQuantile(sorted, 0.5));
    features.push_back(std::sqrt(ss / n));
  }
  return features;
}

std::vector<double> QuerybasedFeatures(const Table& synth,
                                       std::span<const double> target,
                                       std::span<const BinSpec> specs,
                                       int max_columns) {
  const size_t d = synth.num_columns();
  if (d > static_cast<size_t>(max_columns)) {
    Fail(ErrorCode::kFeatureExplosion,
         std::to_string(d) + " columns would need 2^" + std::to_string(d) +
             " query features (cap " + std::to_string(max_columns) + ")");
  }
  Require(target.size() == d && specs.size() == d, ErrorCode::kLengthMismatch,
          "target and specs must cover every column");
  std::vector<int> target_bins(d);
  for (size_t c = 0; c < d; ++c) target_bins[c] = specs[c].BinOf(target[c]);

  const size_t subsets = size_t{1} << d;
  // Histogram of per-row match masks, then a superset-sum transform so that
  // counts[S] = #rows matching on every column of S.
  std::vector<double> counts(subsets, 0.0);
  for (size_t r = 0; r < synth.num_rows(); ++r) {
    size_t mask = 0;
    for (size_t c = 0; c < d; ++c) {
      if (specs[c].BinOf(synth.columns[c].values[r]) == target_bins[c]) {
        mask |= size_t{1} << c;
      }
    }
    counts[mask] += 1.0;
  }
  for (size_t c = 0; c < d; ++c) {
    for (size_t s = 0; s < subsets; ++s) {
      if ((s & (size_t{1} << c)) == 0) counts[s] += counts[s | (size_t{1} << c)];
    }
  }
  return counts;
}

std::string_view ExtractorName(FeatureExtractor extractor) {
  return extractor == FeatureExtractor::kGroundhog ? "groundhog" : "querybased";
}

FeatureExtractor ParseExtractor(std::string_view name) {
  if (name == "groundhog") return FeatureExtractor::kGroundhog;
  if (name == "querybased") return FeatureExtractor::kQuerybased;
  Fail(ErrorCode::kInvalidParameter,
       "unknown feature extractor '" + std::string(name) + "'");
}

void ShadowGameConfig::Validate() const {
  Require(n_models_per_class >= 2 && n_models_per_class % 2 == 0,
          ErrorCode::kInvalidParameter,
          "models per class must be even and at least 2");
  Require(epsilon_generator > 0.0 && epsilon_discretizer > 0.0,
          ErrorCode::kInvalidParameter, "attack budgets must be positive");
  Require(attacker_bins >= 1, ErrorCode::kInvalidParameter,
          "attacker bins must be positive");
}

std::string ShadowGameConfig::Fingerprint() const {
  std::ostringstream out;
  out << "domain=" << DomainSourceName(domain_strategy)
      << ";discretizer=" << DiscretizerName(discretizer)
      << ";bins=" << bins.ToString() << ";eps_d=" << epsilon_discretizer
      << ";eps_g=" << epsilon_generator
      << ";extractor=" << ExtractorName(extractor)
      << ";models=" << n_models_per_class << ";attacker_bins=" << attacker_bins
      << ";seed=" << seed;
  return out.str();
}

namespace {

std::vector<Domain> RawDomains(const Table& data) {
  std::vector<Domain> domains;
  for (const Column& c : data.columns) domains.push_back(ExtractDomainRaw(c.values));
  return domains;
}

}  // namespace

Synthesizer PipelineSynthesizer(const ShadowGameConfig& config,
                                const Table& full_data) {
  PipelineConfig pipeline = PipelineConfig::WithSplitBudgets(
      config.epsilon_discretizer, config.epsilon_generator);
  pipeline.domain_strategy = config.domain_strategy;
  pipeline.discretizer = config.discretizer;
  pipeline.bins = config.bins;
  pipeline.sampling = SamplingKind::kUniform;
  for (const Column& c : full_data.columns) {
    Domain d = ExtractDomainRaw(c.values);
    d.source = DomainSource::kProvided;
    pipeline.provided_domains[c.name] = d;
  }
  const size_t n_out = full_data.num_rows();
  return [pipeline, n_out](const Table& train, SeededRng& rng) {
    return PipelineRun(train, pipeline, n_out, rng).synthetic.data;
  };
}

AttackScore RunShadowGame(const Table& data, const TargetRecord& target,
                          const ShadowGameConfig& config) {
  return RunShadowGame(data, target, config, PipelineSynthesizer(config, data));
}

AttackScore RunShadowGame(const Table& data, const TargetRecord& target,
                          const ShadowGameConfig& config,
                          const Synthesizer& synthesizer) {
  config.Validate();
  Require(target.index < data.num_rows(), ErrorCode::kInvalidParameter,
          "target index is outside the dataset");
  const Table with_target = data;
  const Table without_target = data.WithoutRow(target.index);

  std::vector<BinSpec> attacker_specs;
  for (const Domain& d : RawDomains(data)) {
    attacker_specs.push_back(FitUniform(d, config.attacker_bins));
  }

  const int m = config.n_models_per_class;
  FeatureMatrix features(2 * static_cast<size_t>(m));
  const SeededRng master(config.seed, HashLabel(config.Fingerprint()));
  ParallelFor(features.size(), config.jobs, [&](size_t job) {
    const bool member = job < static_cast<size_t>(m);
    const size_t model = job % static_cast<size_t>(m);
    SeededRng rng = master.Fork(member ? "in" : "out").Fork(model);
    Table synth;
    try {
      synth = synthesizer(member ? with_target : without_target, rng);
    } catch (const Error& e) {
      throw Error(e.code(), std::string("shadow model ") +
                                (member ? "in/" : "out/") +
                                std::to_string(model) + ": " + e.what());
    }
    features[job] = config.extractor == FeatureExtractor::kGroundhog
                        ? GroundhogFeatures(synth)
                        : QuerybasedFeatures(synth, target.values, attacker_specs);
  });

  AttackScore score;
  score.fingerprint = config.Fingerprint();
  score.features_in.assign(features.begin(), features.begin() + m);
  score.features_out.assign(features.begin() + m, features.end());

  const int half = m / 2;
  FeatureMatrix train_x;
  std::vector<int> train_y;
  for (int i = 0; i < half; ++i) {
    train_x.push_back(score.features_in[i]);
    train_y.push_back(1);
    train_x.push_back(score.features_out[i]);
    train_y.push_back(0);
  }
  const LogRegModel classifier = LogRegModel::Train(train_x, train_y);
  std::vector<double> in_scores, out_scores;
  for (int i = half; i < m; ++i) {
    in_scores.push_back(classifier.PredictProbability(score.features_in[i]));
    out_scores.push_back(classifier.PredictProbability(score.features_out[i]));
  }
  score.auc = Auc(in_scores, out_scores);
  return score;
}

double Auc(std::span<const double> scores_in, std::span<const double> scores_out) {
  Require(!scores_in.empty() && !scores_out.empty(), ErrorCode::kEmptyData,
          "AUC needs scores for both classes");
  // Rank-based Mann-Whitney: O((n + m) log(n + m)).
  std::vector<std::pair<double, int>> all;
  all.reserve(scores_in.size() + scores_out.size());
  for (double s : scores_in) all.emplace_back(s, 1);
  for (double s : scores_out) all.emplace_back(s, 0);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum_in = 0.0;
  size_t i = 0;
  while (i < all.size()) {
    size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double mid_rank = (static_cast<double>(i + j - 1)) / 2.0 + 1.0;
    for (size_t k = i; k < j; ++k) {
      if (all[k].second == 1) rank_sum_in += mid_rank;
    }
    i = j;
  }
  const double n_in = static_cast<double>(scores_in.size());
  const double n_out = static_cast<double>(scores_out.size());
  const double u = rank_sum_in - n_in * (n_in + 1.0) / 2.0;
  return std::clamp(u / (n_in * n_out), 0.0, 1.0);
}

}  // namespace dpdisc
