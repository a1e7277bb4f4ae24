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

#include "dpdisc/runners.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numeric>

#include "dpdisc/csv.h"
#include "dpdisc/error.h"
#include "dpdisc/parallel.h"

namespace dpdisc {
namespace {

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

constexpr char kSingleColumn[] = "x";
constexpr double kDomainShare = 0.5;
constexpr double kMixtureShare = 0.5;

Table SingleColumnTable(std::vector<double> values) {
  Table t;
  t.columns.push_back({kSingleColumn, std::move(values), false});
  return t;
}

Domain AsProvided(Domain d) {
  d.source = DomainSource::kProvided;
  return d;
}

std::vector<Domain> RawDomains(const Table& table) {
  std::vector<Domain> out;
  for (const Column& c : table.columns) {
    out.push_back(AsProvided(ExtractDomainRaw(c.values)));
  }
  return out;
}

bool IsSingleColumn(Setting s) { return s == Setting::kUs1 || s == Setting::kUs2; }

Table LoadMultiColumn(const ExperimentConfig& config, std::string* name) {
  const DatasetSource& ds = config.dataset;
  if (ds.kind == DatasetSource::Kind::kWineLike) {
    *name = "wine_like";
    const bool label = ds.with_label && config.setting != Setting::kPs1;
    return GenWineLike({ds.n, config.seed, label, ds.plant_target});
  }
  *name = std::filesystem::path(ds.path).filename().string();
  Table t = LoadCsv(ds.path);
  if (!ds.label.empty()) {
    const auto idx = t.IndexOf(ds.label);
    Require(idx.has_value(), ErrorCode::kValidation,
            "label column '" + ds.label + "' not in " + ds.path);
    t.columns[*idx].categorical = true;
  }
  return t;
}

std::string LabelName(const ExperimentConfig& config, const Table& t) {
  const DatasetSource& ds = config.dataset;
  if (ds.kind == DatasetSource::Kind::kCsv) return ds.label;
  if (ds.kind == DatasetSource::Kind::kWineLike && t.IndexOf("quality")) {
    return "quality";
  }
  return "";
}

void SplitTrainTest(ExperimentData& d, double test_fraction, uint64_t seed) {
  const size_t n = d.full.num_rows();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  SeededRng rng(seed, HashLabel("train-test-split"));
  for (size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.UniformInt(i)]);
  }
  const auto n_test = static_cast<size_t>(std::llround(test_fraction * n));
  Require(n_test >= 1 && n_test < n, ErrorCode::kValidation,
          "train/test split leaves an empty side");
  std::vector<size_t> test(order.begin(), order.begin() + n_test);
  std::vector<size_t> train(order.begin() + n_test, order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  d.train = d.full.SelectRows(train);
  d.test = d.full.SelectRows(test);
}

RunRecord BaseRecord(const ExperimentConfig& config, const ExperimentData& data,
                     const SweepPoint& point, uint64_t stream) {
  RunRecord r;
  r.setting = std::string(SettingName(config.setting));
  r.dataset = data.name;
  r.n = data.full.num_rows();
  r.discretizer = std::string(DiscretizerName(point.discretizer));
  r.bins = point.bins.ToString();
  r.domain_strategy = std::string(DomainSourceName(point.domain_strategy));
  r.epsilon = point.epsilon;
  r.seed = config.seed;
  r.stream = stream;
  if (config.setting == Setting::kPs1) {
    r.extractor = std::string(ExtractorName(point.extractor));
    r.epsilon_generator = point.epsilon_generator;
  } else {
    r.sampling = std::string(SamplingName(config.sampling));
  }
  if (config.setting == Setting::kUs3Lite) r.note = kOutOfScopeNote;
  return r;
}

RunRecord ErrorRecord(RunRecord base, int model_rep, int synth_rep,
                      const std::exception& e) {
  base.model_rep = model_rep;
  base.synth_rep = synth_rep;
  base.status = "error";
  base.error = e.what();
  return base;
}

// Single-column metrics shared by US1 and US2.
MetricReport ScoreSingleColumn(const ExperimentConfig& config,
                               const ExperimentData& data,
                               const std::vector<double>& synth, bool with_rs,
                               SeededRng& rng) {
  const Table synth_table = SingleColumnTable(synth);
  MetricReport m;
  if (with_rs) m.rs = RecordSimilarity(data.train, synth_table, data.domains);
  m.mpd = MaxPercentileDistance(data.train.columns[0].values, synth);
  SeededRng ds_rng = rng.Fork("ds");
  m.ds = DiscriminatorSimilarity(data.train, synth_table, ds_rng);
  const std::vector<BinSpec> specs =
      EvaluationSpecs(data.train, data.domains, config.qs_eval_bins);
  SeededRng qs_rng = rng.Fork("qs");
  QueryOptions qs_options;
  qs_options.dims = {1};
  m.qs = QuerySimilarity(data.train, synth_table, specs, qs_rng, qs_options);
  return m;
}

// US1: the discretizer alone with the full budget, then decode.
void RunUs1Model(const ExperimentConfig& config, const ExperimentData& data,
                 const SweepPoint& point, const RunRecord& base,
                 SeededRng& model_rng, int model_rep, int s_begin, int s_end,
                 std::vector<RunRecord>& out) {
  const auto fit_start = Clock::now();
  const std::vector<double>& values = data.train.columns[0].values;
  BudgetLedger ledger(PrivacyBudget{point.epsilon, 0.0});
  double disc_share = 1.0;
  Domain domain;
  switch (point.domain_strategy) {
    case DomainSource::kProvided: domain = data.domains[0]; break;
    case DomainSource::kRaw: domain = ExtractDomainRaw(values); break;
    case DomainSource::kDp: {
      const PrivacyBudget budget =
          ledger.Spend(std::string(kSingleColumn) + "/domain", kDomainShare);
      disc_share -= kDomainShare;
      SeededRng rng = model_rng.Fork("domain");
      domain = ExtractDomainDp(values, budget.epsilon, rng);
      break;
    }
  }
  double mixture_share = 0.0;
  if (config.sampling == SamplingKind::kMixture) {
    mixture_share = disc_share * kMixtureShare;
    disc_share -= mixture_share;
  }
  const PrivacyBudget disc_budget =
      ledger.Spend(std::string(kSingleColumn) + "/discretizer", disc_share);
  const int b = point.bins.Resolve(values, point.epsilon);
  SeededRng disc_rng = model_rng.Fork("discretizer");
  const BinSpec spec =
      Fit(point.discretizer, values, domain, b, disc_budget, disc_rng);
  const BinnedColumn binned = Encode(values, spec);
  std::optional<BinMixture> mixture;
  if (config.sampling == SamplingKind::kMixture) {
    const PrivacyBudget budget =
        ledger.Spend(std::string(kSingleColumn) + "/mixture", mixture_share);
    SeededRng rng = model_rng.Fork("mixture");
    mixture = FitMixture(values, binned, budget, rng);
  }
  const double fit_ms = MsSince(fit_start);

  for (int s = s_begin; s < s_end; ++s) {
    RunRecord r = base;
    r.model_rep = model_rep;
    r.synth_rep = s;
    try {
      const auto block_start = Clock::now();
      SeededRng synth_rng = model_rng.Fork("synth").Fork(static_cast<uint64_t>(s));
      SeededRng decode_rng = synth_rng.Fork("decode");
      const std::vector<double> synth =
          mixture ? DecodeMixture(binned, *mixture, decode_rng)
                  : DecodeUniform(binned, decode_rng);
      r.timings.sample_ms = MsSince(block_start);
      const auto metrics_start = Clock::now();
      SeededRng metric_rng = synth_rng.Fork("metrics");
      r.metrics = ScoreSingleColumn(config, data, synth, true, metric_rng);
      r.aggregate = r.metrics.Aggregate();
      r.timings.metrics_ms = MsSince(metrics_start);
      r.timings.fit_ms = fit_ms;
      r.timings.total_ms = fit_ms + MsSince(block_start);
      r.bins_produced = {spec.num_bins()};
      r.ledger = ledger.entries();
      r.spent_epsilon = ledger.spent_epsilon();
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      out.push_back(ErrorRecord(base, model_rep, s, e));
    }
  }
}

PipelineConfig MakePipelineConfig(const ExperimentConfig& config,
                                  const ExperimentData& data,
                                  const SweepPoint& point) {
  PipelineConfig pc;
  pc.domain_strategy = point.domain_strategy;
  pc.discretizer = point.discretizer;
  pc.bins = point.bins;
  pc.sampling = config.sampling;
  pc.budget = PrivacyBudget{point.epsilon, 0.0};
  pc.discretization_share = config.discretization_share;
  pc.modeling_share = 1.0 - config.discretization_share;
  pc.domain_share = kDomainShare;
  pc.mixture_share = kMixtureShare;
  for (size_t c = 0; c < data.train.num_columns(); ++c) {
    if (!data.train.columns[c].categorical) {
      pc.provided_domains[data.train.columns[c].name] = data.domains[c];
    }
  }
  return pc;
}

std::vector<int> ProducedBins(const FittedPipeline& fitted) {
  std::vector<int> out;
  for (const ColumnFit& fit : fitted.columns()) {
    if (!fit.categorical) out.push_back(fit.model.spec.num_bins());
  }
  return out;
}

// US2 and US3-lite: fit the product pipeline once per model repeat.
void RunPipelineModel(const ExperimentConfig& config, const ExperimentData& data,
                      const SweepPoint& point, const RunRecord& base,
                      SeededRng& model_rng, int model_rep, int s_begin,
                      int s_end, std::vector<RunRecord>& out) {
  const auto fit_start = Clock::now();
  const PipelineConfig pc = MakePipelineConfig(config, data, point);
  SeededRng fit_rng = model_rng.Fork("fit");
  const FittedPipeline fitted = FitPipeline(data.train, pc, fit_rng);
  const double fit_ms = MsSince(fit_start);
  const bool single = config.setting == Setting::kUs2;
  const std::vector<BinSpec> eval_specs =
      single ? std::vector<BinSpec>{}
             : EvaluationSpecs(data.train, data.domains, config.qs_eval_bins);

  for (int s = s_begin; s < s_end; ++s) {
    RunRecord r = base;
    r.model_rep = model_rep;
    r.synth_rep = s;
    try {
      const auto block_start = Clock::now();
      SeededRng synth_rng = model_rng.Fork("synth").Fork(static_cast<uint64_t>(s));
      SeededRng sample_rng = synth_rng.Fork("sample");
      const Table synth = fitted.Sample(data.train.num_rows(), sample_rng);
      r.timings.sample_ms = MsSince(block_start);
      const auto metrics_start = Clock::now();
      SeededRng metric_rng = synth_rng.Fork("metrics");
      if (single) {
        r.metrics = ScoreSingleColumn(config, data, synth.columns[0].values,
                                      false, metric_rng);
      } else {
        MetricReport& m = r.metrics;
        m.mpd = MaxPercentileDistance(data.train, synth);
        SeededRng ds_rng = metric_rng.Fork("ds");
        m.ds = DiscriminatorSimilarity(data.train, synth, ds_rng);
        SeededRng qs_rng = metric_rng.Fork("qs");
        QueryOptions qs_options;
        qs_options.dims.clear();
        for (int k = 1; k <= 3 && k <= static_cast<int>(synth.num_columns()); ++k) {
          qs_options.dims.push_back(k);
        }
        m.qs = QuerySimilarity(data.train, synth, eval_specs, qs_rng, qs_options);
        if (data.train.num_columns() >= 2) {
          m.cs = CorrelationSimilarity(data.train, synth).score;
        }
        if (!data.label.empty()) {
          m.pu = PredictiveUtility(data.train, synth, data.test, data.label);
        }
      }
      r.aggregate = r.metrics.Aggregate();
      r.timings.metrics_ms = MsSince(metrics_start);
      r.timings.fit_ms = fit_ms;
      r.timings.total_ms = fit_ms + MsSince(block_start);
      r.bins_produced = ProducedBins(fitted);
      r.ledger = fitted.ledger().entries();
      r.spent_epsilon = fitted.ledger().spent_epsilon();
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      out.push_back(ErrorRecord(base, model_rep, s, e));
    }
  }
}

RunRecord RunPs1Point(const ExperimentConfig& config, const ExperimentData& data,
                      const SweepPoint& point, RunRecord r, int jobs) {
  try {
    const auto start = Clock::now();
    const TargetRecord target = SelectTarget(data.full, data.domains);
    ShadowGameConfig game;
    game.n_models_per_class = config.models_per_class;
    game.discretizer = point.discretizer;
    game.domain_strategy = point.domain_strategy;
    game.bins = point.bins;
    game.epsilon_discretizer = point.epsilon;
    game.epsilon_generator = point.epsilon_generator;
    game.extractor = point.extractor;
    game.attacker_bins = config.attacker_bins;
    game.seed = CombineHash(config.seed, r.stream);
    game.jobs = jobs;
    const AttackScore score = RunShadowGame(data.full, target, game);
    r.auc = score.auc;
    r.target_index = target.index;
    r.target_outside_domain = target.outside_domain;
    r.spent_epsilon = point.epsilon + point.epsilon_generator;
    r.timings.fit_ms = MsSince(start);
    r.timings.total_ms = r.timings.fit_ms;
  } catch (const std::exception& e) {
    return ErrorRecord(std::move(r), 0, 0, e);
  }
  return r;
}

uint64_t PointStream(const ExperimentConfig& config,
                     const std::vector<ExperimentData>& data,
                     const SweepPoint& point) {
  return HashLabel(point.Key(config, data[point.data_index]));
}

std::vector<RunRecord> RunPoint(const ExperimentConfig& config,
                                const std::vector<ExperimentData>& data,
                                const SweepPoint& point, int m_begin, int m_end,
                                int s_begin, int s_end, int jobs) {
  const ExperimentData& d = data[point.data_index];
  const uint64_t stream = PointStream(config, data, point);
  const RunRecord base = BaseRecord(config, d, point, stream);
  if (config.setting == Setting::kPs1) {
    return {RunPs1Point(config, d, point, base, jobs)};
  }
  std::vector<RunRecord> out;
  const SeededRng point_rng(config.seed, stream);
  for (int m = m_begin; m < m_end; ++m) {
    SeededRng model_rng = point_rng.Fork(static_cast<uint64_t>(m));
    const size_t before = out.size();
    try {
      if (config.setting == Setting::kUs1) {
        RunUs1Model(config, d, point, base, model_rng, m, s_begin, s_end, out);
      } else {
        RunPipelineModel(config, d, point, base, model_rng, m, s_begin, s_end, out);
      }
    } catch (const std::exception& e) {
      // A failed fit takes all of its synthetic repeats with it.
      out.resize(before);
      for (int s = s_begin; s < s_end; ++s) out.push_back(ErrorRecord(base, m, s, e));
    }
  }
  return out;
}

}  // namespace

std::vector<ExperimentData> LoadExperimentData(const ExperimentConfig& config) {
  config.Validate();
  std::vector<ExperimentData> out;
  const DatasetSource& ds = config.dataset;
  if (ds.kind == DatasetSource::Kind::kControlled) {
    Require(IsSingleColumn(config.setting), ErrorCode::kValidation,
            "controlled data only feeds single-column settings");
    for (Distribution dist : ds.distributions) {
      for (size_t n : ds.sizes) {
        ExperimentData d;
        d.name = std::string(DistributionName(dist));
        d.full = SingleColumnTable(GenControlled({dist, n, config.seed}));
        d.train = d.full;
        d.domains = {ProvidedDomain(kControlledLo, kControlledHi)};
        out.push_back(std::move(d));
      }
    }
    return out;
  }
  ExperimentData d;
  Table table = LoadMultiColumn(config, &d.name);
  if (IsSingleColumn(config.setting)) {
    size_t idx = 0;
    if (!ds.column.empty()) {
      const auto found = table.IndexOf(ds.column);
      Require(found.has_value(), ErrorCode::kValidation,
              "column '" + ds.column + "' not found");
      idx = *found;
    } else {
      const auto it = std::find_if(table.columns.begin(), table.columns.end(),
                                   [](const Column& c) { return !c.categorical; });
      Require(it != table.columns.end(), ErrorCode::kValidation,
              "dataset has no numeric column");
      idx = static_cast<size_t>(it - table.columns.begin());
    }
    d.name += ":" + table.columns[idx].name;
    d.full = SingleColumnTable(table.columns[idx].values);
    d.train = d.full;
    d.domains = RawDomains(d.full);
    out.push_back(std::move(d));
    return out;
  }
  d.label = LabelName(config, table);
  d.full = std::move(table);
  d.domains = RawDomains(d.full);
  if (config.setting == Setting::kUs3Lite) {
    SplitTrainTest(d, config.test_fraction, config.seed);
  } else {
    d.train = d.full;
  }
  out.push_back(std::move(d));
  return out;
}

std::string SweepPoint::Key(const ExperimentConfig& config,
                            const ExperimentData& data) const {
  std::string key = std::string(SettingName(config.setting)) + "|" + data.name +
                    "|n=" + std::to_string(data.full.num_rows()) + "|" +
                    std::string(DiscretizerName(discretizer)) +
                    "|b=" + bins.ToString() + "|eps=" + FormatDouble(epsilon) +
                    "|domain=" + std::string(DomainSourceName(domain_strategy));
  if (config.setting == Setting::kPs1) {
    key += "|extractor=" + std::string(ExtractorName(extractor)) +
           "|eps_g=" + FormatDouble(epsilon_generator);
  } else {
    key += "|sampling=" + std::string(SamplingName(config.sampling));
  }
  return key;
}

std::vector<SweepPoint> EnumerateSweep(const ExperimentConfig& config,
                                       const std::vector<ExperimentData>& data) {
  config.Validate();
  const bool ps1 = config.setting == Setting::kPs1;
  const std::vector<FeatureExtractor> extractors =
      ps1 ? config.extractors : std::vector<FeatureExtractor>{FeatureExtractor::kGroundhog};
  const std::vector<double> gen_eps =
      ps1 ? config.generator_epsilons : std::vector<double>{1.0};
  std::vector<SweepPoint> points;
  for (size_t d = 0; d < data.size(); ++d) {
    for (DomainSource domain : config.domain_strategies) {
      for (DiscretizerKind disc : config.discretizers) {
        for (const BinChoice& bins : config.bins) {
          for (double eps : config.epsilons) {
            for (double eps_g : gen_eps) {
              for (FeatureExtractor ex : extractors) {
                SweepPoint p;
                p.data_index = d;
                p.discretizer = disc;
                p.bins = bins;
                p.epsilon = eps;
                p.domain_strategy = domain;
                p.extractor = ex;
                p.epsilon_generator = eps_g;
                points.push_back(p);
              }
            }
          }
        }
      }
    }
  }
  return points;
}

std::vector<RunRecord> RunExperiment(const ExperimentConfig& config,
                                     const RunOptions& options) {
  return RunExperiment(config, LoadExperimentData(config), options);
}

std::vector<RunRecord> RunExperiment(const ExperimentConfig& config,
                                     const std::vector<ExperimentData>& data,
                                     const RunOptions& options) {
  const std::vector<SweepPoint> points = EnumerateSweep(config, data);
  std::vector<std::vector<RunRecord>> per_point(points.size());
  if (config.setting == Setting::kPs1) {
    // Shadow models parallelize inside each game.
    for (size_t i = 0; i < points.size(); ++i) {
      per_point[i] = RunPoint(config, data, points[i], 0, 1, 0, 1, options.jobs);
    }
  } else {
    ParallelFor(points.size(), options.jobs, [&](size_t i) {
      per_point[i] = RunPoint(config, data, points[i], 0, config.models, 0,
                              config.synth_per_model, 1);
    });
  }
  std::vector<RunRecord> out;
  for (auto& records : per_point) {
    for (RunRecord& r : records) out.push_back(std::move(r));
  }
  return out;
}

RunRecord ReplayRecord(const ExperimentConfig& config,
                       const std::vector<ExperimentData>& data,
                       const RunRecord& record) {
  Require(record.seed == config.seed, ErrorCode::kValidation,
          "record was produced with a different master seed");
  for (const SweepPoint& point : EnumerateSweep(config, data)) {
    if (PointStream(config, data, point) != record.stream) continue;
    std::vector<RunRecord> out =
        RunPoint(config, data, point, record.model_rep, record.model_rep + 1,
                 record.synth_rep, record.synth_rep + 1, 1);
    Require(out.size() == 1, ErrorCode::kValidation, "replay produced no record");
    return out.front();
  }
  Fail(ErrorCode::kValidation, "record does not belong to this config's sweep");
}

std::vector<BinSpec> EvaluationSpecs(const Table& table,
                                     const std::vector<Domain>& domains,
                                     int bins) {
  Require(domains.size() == table.num_columns(), ErrorCode::kLengthMismatch,
          "one domain per column required");
  std::vector<BinSpec> specs;
  for (size_t c = 0; c < table.num_columns(); ++c) {
    const Column& column = table.columns[c];
    if (column.categorical) {
      const double max_code =
          column.values.empty()
              ? 0.0
              : *std::max_element(column.values.begin(), column.values.end());
      const int k = static_cast<int>(max_code) + 1;
      specs.push_back(FitUniform(ProvidedDomain(-0.5, k - 0.5), k));
    } else {
      specs.push_back(FitUniform(domains[c], bins));
    }
  }
  return specs;
}

}  // namespace dpdisc
