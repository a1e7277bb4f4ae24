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

#include "dpdisc/generator.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "dpdisc/error.h"

namespace dpdisc {
namespace {

constexpr double kShareSlack = 1e-9;

Domain CategoricalDomain(std::span<const double> codes) {
  double max_code = 0.0;
  for (double c : codes) max_code = std::max(max_code, c);
  return ProvidedDomain(-0.5, std::floor(max_code) + 0.5);
}

BinSpec CategoricalSpec(const Domain& domain) {
  const int k = static_cast<int>(std::lround(domain.hi + 0.5));
  return FitUniform(domain, std::max(k, 1));
}

}  // namespace

HistogramModel FitHistogramDp(const BinnedColumn& binned,
                              const PrivacyBudget& budget, SeededRng& rng) {
  budget.Validate();
  Require(budget.epsilon > 0.0, ErrorCode::kInvalidParameter,
          "histogram model requires epsilon > 0");
  const int b = binned.spec.num_bins();
  std::vector<double> counts(b, 0.0);
  for (int bin : binned.indices) counts.at(bin) += 1.0;
  const double scale = budget.is_infinite() ? 0.0 : 1.0 / budget.epsilon;
  for (double& c : counts) c = std::max(c + LaplaceNoise(scale, rng), 0.0);
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0.0) {
    return {std::vector<double>(b, 1.0 / b), binned.spec};
  }
  for (double& c : counts) c /= total;
  return {std::move(counts), binned.spec};
}

BinnedColumn SampleHistogram(const HistogramModel& model, size_t n,
                             SeededRng& rng) {
  std::vector<double> cumulative(model.probs.size());
  std::partial_sum(model.probs.begin(), model.probs.end(), cumulative.begin());
  const double total = cumulative.empty() ? 0.0 : cumulative.back();
  Require(total > 0.0, ErrorCode::kInvalidParameter,
          "histogram model has no mass");
  BinnedColumn out{{}, model.spec};
  out.indices.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const double u = rng.Uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    size_t bin = static_cast<size_t>(it - cumulative.begin());
    bin = std::min(bin, cumulative.size() - 1);
    // Never land on a zero-probability bin through rounding at the top.
    while (bin > 0 && model.probs[bin] <= 0.0) --bin;
    out.indices.push_back(static_cast<int>(bin));
  }
  return out;
}

std::string_view SamplingName(SamplingKind kind) {
  return kind == SamplingKind::kUniform ? "uniform" : "mixture";
}

SamplingKind ParseSampling(std::string_view name) {
  if (name == "uniform") return SamplingKind::kUniform;
  if (name == "mixture") return SamplingKind::kMixture;
  Fail(ErrorCode::kInvalidParameter,
       "unknown sampling strategy '" + std::string(name) + "'");
}

BinChoice BinChoice::Parse(std::string_view text) {
  if (text == "doane") return {BinRule::kDoane, 0};
  if (text == "rice") return {BinRule::kRice, 0};
  if (text == "fdr") return {BinRule::kFdr, 0};
  if (text == "shimazaki") return {BinRule::kShimazaki, 0};
  if (text == "rice_opt") return {BinRule::kRiceOpt, 0};
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  Require(ec == std::errc() && ptr == text.data() + text.size() && value >= 1,
          ErrorCode::kInvalidParameter,
          "bin choice must be a positive integer or a rule name, got '" +
              std::string(text) + "'");
  return Fixed(value);
}

std::string BinChoice::ToString() const {
  if (rule == BinRule::kFixed) return std::to_string(fixed);
  return std::string(BinRuleName(rule));
}

int BinChoice::Resolve(std::span<const double> values, double epsilon) const {
  const auto n = static_cast<int64_t>(values.size());
  switch (rule) {
    case BinRule::kFixed: return fixed;
    case BinRule::kRice: return BinsRice(n).b;
    case BinRule::kRiceOpt: return BinsRiceOpt(n, epsilon).b;
    case BinRule::kDoane: return BinsDoane(n, SampleSkewness(values)).b;
    case BinRule::kFdr: return BinsFdr(values).b;
    case BinRule::kShimazaki: return BinsShimazaki(values).b;
  }
  Fail(ErrorCode::kInvalidParameter, "unknown bin rule");
}

PipelineConfig PipelineConfig::WithSplitBudgets(double eps_discretization,
                                                double eps_model) {
  PipelineConfig config;
  const bool both_infinite =
      eps_discretization == kInfinity && eps_model == kInfinity;
  config.budget = {eps_discretization + eps_model, 0.0};
  if (both_infinite) {
    config.discretization_share = 0.5;
    config.modeling_share = 0.5;
  } else {
    Require(eps_discretization != kInfinity && eps_model != kInfinity,
            ErrorCode::kInvalidParameter,
            "cannot mix a finite and an infinite budget in one ledger");
    config.discretization_share = eps_discretization / config.budget.epsilon;
    config.modeling_share = eps_model / config.budget.epsilon;
  }
  return config;
}

void PipelineConfig::Validate() const {
  budget.Validate();
  auto in_unit = [](double f) { return f > 0.0 && f <= 1.0; };
  Require(in_unit(discretization_share) && in_unit(modeling_share),
          ErrorCode::kInvalidParameter,
          "discretization and modeling shares must lie in (0, 1]");
  Require(discretization_share + modeling_share <= 1.0 + kShareSlack,
          ErrorCode::kBudgetOverspend,
          "discretization and modeling shares exceed the total budget");
  Require(in_unit(domain_share) && domain_share < 1.0,
          ErrorCode::kInvalidParameter, "domain share must lie in (0, 1)");
  Require(in_unit(mixture_share) && mixture_share < 1.0,
          ErrorCode::kInvalidParameter, "mixture share must lie in (0, 1)");
  if (bins.rule == BinRule::kFixed) {
    Require(bins.fixed >= 1, ErrorCode::kInvalidParameter,
            "fixed bin count must be positive");
  }
}

FittedPipeline::FittedPipeline(std::vector<ColumnFit> columns,
                               BudgetLedger ledger)
    : columns_(std::move(columns)), ledger_(std::move(ledger)) {}

Table FittedPipeline::Sample(size_t n, SeededRng& rng) const {
  Table out;
  for (const ColumnFit& fit : columns_) {
    SeededRng column_rng = rng.Fork("sample:" + fit.name);
    BinnedColumn binned = SampleHistogram(fit.model, n, column_rng);
    Column column{fit.name, {}, fit.categorical};
    if (fit.categorical) {
      column.values.reserve(n);
      for (int bin : binned.indices) column.values.push_back(bin);
    } else if (fit.mixture.has_value()) {
      column.values = DecodeMixture(binned, *fit.mixture, column_rng);
    } else {
      column.values = DecodeUniform(binned, column_rng);
    }
    out.columns.push_back(std::move(column));
  }
  return out;
}

FittedPipeline FitPipeline(const Table& data, const PipelineConfig& config,
                           SeededRng& rng) {
  config.Validate();
  data.Validate();
  Require(data.num_columns() > 0 && data.num_rows() > 0, ErrorCode::kEmptyData,
          "pipeline needs a non-empty dataset");

  const auto numeric = static_cast<double>(
      std::count_if(data.columns.begin(), data.columns.end(),
                    [](const Column& c) { return !c.categorical; }));
  const double per_column_disc =
      numeric > 0 ? config.discretization_share / numeric : 0.0;
  const double per_column_model =
      config.modeling_share / static_cast<double>(data.num_columns());

  BudgetLedger ledger(config.budget);
  std::vector<ColumnFit> fits;
  for (const Column& column : data.columns) {
    SeededRng column_rng = rng.Fork("column:" + column.name);
    Domain domain;
    std::optional<BinMixture> mixture;
    BinSpec spec = FitUniform(ProvidedDomain(0.0, 1.0), 1);
    if (column.categorical) {
      domain = CategoricalDomain(column.values);
      spec = CategoricalSpec(domain);
    } else {
      double disc_share = per_column_disc;
      try {
        switch (config.domain_strategy) {
          case DomainSource::kProvided: {
            const auto it = config.provided_domains.find(column.name);
            Require(it != config.provided_domains.end(),
                    ErrorCode::kInvalidParameter,
                    "no provided domain for this column");
            domain = it->second;
            domain.Validate();
            domain.source = DomainSource::kProvided;
            break;
          }
          case DomainSource::kRaw:
            domain = ExtractDomainRaw(column.values);
            break;
          case DomainSource::kDp: {
            const PrivacyBudget domain_budget = ledger.Spend(
                column.name + "/domain", disc_share * config.domain_share);
            disc_share *= 1.0 - config.domain_share;
            SeededRng domain_rng = column_rng.Fork("domain");
            domain =
                ExtractDomainDp(column.values, domain_budget.epsilon, domain_rng);
            break;
          }
        }
      } catch (const Error& e) {
        throw Error(e.code(), "column '" + column.name + "': " + e.what());
      }

      double mixture_share = 0.0;
      if (config.sampling == SamplingKind::kMixture) {
        mixture_share = disc_share * config.mixture_share;
        disc_share -= mixture_share;
      }
      const PrivacyBudget disc_budget =
          ledger.Spend(column.name + "/discretizer", disc_share);
      const int b = config.bins.Resolve(column.values, config.budget.epsilon);
      SeededRng disc_rng = column_rng.Fork("discretizer");
      spec = Fit(config.discretizer, column.values, domain, b, disc_budget,
                 disc_rng);
      if (config.sampling == SamplingKind::kMixture) {
        const PrivacyBudget mixture_budget =
            ledger.Spend(column.name + "/mixture", mixture_share);
        SeededRng mixture_rng = column_rng.Fork("mixture");
        mixture = FitMixture(column.values, Encode(column.values, spec),
                                 mixture_budget, mixture_rng);
      }
    }
    const PrivacyBudget model_budget =
        ledger.Spend(column.name + "/model", per_column_model);
    SeededRng model_rng = column_rng.Fork("model");
    HistogramModel model =
        FitHistogramDp(Encode(column.values, spec), model_budget, model_rng);
    fits.push_back({column.name, column.categorical, domain, std::move(model),
                    std::move(mixture)});
  }
  return FittedPipeline(std::move(fits), std::move(ledger));
}

PipelineResult PipelineRun(const Table& data, const PipelineConfig& config,
                           size_t n_out, SeededRng& rng) {
  SeededRng fit_rng = rng.Fork("fit");
  FittedPipeline fitted = FitPipeline(data, config, fit_rng);
  SeededRng sample_rng = rng.Fork("sample");
  Table synthetic = fitted.Sample(n_out, sample_rng);
  return {{std::move(synthetic), config, rng.seed(), rng.stream()},
          std::move(fitted)};
}

}  // namespace dpdisc
