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

// Command-line front end: data generation, single-column discretization,
// synthesis, evaluation, the membership-inference game, and config sweeps.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dpdisc/attacks.h"
#include "dpdisc/controlled.h"
#include "dpdisc/csv.h"
#include "dpdisc/error.h"
#include "dpdisc/experiment.h"
#include "dpdisc/generator.h"
#include "dpdisc/metrics.h"
#include "dpdisc/runners.h"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace dpdisc;

double ParseEpsilonFlag(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinity;
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  Require(used == text.size() && value > 0.0, ErrorCode::kInvalidParameter,
          "epsilon must be positive or 'inf', got '" + text + "'");
  return value;
}

json EpsJson(double eps) { return std::isinf(eps) ? json("inf") : json(eps); }

std::vector<Domain> RawDomains(const Table& t) {
  std::vector<Domain> out;
  for (const Column& c : t.columns) out.push_back(ExtractDomainRaw(c.values));
  return out;
}

struct GenArgs {
  std::string kind = "controlled";
  std::string distribution = "normal";
  size_t n = 1000;
  bool plant_target = false;
  bool with_label = false;
  std::string out;
};

int RunGen(const GenArgs& a, uint64_t seed) {
  Table t;
  if (a.kind == "controlled") {
    t.columns.push_back(
        {"x", GenControlled({ParseDistribution(a.distribution), a.n, seed}), false});
  } else if (a.kind == "wine_like") {
    t = GenWineLike({a.n, seed, a.with_label, a.plant_target});
  } else {
    Fail(ErrorCode::kInvalidParameter, "unknown kind '" + a.kind + "'");
  }
  if (a.out.empty() || a.out == "-") {
    WriteCsv(t, std::cout);
  } else {
    WriteCsv(t, a.out);
  }
  return 0;
}

struct DiscretizeArgs {
  std::string input;
  std::string column;
  std::string discretizer = "uniform";
  std::string bins = "20";
  std::string epsilon = "1";
  std::string domain = "raw";
  std::optional<double> lo, hi;
};

int RunDiscretize(const DiscretizeArgs& a, uint64_t seed) {
  const Table t = LoadCsv(a.input);
  const Column& column = a.column.empty() ? t.columns.front() : t.at(a.column);
  const double eps = ParseEpsilonFlag(a.epsilon);
  SeededRng rng(seed, HashLabel("discretize"));
  BudgetLedger ledger(PrivacyBudget{eps, 0.0});
  double share = 1.0;
  Domain domain;
  switch (ParseDomainSource(a.domain)) {
    case DomainSource::kProvided:
      Require(a.lo.has_value() && a.hi.has_value(), ErrorCode::kInvalidParameter,
              "--domain provided needs --lo and --hi");
      domain = ProvidedDomain(*a.lo, *a.hi);
      break;
    case DomainSource::kRaw: domain = ExtractDomainRaw(column.values); break;
    case DomainSource::kDp: {
      const PrivacyBudget b = ledger.Spend("domain", 0.5);
      share = 0.5;
      SeededRng domain_rng = rng.Fork("domain");
      domain = ExtractDomainDp(column.values, b.epsilon, domain_rng);
      break;
    }
  }
  const int b = BinChoice::Parse(a.bins).Resolve(column.values, eps);
  const PrivacyBudget budget = ledger.Spend("discretizer", share);
  SeededRng disc_rng = rng.Fork("discretizer");
  const BinSpec spec =
      Fit(ParseDiscretizer(a.discretizer), column.values, domain, b, budget, disc_rng);
  const BinnedColumn binned = Encode(column.values, spec);
  std::vector<int> counts(spec.num_bins(), 0);
  for (int i : binned.indices) ++counts[i];
  json out;
  out["column"] = column.name;
  out["discretizer"] = a.discretizer;
  out["requested_bins"] = b;
  out["bins"] = spec.num_bins();
  out["domain"] = {{"lo", domain.lo},
                   {"hi", domain.hi},
                   {"source", std::string(DomainSourceName(domain.source))}};
  out["edges"] = spec.edges();
  out["counts"] = counts;
  out["epsilon"] = EpsJson(eps);
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct SynthArgs {
  std::string input;
  std::string discretizer = "uniform";
  std::string bins = "20";
  std::string epsilon = "1";
  std::string domain = "raw";
  std::string sampling = "uniform";
  double discretization_share = 0.1;
  size_t n = 0;
  std::string out;
};

PipelineConfig LoadPipelineConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParsePipelineConfig(buffer.str());
}

int RunSynth(const SynthArgs& a, const std::string& config_path, uint64_t seed) {
  const Table t = LoadCsv(a.input);
  PipelineConfig pc;
  if (!config_path.empty()) {
    pc = LoadPipelineConfig(config_path);
  } else {
    pc.domain_strategy = ParseDomainSource(a.domain);
    Require(pc.domain_strategy != DomainSource::kProvided,
            ErrorCode::kInvalidParameter,
            "--domain provided needs a --config with provided_domains");
    pc.discretizer = ParseDiscretizer(a.discretizer);
    pc.bins = BinChoice::Parse(a.bins);
    pc.sampling = ParseSampling(a.sampling);
    pc.budget = PrivacyBudget{ParseEpsilonFlag(a.epsilon), 0.0};
    pc.discretization_share = a.discretization_share;
    pc.modeling_share = 1.0 - a.discretization_share;
  }
  SeededRng rng(seed, HashLabel("synth"));
  const PipelineResult result =
      PipelineRun(t, pc, a.n == 0 ? t.num_rows() : a.n, rng);
  if (a.out.empty() || a.out == "-") {
    WriteCsv(result.synthetic.data, std::cout);
  } else {
    WriteCsv(result.synthetic.data, a.out);
  }
  for (const auto& e : result.fitted.ledger().entries()) {
    std::cerr << "ledger " << e.label << " epsilon=" << e.budget.epsilon << '\n';
  }
  return 0;
}

struct EvalArgs {
  std::string real;
  std::string synth;
  std::string test;
  std::string label;
  int qs_bins = 50;
};

int RunEval(const EvalArgs& a, uint64_t seed) {
  const Table real = LoadCsv(a.real);
  const Table synth = LoadCsv(a.synth);
  Require(real.num_columns() == synth.num_columns(), ErrorCode::kLengthMismatch,
          "real and synthetic tables have different columns");
  const std::vector<Domain> domains = RawDomains(real);
  SeededRng rng(seed, HashLabel("eval"));
  MetricReport m;
  if (real.num_rows() == synth.num_rows()) {
    m.rs = RecordSimilarity(real, synth, domains);
  }
  m.mpd = MaxPercentileDistance(real, synth);
  SeededRng ds_rng = rng.Fork("ds");
  m.ds = DiscriminatorSimilarity(real, synth, ds_rng);
  const std::vector<BinSpec> specs = EvaluationSpecs(real, domains, a.qs_bins);
  QueryOptions qo;
  qo.dims.clear();
  for (int k = 1; k <= 3 && k <= static_cast<int>(real.num_columns()); ++k) {
    qo.dims.push_back(k);
  }
  SeededRng qs_rng = rng.Fork("qs");
  m.qs = QuerySimilarity(real, synth, specs, qs_rng, qo);
  if (real.num_columns() >= 2) m.cs = CorrelationSimilarity(real, synth).score;
  if (!a.label.empty()) {
    Require(!a.test.empty(), ErrorCode::kInvalidParameter, "--label needs --test");
    m.pu = PredictiveUtility(real, synth, LoadCsv(a.test), a.label);
  }
  json out;
  auto put = [&out](const char* key, const std::optional<double>& v) {
    out[key] = v ? json(*v) : json(nullptr);
  };
  put("rs", m.rs);
  put("mpd", m.mpd);
  put("ds", m.ds);
  put("qs", m.qs);
  put("cs", m.cs);
  put("pu", m.pu);
  out["aggregate"] = m.Aggregate();
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct AttackArgs {
  std::string input;
  size_t n = 2000;
  std::string discretizer = "uniform";
  std::string domain = "raw";
  std::string extractor = "groundhog";
  std::string bins = "20";
  std::string epsilon_d = "1";
  std::string epsilon_g = "1";
  int models_per_class = 50;
};

int RunAttack(const AttackArgs& a, uint64_t seed, int jobs) {
  const Table data = a.input.empty() ? GenWineLike({a.n, seed, false, true})
                                     : LoadCsv(a.input);
  const TargetRecord target = SelectTarget(data, RawDomains(data));
  ShadowGameConfig game;
  game.n_models_per_class = a.models_per_class;
  game.discretizer = ParseDiscretizer(a.discretizer);
  game.domain_strategy = ParseDomainSource(a.domain);
  game.extractor = ParseExtractor(a.extractor);
  game.bins = BinChoice::Parse(a.bins);
  game.epsilon_discretizer = ParseEpsilonFlag(a.epsilon_d);
  game.epsilon_generator = ParseEpsilonFlag(a.epsilon_g);
  game.seed = seed;
  game.jobs = jobs;
  const AttackScore score = RunShadowGame(data, target, game);
  json out;
  out["auc"] = score.auc;
  out["target_index"] = target.index;
  out["target_outside_domain"] = target.outside_domain;
  out["fingerprint"] = score.fingerprint;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int RunExperimentCommand(const std::string& config_path,
                         std::optional<uint64_t> seed, const std::string& out,
                         int jobs) {
  ExperimentConfig config = LoadExperimentConfig(config_path);
  if (seed) config.seed = *seed;
  const std::string dir = out.empty() ? config.output : out;
  const std::vector<RunRecord> records = RunExperiment(config, RunOptions{jobs});
  PersistRecords(records, config, dir);
  size_t errors = 0;
  for (const RunRecord& r : records) errors += r.status != "ok";
  std::cerr << records.size() << " records (" << errors << " errors) written to "
            << dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DP discretization toolkit"};
  app.require_subcommand(1);
  uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 1;
  std::string out;
  std::string config_path;
  app.add_option_function<uint64_t>(
         "--seed", [&](uint64_t s) { seed = s, seed_given = true; },
         "Master seed")
      ->trigger_on_parse();
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Output file or directory");
  app.add_option("--config", config_path,
                 "Experiment config, or pipeline config for synth (JSON)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write generated data as CSV");
  gen_cmd->add_option("--kind", gen.kind, "controlled | wine_like");
  gen_cmd->add_option("--distribution", gen.distribution,
                      "uniform | monotone | normal | beta | mixture | imbalanced");
  gen_cmd->add_option("--n", gen.n, "Rows")->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--plant-target", gen.plant_target);
  gen_cmd->add_flag("--with-label", gen.with_label);

  DiscretizeArgs disc;
  auto* disc_cmd = app.add_subcommand("discretize", "Fit a discretizer and print its edges");
  disc_cmd->add_option("--input", disc.input)->required();
  disc_cmd->add_option("--column", disc.column);
  disc_cmd->add_option("--discretizer", disc.discretizer);
  disc_cmd->add_option("--bins", disc.bins, "Integer or rule name");
  disc_cmd->add_option("--epsilon", disc.epsilon);
  disc_cmd->add_option("--domain", disc.domain, "provided | raw | dp");
  disc_cmd->add_option("--lo", disc.lo);
  disc_cmd->add_option("--hi", disc.hi);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Run the DP pipeline on a CSV (flags or a pipeline --config)");
  synth_cmd->add_option("--input", synth.input)->required();
  synth_cmd->add_option("--discretizer", synth.discretizer);
  synth_cmd->add_option("--bins", synth.bins);
  synth_cmd->add_option("--epsilon", synth.epsilon);
  synth_cmd->add_option("--domain", synth.domain, "raw | dp");
  synth_cmd->add_option("--sampling", synth.sampling, "uniform | mixture");
  synth_cmd->add_option("--discretization-share", synth.discretization_share);
  synth_cmd->add_option("--n", synth.n, "Rows to sample (default: input rows)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a synthetic CSV against a real one");
  eval_cmd->add_option("--real", eval.real)->required();
  eval_cmd->add_option("--synth", eval.synth)->required();
  eval_cmd->add_option("--test", eval.test);
  eval_cmd->add_option("--label", eval.label);
  eval_cmd->add_option("--qs-bins", eval.qs_bins);

  AttackArgs attack;
  auto* attack_cmd = app.add_subcommand("attack", "Membership-inference game");
  attack_cmd->add_option("--input", attack.input, "CSV (default: Wine-like data)");
  attack_cmd->add_option("--n", attack.n);
  attack_cmd->add_option("--discretizer", attack.discretizer);
  attack_cmd->add_option("--domain", attack.domain, "provided | raw | dp");
  attack_cmd->add_option("--extractor", attack.extractor, "groundhog | querybased");
  attack_cmd->add_option("--bins", attack.bins);
  attack_cmd->add_option("--epsilon-discretizer", attack.epsilon_d);
  attack_cmd->add_option("--epsilon-generator", attack.epsilon_g);
  attack_cmd->add_option("--models-per-class", attack.models_per_class);

  auto* exp_cmd = app.add_subcommand("experiment", "Run a config-driven sweep");

  // Global flags are accepted after the subcommand too.
  for (CLI::App* sub : {gen_cmd, disc_cmd, synth_cmd, eval_cmd, attack_cmd, exp_cmd}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen_cmd) {
      gen.out = out;
      return RunGen(gen, seed);
    }
    if (*disc_cmd) return RunDiscretize(disc, seed);
    if (*synth_cmd) {
      synth.out = out;
      return RunSynth(synth, config_path, seed);
    }
    if (*eval_cmd) return RunEval(eval, seed);
    if (*attack_cmd) return RunAttack(attack, seed, jobs);
    if (*exp_cmd) {
      if (config_path.empty()) {
        std::cerr << "experiment: --config is required\n";
        return 2;
      }
      return RunExperimentCommand(
          config_path, seed_given ? std::optional<uint64_t>(seed) : std::nullopt,
          out, jobs);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
