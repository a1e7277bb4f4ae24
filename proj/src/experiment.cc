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

#include "dpdisc/experiment.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "dpdisc/error.h"
#include "json.hpp"

namespace dpdisc {
namespace {

using nlohmann::json;

void RejectUnknownKeys(const json& object, const std::set<std::string>& allowed,
                       const std::string& where) {
  Require(object.is_object(), ErrorCode::kValidation, where + " must be an object");
  for (const auto& [key, value] : object.items()) {
    Require(allowed.count(key) > 0, ErrorCode::kValidation,
            "unknown key '" + key + "' in " + where);
  }
}

template <typename T, typename F>
std::vector<T> ParseList(const json& node, const std::string& key, F&& parse_one) {
  Require(node.is_array(), ErrorCode::kValidation, "'" + key + "' must be a list");
  std::vector<T> out;
  for (const json& item : node) out.push_back(parse_one(item));
  return out;
}

std::string AsString(const json& node, const std::string& key) {
  Require(node.is_string(), ErrorCode::kValidation,
          "'" + key + "' entries must be strings");
  return node.get<std::string>();
}

double ParseEpsilon(const json& node) {
  if (node.is_number()) return node.get<double>();
  Require(node.is_string(), ErrorCode::kValidation,
          "epsilon must be a number or \"inf\"");
  const std::string text = node.get<std::string>();
  Require(text == "inf" || text == "infinity", ErrorCode::kValidation,
          "epsilon must be a number or \"inf\", got '" + text + "'");
  return kInfinity;
}

json EpsilonToJson(double eps) {
  return std::isinf(eps) ? json("inf") : json(eps);
}

BinChoice ParseBinNode(const json& node) {
  if (node.is_number_integer()) {
    const int b = node.get<int>();
    Require(b >= 1, ErrorCode::kValidation, "bin counts must be positive");
    return BinChoice::Fixed(b);
  }
  Require(node.is_string(), ErrorCode::kValidation,
          "bins must be integers or rule names");
  return BinChoice::Parse(node.get<std::string>());
}

// Wraps parse errors from the enum helpers as validation errors.
template <typename F>
auto Checked(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    Fail(ErrorCode::kValidation, e.what());
  }
}

DatasetSource ParseDataset(const json& node) {
  RejectUnknownKeys(node,
                    {"kind", "distributions", "sizes", "path", "column", "n",
                     "plant_target", "label", "with_label"},
                    "dataset");
  DatasetSource d;
  const std::string kind = node.value("kind", std::string("controlled"));
  if (kind == "controlled") {
    d.kind = DatasetSource::Kind::kControlled;
  } else if (kind == "csv") {
    d.kind = DatasetSource::Kind::kCsv;
  } else if (kind == "wine_like") {
    d.kind = DatasetSource::Kind::kWineLike;
  } else {
    Fail(ErrorCode::kValidation, "unknown dataset kind '" + kind + "'");
  }
  if (node.contains("distributions")) {
    d.distributions = ParseList<Distribution>(
        node["distributions"], "distributions", [](const json& item) {
          const std::string name = AsString(item, "distributions");
          return Checked([&] { return ParseDistribution(name); });
        });
  }
  if (node.contains("sizes")) {
    d.sizes = ParseList<size_t>(node["sizes"], "sizes", [](const json& item) {
      Require(item.is_number_integer() && item.get<int64_t>() > 0,
              ErrorCode::kValidation, "sizes must be positive integers");
      return item.get<size_t>();
    });
  }
  if (node.contains("path")) d.path = AsString(node["path"], "path");
  if (node.contains("column")) d.column = AsString(node["column"], "column");
  if (node.contains("n")) {
    Require(node["n"].is_number_integer() && node["n"].get<int64_t>() > 1,
            ErrorCode::kValidation, "dataset.n must be an integer > 1");
    d.n = node["n"].get<size_t>();
  }
  if (node.contains("plant_target")) d.plant_target = node["plant_target"].get<bool>();
  if (node.contains("label")) d.label = AsString(node["label"], "label");
  if (node.contains("with_label")) d.with_label = node["with_label"].get<bool>();
  if (d.kind == DatasetSource::Kind::kCsv) {
    Require(!d.path.empty(), ErrorCode::kValidation, "csv dataset needs a path");
  }
  return d;
}

std::string DatasetKindName(DatasetSource::Kind kind) {
  switch (kind) {
    case DatasetSource::Kind::kControlled: return "controlled";
    case DatasetSource::Kind::kCsv: return "csv";
    case DatasetSource::Kind::kWineLike: return "wine_like";
  }
  return "unknown";
}

std::string Optional(const std::optional<double>& value) {
  return value ? FormatDouble(*value) : std::string();
}

std::string CsvEscape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

json OptionalJson(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

}  // namespace

std::string_view SettingName(Setting setting) {
  switch (setting) {
    case Setting::kUs1: return "us1";
    case Setting::kUs2: return "us2";
    case Setting::kUs3Lite: return "us3lite";
    case Setting::kPs1: return "ps1";
  }
  return "unknown";
}

Setting ParseSetting(std::string_view name) {
  for (Setting s : {Setting::kUs1, Setting::kUs2, Setting::kUs3Lite, Setting::kPs1}) {
    if (SettingName(s) == name) return s;
  }
  Fail(ErrorCode::kValidation, "unknown setting '" + std::string(name) + "'");
}

ExperimentConfig::ExperimentConfig() {
  for (int b : kDefaultBinGrid) bins.push_back(BinChoice::Fixed(b));
  epsilons = kDefaultEpsilonGrid;
}

void ExperimentConfig::Validate() const {
  Require(!discretizers.empty(), ErrorCode::kValidation, "empty discretizer sweep");
  Require(!epsilons.empty(), ErrorCode::kValidation, "empty epsilon sweep");
  Require(!domain_strategies.empty(), ErrorCode::kValidation,
          "empty domain strategy sweep");
  Require(models >= 1 && synth_per_model >= 1, ErrorCode::kValidation,
          "repeats must be at least 1");
  Require(qs_eval_bins >= 1, ErrorCode::kValidation, "qs_eval_bins must be >= 1");
  Require(discretization_share > 0.0 && discretization_share < 1.0,
          ErrorCode::kValidation, "discretization_share must lie in (0, 1)");
  Require(test_fraction > 0.0 && test_fraction < 1.0, ErrorCode::kValidation,
          "test_fraction must lie in (0, 1)");
  for (double eps : epsilons) {
    Require(eps > 0.0 && !std::isnan(eps), ErrorCode::kValidation,
            "epsilons must be positive");
  }
  if (dataset.kind == DatasetSource::Kind::kControlled) {
    Require(!dataset.distributions.empty() && !dataset.sizes.empty(),
            ErrorCode::kValidation, "empty dataset sweep");
  }
  if (setting == Setting::kPs1) {
    Require(!extractors.empty(), ErrorCode::kValidation, "empty extractor sweep");
    Require(!generator_epsilons.empty(), ErrorCode::kValidation,
            "empty generator epsilon sweep");
    Require(models_per_class >= 2, ErrorCode::kValidation,
            "models_per_class must be >= 2");
    Require(attacker_bins >= 1, ErrorCode::kValidation, "attacker_bins must be >= 1");
    Require(dataset.kind != DatasetSource::Kind::kControlled,
            ErrorCode::kValidation, "ps1 needs a multi-column dataset");
    for (double eps : generator_epsilons) {
      Require(eps > 0.0, ErrorCode::kValidation, "generator epsilons must be positive");
    }
  } else {
    Require(!bins.empty(), ErrorCode::kValidation, "empty bin sweep");
  }
  if (setting == Setting::kUs3Lite) {
    Require(dataset.kind != DatasetSource::Kind::kControlled,
            ErrorCode::kValidation, "us3lite needs a multi-column dataset");
  }
}

ExperimentConfig ParseExperimentConfig(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  RejectUnknownKeys(doc,
                    {"setting", "dataset", "discretizers", "bins", "epsilons",
                     "domain_strategies", "sampling", "repeats", "seed",
                     "output", "qs_eval_bins", "discretization_share",
                     "test_fraction", "models_per_class", "extractors",
                     "generator_epsilons", "attacker_bins"},
                    "config");
  ExperimentConfig c;
  try {
    Require(doc.contains("setting"), ErrorCode::kValidation, "missing 'setting'");
    c.setting = ParseSetting(AsString(doc["setting"], "setting"));
    if (doc.contains("dataset")) c.dataset = ParseDataset(doc["dataset"]);
    if (doc.contains("discretizers")) {
      c.discretizers = ParseList<DiscretizerKind>(
          doc["discretizers"], "discretizers", [](const json& item) {
            const std::string name = AsString(item, "discretizers");
            return Checked([&] { return ParseDiscretizer(name); });
          });
    }
    if (doc.contains("bins")) {
      c.bins = ParseList<BinChoice>(doc["bins"], "bins", [](const json& item) {
        return Checked([&] { return ParseBinNode(item); });
      });
    }
    if (doc.contains("epsilons")) {
      c.epsilons = ParseList<double>(doc["epsilons"], "epsilons", ParseEpsilon);
    }
    if (doc.contains("domain_strategies")) {
      c.domain_strategies = ParseList<DomainSource>(
          doc["domain_strategies"], "domain_strategies", [](const json& item) {
            const std::string name = AsString(item, "domain_strategies");
            return Checked([&] { return ParseDomainSource(name); });
          });
    }
    if (doc.contains("sampling")) {
      const std::string name = AsString(doc["sampling"], "sampling");
      c.sampling = Checked([&] { return ParseSampling(name); });
    }
    if (doc.contains("repeats")) {
      const json& r = doc["repeats"];
      RejectUnknownKeys(r, {"models", "synth_per_model"}, "repeats");
      c.models = r.value("models", c.models);
      c.synth_per_model = r.value("synth_per_model", c.synth_per_model);
    }
    if (doc.contains("seed")) {
      Require(doc["seed"].is_number_unsigned() || doc["seed"].is_number_integer(),
              ErrorCode::kValidation, "seed must be a non-negative integer");
      c.seed = doc["seed"].get<uint64_t>();
    }
    if (doc.contains("output")) c.output = AsString(doc["output"], "output");
    c.qs_eval_bins = doc.value("qs_eval_bins", c.qs_eval_bins);
    c.discretization_share = doc.value("discretization_share", c.discretization_share);
    c.test_fraction = doc.value("test_fraction", c.test_fraction);
    c.models_per_class = doc.value("models_per_class", c.models_per_class);
    c.attacker_bins = doc.value("attacker_bins", c.attacker_bins);
    if (doc.contains("extractors")) {
      c.extractors = ParseList<FeatureExtractor>(
          doc["extractors"], "extractors", [](const json& item) {
            const std::string name = AsString(item, "extractors");
            return Checked([&] { return ParseExtractor(name); });
          });
    }
    if (doc.contains("generator_epsilons")) {
      c.generator_epsilons = ParseList<double>(doc["generator_epsilons"],
                                               "generator_epsilons", ParseEpsilon);
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kValidation, std::string("config: ") + e.what());
  }
  c.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(buffer.str());
}

std::string ExperimentConfigToJson(const ExperimentConfig& c) {
  json doc;
  doc["setting"] = std::string(SettingName(c.setting));
  json ds;
  ds["kind"] = DatasetKindName(c.dataset.kind);
  switch (c.dataset.kind) {
    case DatasetSource::Kind::kControlled: {
      json names = json::array();
      for (Distribution d : c.dataset.distributions) {
        names.push_back(std::string(DistributionName(d)));
      }
      ds["distributions"] = names;
      ds["sizes"] = c.dataset.sizes;
      break;
    }
    case DatasetSource::Kind::kCsv:
      ds["path"] = c.dataset.path;
      if (!c.dataset.label.empty()) ds["label"] = c.dataset.label;
      break;
    case DatasetSource::Kind::kWineLike:
      ds["n"] = c.dataset.n;
      ds["plant_target"] = c.dataset.plant_target;
      ds["with_label"] = c.dataset.with_label;
      break;
  }
  if (!c.dataset.column.empty()) ds["column"] = c.dataset.column;
  doc["dataset"] = ds;
  json discs = json::array();
  for (DiscretizerKind k : c.discretizers) discs.push_back(std::string(DiscretizerName(k)));
  doc["discretizers"] = discs;
  json bins = json::array();
  for (const BinChoice& b : c.bins) {
    if (b.rule == BinRule::kFixed) {
      bins.push_back(b.fixed);
    } else {
      bins.push_back(b.ToString());
    }
  }
  doc["bins"] = bins;
  json eps = json::array();
  for (double e : c.epsilons) eps.push_back(EpsilonToJson(e));
  doc["epsilons"] = eps;
  json domains = json::array();
  for (DomainSource s : c.domain_strategies) domains.push_back(std::string(DomainSourceName(s)));
  doc["domain_strategies"] = domains;
  doc["sampling"] = std::string(SamplingName(c.sampling));
  doc["repeats"] = {{"models", c.models}, {"synth_per_model", c.synth_per_model}};
  doc["seed"] = c.seed;
  doc["output"] = c.output;
  doc["qs_eval_bins"] = c.qs_eval_bins;
  doc["discretization_share"] = c.discretization_share;
  doc["test_fraction"] = c.test_fraction;
  if (c.setting == Setting::kPs1) {
    doc["models_per_class"] = c.models_per_class;
    json ex = json::array();
    for (FeatureExtractor e : c.extractors) ex.push_back(std::string(ExtractorName(e)));
    doc["extractors"] = ex;
    json geps = json::array();
    for (double e : c.generator_epsilons) geps.push_back(EpsilonToJson(e));
    doc["generator_epsilons"] = geps;
    doc["attacker_bins"] = c.attacker_bins;
  }
  return doc.dump(2);
}

std::string PipelineConfigToJson(const PipelineConfig& c) {
  json doc;
  doc["domain_strategy"] = std::string(DomainSourceName(c.domain_strategy));
  doc["discretizer"] = std::string(DiscretizerName(c.discretizer));
  doc["bins"] = c.bins.rule == BinRule::kFixed ? json(c.bins.fixed)
                                               : json(c.bins.ToString());
  doc["sampling"] = std::string(SamplingName(c.sampling));
  doc["epsilon"] = EpsilonToJson(c.budget.epsilon);
  doc["delta"] = c.budget.delta;
  doc["discretization_share"] = c.discretization_share;
  doc["modeling_share"] = c.modeling_share;
  doc["domain_share"] = c.domain_share;
  doc["mixture_share"] = c.mixture_share;
  json domains = json::object();
  for (const auto& [name, d] : c.provided_domains) domains[name] = {d.lo, d.hi};
  doc["provided_domains"] = domains;
  return doc.dump(2);
}

PipelineConfig ParsePipelineConfig(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse, std::string("pipeline config: ") + e.what());
  }
  RejectUnknownKeys(doc,
                    {"domain_strategy", "discretizer", "bins", "sampling",
                     "epsilon", "delta", "discretization_share",
                     "modeling_share", "domain_share", "mixture_share",
                     "provided_domains"},
                    "pipeline config");
  PipelineConfig c;
  try {
    if (doc.contains("domain_strategy")) {
      const std::string name = AsString(doc["domain_strategy"], "domain_strategy");
      c.domain_strategy = Checked([&] { return ParseDomainSource(name); });
    }
    if (doc.contains("discretizer")) {
      const std::string name = AsString(doc["discretizer"], "discretizer");
      c.discretizer = Checked([&] { return ParseDiscretizer(name); });
    }
    if (doc.contains("bins")) {
      c.bins = Checked([&] { return ParseBinNode(doc["bins"]); });
    }
    if (doc.contains("sampling")) {
      const std::string name = AsString(doc["sampling"], "sampling");
      c.sampling = Checked([&] { return ParseSampling(name); });
    }
    if (doc.contains("epsilon")) c.budget.epsilon = ParseEpsilon(doc["epsilon"]);
    c.budget.delta = doc.value("delta", c.budget.delta);
    c.discretization_share = doc.value("discretization_share", c.discretization_share);
    c.modeling_share = doc.value("modeling_share", c.modeling_share);
    c.domain_share = doc.value("domain_share", c.domain_share);
    c.mixture_share = doc.value("mixture_share", c.mixture_share);
    if (doc.contains("provided_domains")) {
      const json& domains = doc["provided_domains"];
      Require(domains.is_object(), ErrorCode::kValidation,
              "provided_domains must map column names to [lo, hi]");
      for (const auto& [name, pair] : domains.items()) {
        Require(pair.is_array() && pair.size() == 2, ErrorCode::kValidation,
                "provided domain for '" + name + "' must be [lo, hi]");
        c.provided_domains[name] =
            Checked([&] { return ProvidedDomain(pair[0].get<double>(), pair[1].get<double>()); });
      }
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kValidation, std::string("pipeline config: ") + e.what());
  }
  Checked([&] {
    c.Validate();
    return 0;
  });
  return c;
}

std::string FormatDouble(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<std::string> RecordCsvHeader() {
  return {"setting",     "dataset",       "n",
          "discretizer", "bins",          "domain_strategy",
          "sampling",    "extractor",     "epsilon",
          "epsilon_generator", "model_rep", "synth_rep",
          "seed",        "stream",        "bins_produced",
          "rs",          "mpd",           "ds",
          "qs",          "cs",            "pu",
          "aggregate",   "auc",           "target_index",
          "target_outside_domain", "spent_epsilon", "status",
          "error",       "note"};
}

std::vector<std::string> RecordCsvRow(const RunRecord& r) {
  std::string produced;
  for (size_t i = 0; i < r.bins_produced.size(); ++i) {
    if (i > 0) produced.push_back(';');
    produced += std::to_string(r.bins_produced[i]);
  }
  return {r.setting,
          r.dataset,
          std::to_string(r.n),
          r.discretizer,
          r.bins,
          r.domain_strategy,
          r.sampling,
          r.extractor,
          FormatDouble(r.epsilon),
          Optional(r.epsilon_generator),
          std::to_string(r.model_rep),
          std::to_string(r.synth_rep),
          std::to_string(r.seed),
          std::to_string(r.stream),
          produced,
          Optional(r.metrics.rs),
          Optional(r.metrics.mpd),
          Optional(r.metrics.ds),
          Optional(r.metrics.qs),
          Optional(r.metrics.cs),
          Optional(r.metrics.pu),
          Optional(r.aggregate),
          Optional(r.auc),
          r.target_index ? std::to_string(*r.target_index) : std::string(),
          r.target_outside_domain ? (*r.target_outside_domain ? "1" : "0") : "",
          FormatDouble(r.spent_epsilon),
          r.status,
          r.error,
          r.note};
}

void WriteRecordsCsv(const std::vector<RunRecord>& records, std::ostream& out) {
  auto write_row = [&out](const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out << ',';
      out << CsvEscape(fields[i]);
    }
    out << '\n';
  };
  write_row(RecordCsvHeader());
  for (const RunRecord& r : records) write_row(RecordCsvRow(r));
}

std::string RecordsToJson(const std::vector<RunRecord>& records,
                          const ExperimentConfig& config) {
  json doc;
  doc["config"] = json::parse(ExperimentConfigToJson(config));
  json rows = json::array();
  for (const RunRecord& r : records) {
    json row;
    row["setting"] = r.setting;
    row["dataset"] = r.dataset;
    row["n"] = r.n;
    row["discretizer"] = r.discretizer;
    row["bins"] = r.bins;
    row["domain_strategy"] = r.domain_strategy;
    row["sampling"] = r.sampling;
    row["extractor"] = r.extractor;
    row["epsilon"] = EpsilonToJson(r.epsilon);
    row["epsilon_generator"] =
        r.epsilon_generator ? EpsilonToJson(*r.epsilon_generator) : json(nullptr);
    row["model_rep"] = r.model_rep;
    row["synth_rep"] = r.synth_rep;
    row["seed"] = r.seed;
    row["stream"] = r.stream;
    row["bins_produced"] = r.bins_produced;
    row["metrics"] = {{"rs", OptionalJson(r.metrics.rs)},
                      {"mpd", OptionalJson(r.metrics.mpd)},
                      {"ds", OptionalJson(r.metrics.ds)},
                      {"qs", OptionalJson(r.metrics.qs)},
                      {"cs", OptionalJson(r.metrics.cs)},
                      {"pu", OptionalJson(r.metrics.pu)}};
    row["aggregate"] = OptionalJson(r.aggregate);
    row["auc"] = OptionalJson(r.auc);
    row["target_index"] = r.target_index ? json(*r.target_index) : json(nullptr);
    row["target_outside_domain"] =
        r.target_outside_domain ? json(*r.target_outside_domain) : json(nullptr);
    json ledger = json::array();
    for (const auto& e : r.ledger) {
      ledger.push_back({{"label", e.label},
                        {"fraction", e.fraction},
                        {"epsilon", EpsilonToJson(e.budget.epsilon)}});
    }
    row["ledger"] = ledger;
    row["spent_epsilon"] = EpsilonToJson(r.spent_epsilon);
    row["timings_ms"] = {{"fit", r.timings.fit_ms},
                         {"sample", r.timings.sample_ms},
                         {"metrics", r.timings.metrics_ms},
                         {"total", r.timings.total_ms}};
    row["status"] = r.status;
    row["error"] = r.error;
    row["note"] = r.note;
    rows.push_back(std::move(row));
  }
  doc["records"] = rows;
  return doc.dump(2);
}

void PersistRecords(const std::vector<RunRecord>& records,
                    const ExperimentConfig& config, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  Require(!ec, ErrorCode::kIo, "cannot create '" + dir + "': " + ec.message());
  {
    std::ofstream out(dir + "/results.csv", std::ios::binary);
    Require(out.good(), ErrorCode::kIo, "cannot write results.csv in '" + dir + "'");
    WriteRecordsCsv(records, out);
  }
  std::ofstream out(dir + "/results.json", std::ios::binary);
  Require(out.good(), ErrorCode::kIo, "cannot write results.json in '" + dir + "'");
  out << RecordsToJson(records, config) << '\n';
}

}  // namespace dpdisc
