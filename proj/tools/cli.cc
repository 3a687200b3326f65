// Copyright 2026 The sfc-eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sfc/copa_flip.h"
#include "sfc/error.h"
#include "sfc/harness.h"
#include "sfc/instance.h"
#include "sfc/ngram_lm.h"
#include "sfc/report.h"
#include "sfc/response_cache.h"
#include "sfc/scoring.h"
#include "sfc/service_backend.h"
#include "sfc/sfc_lab.h"
#include "sfc/template.h"
#include "sfc/toy_lm.h"
#include "sfc/wins.h"

#ifndef SFC_VERSION
#define SFC_VERSION "unknown"
#endif

namespace sfc::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct RunFlags {
  std::vector<std::string> datasets;
  std::string template_spec;
  std::string strategies = "unc,lm,avg,pmi_dc";
  std::string backend = "toy";
  std::string model;
  std::string base_url = "http://127.0.0.1:8000";
  int k_shot = 0;
  std::uint64_t seed = 0;
  std::string prompt_set;
  std::vector<std::uint64_t> seeds;
  int parallelism = 1;
  std::string cache_dir;
  bool offline = false;
  std::string out;
  double max_error_frac = kDefaultMaxErrorFraction;
  std::string auth_env = std::string(kDefaultAuthEnv);
  double requests_per_second = 0.0;
  std::string toy_spec;
  std::string ngram_corpus;
  int ngram_order = 2;
  double ngram_k = 1.0;
  std::string split = "dev";
  std::string fewshot_pool;
  std::string weights;
  std::vector<std::string> content_free;
  bool predict_only = false;
};

struct LabFlags {
  std::string spec;
  double paraphrase_mass = 0.35;
  std::vector<double> sweep_masses = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::string out;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
};

Json RunFlagsToJson(const std::string& command, const RunFlags& f) {
  Json j;
  j["command"] = command;
  j["version"] = SFC_VERSION;
  j["dataset"] = f.datasets;
  j["template"] = f.template_spec;
  j["strategy"] = f.strategies;
  j["backend"] = f.backend;
  j["model"] = f.model;
  j["base_url"] = f.base_url;
  j["k_shot"] = f.k_shot;
  j["seed"] = f.seed;
  j["prompt_set"] = f.prompt_set;
  j["seeds"] = f.seeds;
  j["parallelism"] = f.parallelism;
  j["cache_dir"] = f.cache_dir;
  j["offline"] = f.offline;
  j["out"] = f.out;
  j["max_error_frac"] = f.max_error_frac;
  j["auth_env"] = f.auth_env;
  j["requests_per_second"] = f.requests_per_second;
  j["toy_spec"] = f.toy_spec;
  j["ngram_corpus"] = f.ngram_corpus;
  j["ngram_order"] = f.ngram_order;
  j["ngram_k"] = f.ngram_k;
  j["split"] = f.split;
  j["fewshot_pool"] = f.fewshot_pool;
  j["weights"] = f.weights;
  j["content_free"] = f.content_free;
  j["predict_only"] = f.predict_only;
  return j;
}

void AddRunFlags(CLI::App* app, RunFlags& f, bool needs_out = true) {
  app->add_option("--dataset", f.datasets, "Dataset JSONL file(s)")
      ->delimiter(',')
      ->required();
  app->add_option("--template", f.template_spec,
                  "Bundled template id, dataset alias or template JSON file");
  app->add_option("--strategy", f.strategies,
                  "Comma list of unc, lm, avg, pmi_dc, cc, premise_lm")
      ->capture_default_str();
  app->add_option("--backend", f.backend, "Scoring backend")
      ->check(CLI::IsMember({"toy", "ngram", "service"}))
      ->capture_default_str();
  app->add_option("--model", f.model, "Model name sent to the service backend");
  app->add_option("--base-url", f.base_url, "Service base URL")->capture_default_str();
  app->add_option("--k-shot", f.k_shot, "Few-shot exemplars per prompt")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--seed", f.seed, "Few-shot sampling seed")->capture_default_str();
  app->add_option("--fewshot-pool", f.fewshot_pool,
                  "Dataset JSONL to draw exemplars from (default: the evaluated set)");
  app->add_option("--parallelism", f.parallelism, "Concurrent scoring workers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--cache-dir", f.cache_dir,
                  "Score cache directory (default: $" + std::string(kCacheDirEnv) + ")");
  app->add_flag("--offline", f.offline,
                "Serve scores from the cache only; a miss is a backend failure");
  auto* out = app->add_option("--out", f.out, "Output directory");
  if (needs_out) out->required();
  app->add_option("--max-error-frac", f.max_error_frac,
                  "Allowed fraction of errored instances")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app->add_option("--auth-env", f.auth_env,
                  "Environment variable holding the service API key")
      ->capture_default_str();
  app->add_option("--requests-per-second", f.requests_per_second,
                  "Service request pacing; 0 disables")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--toy-spec", f.toy_spec, "Toy LM table (JSON)");
  app->add_option("--ngram-corpus", f.ngram_corpus, "N-gram training corpus");
  app->add_option("--ngram-order", f.ngram_order, "N-gram order")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--ngram-k", f.ngram_k, "Add-k smoothing constant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--split", f.split, "Split name recorded for the dataset")
      ->capture_default_str();
  app->add_option("--weights", f.weights, "Calibration weights JSON for cc");
  app->add_option("--content-free", f.content_free,
                  "Content-free inputs for cc (default: N/A, empty, [MASK])")
      ->delimiter(',');
  app->add_flag("--predict-only", f.predict_only, "Allow records without labels");
}

struct BackendHandle {
  std::shared_ptr<Backend> backend;
  std::shared_ptr<ResponseCache> cache;
  std::shared_ptr<CachedBackend> cached;
};

std::shared_ptr<Backend> MakeInnerBackend(const RunFlags& f) {
  if (f.backend == "toy") {
    if (f.toy_spec.empty()) throw Error(ErrorCode::kConfig, "--backend toy needs --toy-spec");
    return std::make_shared<ToyBackend>(LoadToyLmSpec(f.toy_spec));
  }
  if (f.backend == "ngram") {
    if (f.ngram_corpus.empty()) {
      throw Error(ErrorCode::kConfig, "--backend ngram needs --ngram-corpus");
    }
    return std::make_shared<NGramBackend>(
        NGramLmSpec{f.ngram_order, f.ngram_k, f.ngram_corpus});
  }
  if (f.model.empty()) throw Error(ErrorCode::kConfig, "--backend service needs --model");
  ServiceBackendConfig config;
  config.base_url = f.base_url;
  config.model = f.model;
  config.auth_env = f.auth_env;
  config.parallelism = f.parallelism;
  config.requests_per_second = f.requests_per_second;
  config.Validate();
  return std::make_shared<ServiceBackend>(config);
}

std::string ModelIdFor(const RunFlags& f) {
  if (f.backend == "toy") return LoadToyLmSpec(f.toy_spec).model_id;
  if (f.backend == "ngram") return NGramBackend({f.ngram_order, f.ngram_k, f.ngram_corpus}).model_id();
  return f.model;
}

BackendHandle MakeBackend(const RunFlags& f) {
  BackendHandle h;
  const auto dir = ResponseCache::ResolveDirectory(
      f.cache_dir.empty() ? std::nullopt : std::optional<fs::path>(f.cache_dir));
  if (!dir) {
    if (f.offline) throw Error(ErrorCode::kConfig, "--offline needs a cache directory");
    h.backend = MakeInnerBackend(f);
    return h;
  }
  h.cache = std::make_shared<ResponseCache>(
      *dir / kCacheFileName, f.offline ? CacheMode::kReadOnly : CacheMode::kReadWrite);
  std::shared_ptr<Backend> inner = f.offline ? nullptr : MakeInnerBackend(f);
  const std::string model_id = inner ? inner->model_id() : ModelIdFor(f);
  h.cached = std::make_shared<CachedBackend>(h.cache, inner, model_id);
  h.backend = h.cached;
  return h;
}

std::vector<std::string> TemplateSlots(const Template& t) {
  static const std::regex kSlot(R"(\{([A-Za-z0-9_]+)\})");
  std::set<std::string> names;
  for (const std::string* pattern : {&t.conditional_pattern, &t.domain_premise}) {
    for (std::sregex_iterator it(pattern->begin(), pattern->end(), kSlot), end; it != end;
         ++it) {
      if ((*it)[1] != "connective") names.insert((*it)[1]);
    }
  }
  return {names.begin(), names.end()};
}

Template TemplateForDataset(const RunFlags& f, const std::string& dataset_id) {
  if (!f.template_spec.empty()) return ResolveTemplate(f.template_spec);
  if (const Template* t = FindBundledTemplate(dataset_id)) return *t;
  std::string ids;
  for (const std::string& id : BundledTemplateIds()) ids += (ids.empty() ? "" : ", ") + id;
  throw Error(ErrorCode::kConfig, "dataset '" + dataset_id +
                                      "' has no bundled template; pass --template "
                                      "(available: " + ids + ")");
}

std::vector<Instance> LoadFor(const fs::path& path, const std::string& dataset_id,
                              const Template& t, const RunFlags& f) {
  DatasetSchema schema;
  schema.dataset_id = dataset_id;
  schema.split = f.split;
  schema.required_fields = TemplateSlots(t);
  schema.mode = f.predict_only ? LoadMode::kPredictOnly : LoadMode::kEval;
  return LoadDataset(path, schema);
}

RunConfig MakeRunConfig(const RunFlags& f) {
  RunConfig config;
  config.strategies = ParseStrategyList(f.strategies);
  config.few_shot.k = f.k_shot;
  config.few_shot.seed = f.seed;
  config.parallelism = f.parallelism;
  config.max_error_fraction = f.max_error_frac;
  if (!f.weights.empty()) config.calibration = LoadCalibrationWeights(f.weights);
  if (!f.content_free.empty()) config.content_free_inputs = f.content_free;
  config.Validate();
  return config;
}

EvalTask MakeTask(const std::string& dataset, const RunFlags& f) {
  EvalTask task;
  task.dataset_id = DatasetIdFromPath(dataset);
  task.split = f.split;
  task.tmpl = TemplateForDataset(f, task.dataset_id);
  task.instances = LoadFor(dataset, task.dataset_id, task.tmpl, f);
  if (!f.fewshot_pool.empty()) {
    task.few_shot_pool = LoadFor(f.fewshot_pool, task.dataset_id, task.tmpl, f);
  }
  return task;
}

std::string JsonText(const Json& j) { return j.dump(2) + "\n"; }

void WriteSnapshot(const fs::path& dir, const Json& snapshot) {
  WriteTextFile(dir / "config.json", JsonText(snapshot));
}

int RunEval(const RunFlags& f, const Context& ctx) {
  const fs::path out(f.out);
  WriteSnapshot(out, RunFlagsToJson("eval", f));
  const RunConfig config = MakeRunConfig(f);
  std::vector<EvalTask> tasks;
  for (const std::string& d : f.datasets) tasks.push_back(MakeTask(d, f));
  for (const EvalTask& t : tasks) ValidateTask(t, config);

  BackendHandle h = MakeBackend(f);
  std::vector<EvalReport> reports;
  for (const EvalTask& task : tasks) {
    EvalReport report = Evaluate(task, *h.backend, config);
    WriteTextFile(out / (task.dataset_id + ".report.json"), JsonText(ReportToJson(report)));
    WriteTextFile(out / (task.dataset_id + ".predictions.jsonl"), PredictionsJsonl(report));
    reports.push_back(std::move(report));
  }
  const std::string table = AccuracyTableMarkdown(reports);
  WriteTextFile(out / "accuracy.md", table);
  WriteTextFile(out / "accuracy.tsv", AccuracyTableTsv(reports));
  if (reports.size() > 1) {
    std::vector<std::string> names;
    for (Strategy s : config.strategies) names.emplace_back(StrategyName(s));
    const WinsGroup group = WinsGroupFromReports(h.backend->model_id(), reports);
    const WinsTable wins = AggregateWins(names, std::span<const WinsGroup>(&group, 1));
    WriteTextFile(out / "wins.json", JsonText(WinsTableToJson(wins)));
    WriteTextFile(out / "wins.md", WinsTableMarkdown(wins));
    WriteTextFile(out / "wins.tsv", WinsTableTsv(wins));
  }
  ctx.out << table;
  for (const EvalReport& r : reports) {
    if (r.n_errored > 0) {
      ctx.err << r.metadata.dataset_id << ": " << r.n_errored << " of " << r.n_instances
              << " instances errored\n";
    }
  }
  for (const EvalReport& r : reports) CheckErrorThreshold(r, config.max_error_fraction);
  return 0;
}

std::vector<Template> PromptSet(const std::string& spec) {
  std::vector<Template> out;
  if (fs::is_regular_file(spec)) {
    std::ifstream in(spec);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kDataFormat, spec + " is not JSON: " + e.what());
    }
    if (!j.is_array()) throw Error(ErrorCode::kDataFormat, spec + " must hold a JSON array");
    for (const auto& item : j) {
      out.push_back(item.is_string() ? ResolveTemplate(item.get<std::string>())
                                     : TemplateFromJson(item));
    }
    return out;
  }
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(ResolveTemplate(item));
  }
  return out;
}

int RunSweep(const RunFlags& f, const Context& ctx) {
  const fs::path out(f.out);
  WriteSnapshot(out, RunFlagsToJson("sweep", f));
  if (f.datasets.size() != 1) throw Error(ErrorCode::kConfig, "sweep takes one --dataset");
  const RunConfig config = MakeRunConfig(f);
  std::vector<Template> templates;
  if (!f.prompt_set.empty()) templates = PromptSet(f.prompt_set);
  EvalTask task;
  task.dataset_id = DatasetIdFromPath(f.datasets.front());
  task.split = f.split;
  task.tmpl = templates.empty() ? TemplateForDataset(f, task.dataset_id) : templates.front();
  std::set<std::string> fields;
  for (const Template& t : templates.empty() ? std::vector<Template>{task.tmpl} : templates) {
    for (const std::string& s : TemplateSlots(t)) fields.insert(s);
  }
  DatasetSchema schema{task.dataset_id, f.split, {fields.begin(), fields.end()},
                       f.predict_only ? LoadMode::kPredictOnly : LoadMode::kEval};
  task.instances = LoadDataset(f.datasets.front(), schema);
  if (!f.fewshot_pool.empty()) task.few_shot_pool = LoadDataset(f.fewshot_pool, schema);
  for (const Template& t : templates) {
    EvalTask probe = task;
    probe.tmpl = t;
    ValidateTask(probe, config);
  }

  BackendHandle h = MakeBackend(f);
  SweepReport sweep;
  if (!templates.empty()) {
    sweep = SweepTemplates(task, templates, *h.backend, config);
  } else if (f.seeds.size() >= 2) {
    sweep = SweepSeeds(task, f.seeds, *h.backend, config);
  } else {
    throw Error(ErrorCode::kConfig,
                "sweep needs --prompt-set with two or more templates or --seeds with "
                "two or more seeds");
  }
  WriteTextFile(out / "sweep.json", JsonText(SweepReportToJson(sweep)));
  const std::string table = SweepTableMarkdown(sweep);
  WriteTextFile(out / "sweep.md", table);
  WriteTextFile(out / "sweep.tsv", SweepTableTsv(sweep));
  ctx.out << table;
  for (const EvalReport& r : sweep.runs) CheckErrorThreshold(r, config.max_error_fraction);
  return 0;
}

int RunFlipEval(const RunFlags& f, const Context& ctx) {
  const fs::path out(f.out);
  WriteSnapshot(out, RunFlagsToJson("flip-eval", f));
  if (f.datasets.size() != 1) throw Error(ErrorCode::kConfig, "flip-eval takes one --dataset");
  RunFlags flags = f;
  if (flags.template_spec.empty()) flags.template_spec = "copa";
  const RunConfig config = MakeRunConfig(flags);
  const EvalTask task = MakeTask(flags.datasets.front(), flags);
  for (const Instance& inst : task.instances) {
    if (!inst.relation) {
      throw Error(ErrorCode::kNotFlippable,
                  "instance '" + inst.instance_id + "' has no relation; not flippable");
    }
  }
  BackendHandle h = MakeBackend(flags);
  const FlippedReport report = EvaluateFlipped(task, *h.backend, config);
  WriteTextFile(out / "flip_eval.json", JsonText(FlippedReportToJson(report)));

  std::string table = "| strategy | original | flipped |\n| --- | ---: | ---: |\n";
  for (Strategy s : report.flipped.strategies) {
    auto orig = report.original.accuracy.find(s);
    table += "| " + std::string(StrategyName(s)) + " | " +
             (orig == report.original.accuracy.end() ? std::string("-")
                                                     : FormatAccuracy(orig->second)) +
             " | " + FormatAccuracy(report.flipped.accuracy.at(s)) + " |\n";
  }
  WriteTextFile(out / "flip_eval.md", table);
  ctx.out << table << "lm/avg/pmi_dc flipped selection identity: "
          << FormatAccuracy(report.selection_identity) << "%\n";
  if (report.selection_identity < 1.0) {
    ctx.err << "warning: flipped selections of lm, avg and pmi_dc differ on some "
               "instances\n";
  }
  CheckErrorThreshold(report.original, config.max_error_fraction);
  CheckErrorThreshold(report.flipped, config.max_error_fraction);
  return 0;
}

int RunCalibrate(const RunFlags& f, const Context& ctx) {
  const fs::path out(f.out);
  WriteSnapshot(out, RunFlagsToJson("calibrate", f));
  if (f.datasets.size() != 1) throw Error(ErrorCode::kConfig, "calibrate takes one --dataset");
  const EvalTask task = MakeTask(f.datasets.front(), f);
  if (!task.tmpl.closed_label_set) {
    throw Error(ErrorCode::kConfig,
                "template '" + task.tmpl.id + "' has no closed label set to calibrate");
  }
  if (task.instances.empty()) throw Error(ErrorCode::kDataFormat, "dataset is empty");
  const std::vector<std::string> inputs =
      f.content_free.empty() ? DefaultContentFreeInputs() : f.content_free;
  BackendHandle h = MakeBackend(f);
  const CalibrationWeights w =
      EstimateCalibration(task.tmpl, task.instances.front(), *h.backend, inputs);
  const std::string text = JsonText(CalibrationWeightsToJson(w));
  WriteTextFile(out / "calibration.json", text);
  ctx.out << text;
  return 0;
}

int RunSfcLabCommand(const LabFlags& f, const Context& ctx) {
  const fs::path out(f.out);
  Json snapshot;
  snapshot["command"] = "sfc-lab";
  snapshot["version"] = SFC_VERSION;
  snapshot["spec"] = f.spec;
  snapshot["paraphrase_mass"] = f.paraphrase_mass;
  snapshot["sweep_masses"] = f.sweep_masses;
  snapshot["out"] = f.out;
  WriteSnapshot(out, snapshot);

  SfcLabSpec spec;
  if (f.spec.empty()) {
    spec = DefaultSfcLabSpec(f.paraphrase_mass);
  } else {
    std::ifstream in(f.spec);
    if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + f.spec);
    try {
      spec = SfcLabSpecFromJson(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kDataFormat, f.spec + " is not JSON: " + e.what());
    }
  }
  const SfcLabResult result = RunSfcLab(spec);
  WriteTextFile(out / "sfc_lab.json", JsonText(SfcLabResultToJson(spec, result)));
  WriteTextFile(out / "sfc_lab_toy_lm.json", ToyLmSpecToJson(result.lm).dump(1) + "\n");
  ctx.out << "lm accuracy: " << FormatAccuracy(result.report.accuracy.at(Strategy::kLm))
          << "\npmi_dc accuracy: "
          << FormatAccuracy(result.report.accuracy.at(Strategy::kPmiDc)) << "\n";

  if (f.spec.empty() && !f.sweep_masses.empty()) {
    const auto points = SweepParaphraseMass(f.sweep_masses);
    std::string tsv = "paraphrase_mass\tlm\tpmi_dc\n";
    Json j = Json::array();
    for (const SfcLabSweepPoint& p : points) {
      std::ostringstream line;
      line << p.paraphrase_mass << '\t' << FormatAccuracy(p.lm_accuracy) << '\t'
           << FormatAccuracy(p.pmi_dc_accuracy) << '\n';
      tsv += line.str();
      j.push_back({{"paraphrase_mass", p.paraphrase_mass},
                   {"lm", p.lm_accuracy},
                   {"pmi_dc", p.pmi_dc_accuracy}});
    }
    WriteTextFile(out / "sfc_lab_sweep.tsv", tsv);
    WriteTextFile(out / "sfc_lab_sweep.json", JsonText(j));
    ctx.out << tsv;
  }
  return 0;
}

int RunTemplatesList(const Context& ctx) {
  for (const std::string& id : BundledTemplateIds()) {
    const Template* t = FindBundledTemplate(id);
    ctx.out << t->id << '\t' << t->conditional_pattern << '\t' << t->domain_premise << '\n';
  }
  return 0;
}

int RunTemplatesExport(const std::string& id, const std::string& out_dir,
                       const Context& ctx) {
  const fs::path out(out_dir);
  std::vector<Template> selected;
  if (id.empty()) {
    for (const std::string& tid : BundledTemplateIds()) selected.push_back(*FindBundledTemplate(tid));
  } else {
    selected.push_back(ResolveTemplate(id));
  }
  for (const Template& t : selected) {
    WriteTextFile(out / (t.id + ".json"), JsonText(TemplateToJson(t)));
    ctx.out << (out / (t.id + ".json")).string() << '\n';
  }
  return 0;
}

std::shared_ptr<ResponseCache> OpenCacheReadOnly(const std::string& flag) {
  const auto dir = ResponseCache::ResolveDirectory(
      flag.empty() ? std::nullopt : std::optional<fs::path>(flag));
  if (!dir) throw Error(ErrorCode::kConfig, "no cache directory given");
  return std::make_shared<ResponseCache>(*dir / kCacheFileName, CacheMode::kReadOnly);
}

int RunCacheInspect(const std::string& cache_dir, const Context& ctx) {
  auto cache = OpenCacheReadOnly(cache_dir);
  std::map<std::string, std::size_t> per_model;
  cache->ForEach([&](const CacheRecord& r) { ++per_model[r.score.model_id]; });
  const CacheStats stats = cache->stats();
  ctx.out << "path\t" << cache->path().string() << "\nrecords\t" << stats.records
          << "\ncorrupted\t" << stats.corrupted << "\n";
  for (const auto& [model, n] : per_model) ctx.out << "model\t" << model << '\t' << n << '\n';
  return 0;
}

int RunCacheExport(const std::string& cache_dir, const std::string& out_file,
                   const Context& ctx) {
  auto cache = OpenCacheReadOnly(cache_dir);
  std::string lines;
  std::size_t n = 0;
  cache->ForEach([&](const CacheRecord& r) {
    Json j;
    j["key"] = r.key;
    j["model_id"] = r.score.model_id;
    j["context"] = r.score.context_echo;
    j["continuation"] = r.continuation;
    j["tokens"] = r.score.tokens;
    j["logprobs"] = r.score.logprobs.values();
    lines += j.dump() + "\n";
    ++n;
  });
  WriteTextFile(out_file, lines);
  ctx.out << "exported " << n << " records to " << out_file << '\n';
  return 0;
}

int RunCacheWarm(const RunFlags& f, const Context& ctx) {
  if (f.offline) throw Error(ErrorCode::kConfig, "cache warm cannot run --offline");
  BackendHandle h = MakeBackend(f);
  if (!h.cache) throw Error(ErrorCode::kConfig, "cache warm needs a cache directory");
  const RunConfig config = MakeRunConfig(f);
  std::size_t errored = 0;
  for (const std::string& d : f.datasets) {
    const EvalReport r = Evaluate(MakeTask(d, f), *h.backend, config);
    errored += r.n_errored;
  }
  ctx.out << "backend calls\t" << h.cached->backend_calls() << "\nrecords\t"
          << h.cache->stats().records << "\nerrored instances\t" << errored << '\n';
  return 0;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Context ctx{out, err};
  CLI::App app{"Multiple-choice scoring with domain-conditional PMI", "sfc"};
  app.set_version_flag("--version", SFC_VERSION);
  app.require_subcommand(1);

  RunFlags eval_flags, sweep_flags, flip_flags, calib_flags, warm_flags;
  LabFlags lab_flags;
  std::string export_template, export_out, cache_dir, cache_out;

  auto* eval = app.add_subcommand("eval", "Evaluate datasets under scoring strategies");
  AddRunFlags(eval, eval_flags);
  auto* sweep = app.add_subcommand("sweep", "Accuracy mean and std over prompts or seeds");
  AddRunFlags(sweep, sweep_flags);
  sweep->add_option("--prompt-set", sweep_flags.prompt_set,
                    "Comma list of templates, or a JSON file with an array of them");
  sweep->add_option("--seeds", sweep_flags.seeds, "Comma list of few-shot seeds")
      ->delimiter(',');
  auto* flip = app.add_subcommand("flip-eval", "Paired original vs COPA-flipped evaluation");
  AddRunFlags(flip, flip_flags);
  auto* lab = app.add_subcommand("sfc-lab", "Synthetic surface form competition demo");
  lab->add_option("--spec", lab_flags.spec, "Lab spec JSON (default: built-in)");
  lab->add_option("--paraphrase-mass", lab_flags.paraphrase_mass,
                  "Competing paraphrase mass of the built-in spec")
      ->check(CLI::Range(0.0, 0.5))
      ->capture_default_str();
  lab->add_option("--sweep-masses", lab_flags.sweep_masses,
                  "Paraphrase masses to sweep with the built-in spec")
      ->delimiter(',');
  lab->add_option("--out", lab_flags.out, "Output directory")->required();
  auto* calibrate = app.add_subcommand("calibrate", "Estimate content-free cc weights");
  AddRunFlags(calibrate, calib_flags);

  auto* templates = app.add_subcommand("templates", "List or export bundled templates");
  templates->require_subcommand(1);
  auto* tlist = templates->add_subcommand("list", "Print bundled templates");
  auto* texport = templates->add_subcommand("export", "Write templates as JSON files");
  texport->add_option("--template", export_template, "Template id (default: all)");
  texport->add_option("--out", export_out, "Output directory")->required();

  auto* cache = app.add_subcommand("cache", "Inspect, warm or export the score cache");
  cache->require_subcommand(1);
  auto* cinspect = cache->add_subcommand("inspect", "Print cache statistics");
  cinspect->add_option("--cache-dir", cache_dir, "Cache directory");
  auto* cexport = cache->add_subcommand("export", "Dump cache records as JSONL");
  cexport->add_option("--cache-dir", cache_dir, "Cache directory");
  cexport->add_option("--out", cache_out, "Output JSONL file")->required();
  auto* cwarm = cache->add_subcommand("warm", "Score datasets into the cache");
  AddRunFlags(cwarm, warm_flags, /*needs_out=*/false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*eval) return RunEval(eval_flags, ctx);
    if (*sweep) return RunSweep(sweep_flags, ctx);
    if (*flip) return RunFlipEval(flip_flags, ctx);
    if (*lab) return RunSfcLabCommand(lab_flags, ctx);
    if (*calibrate) return RunCalibrate(calib_flags, ctx);
    if (*tlist) return RunTemplatesList(ctx);
    if (*texport) return RunTemplatesExport(export_template, export_out, ctx);
    if (*cinspect) return RunCacheInspect(cache_dir, ctx);
    if (*cexport) return RunCacheExport(cache_dir, cache_out, ctx);
    if (*cwarm) return RunCacheWarm(warm_flags, ctx);
  } catch (const Error& e) {
    err << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace sfc::cli
