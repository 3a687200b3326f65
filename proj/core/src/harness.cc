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

#include "sfc/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <exception>
#include <set>
#include <thread>

#include "sfc/copa_flip.h"
#include "sfc/error.h"
#include "text.h"

namespace sfc {
namespace {

std::string NowIso8601() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool Contains(const std::vector<Strategy>& v, Strategy s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string LabelOf(const std::string& option) { return text::Trim(option); }

class InstanceScorer {
 public:
  InstanceScorer(const EvalTask& task, Backend& backend, const RunConfig& config,
                 const FewShotSampler* sampler, const CalibrationWeights* weights)
      : task_(task),
        backend_(backend),
        config_(config),
        sampler_(sampler),
        weights_(weights) {}

  InstanceRecord Score(const Instance& inst) const {
    InstanceRecord rec;
    rec.instance_id = inst.instance_id;
    rec.gold = inst.gold;

    std::vector<Instance> exemplars;
    if (sampler_ != nullptr) exemplars = sampler_->Sample(inst.instance_id);
    RenderOptions render_options;
    render_options.exemplars = exemplars;
    render_options.separator = config_.few_shot.separator;
    const std::vector<RenderedOption> rendered =
        Render(inst, task_.tmpl, render_options);

    std::vector<OptionEvidence> evidence;
    evidence.reserve(rendered.size());
    for (const RenderedOption& r : rendered) {
      const std::string continuation = r.continuation();
      BackendScore cond =
          backend_.ScoreContinuation(r.conditional_context, continuation);
      BackendScore dom = backend_.ScoreContinuation(r.domain_context, continuation);
      evidence.push_back(
          {std::move(cond.logprobs), std::move(dom.logprobs), r.option_index});
    }

    for (Strategy s : config_.strategies) {
      if (s == Strategy::kCc) continue;
      std::vector<StrategyScore> scores;
      for (const OptionEvidence& e : evidence) scores.push_back(sfc::Score(s, e));
      Record(rec, s, scores);
    }
    if (Contains(config_.strategies, Strategy::kCc)) {
      std::vector<double> lm;
      for (const OptionEvidence& e : evidence) lm.push_back(ScoreLm(e).value);
      const std::vector<double> probs = NormalizeLogScores(lm);
      std::map<std::string, double> raw;
      for (std::size_t i = 0; i < probs.size(); ++i) {
        raw[LabelOf(inst.options[i])] = probs[i];
      }
      const auto calibrated = ScoreCc(raw, *weights_);
      std::vector<StrategyScore> scores;
      for (const std::string& option : inst.options) {
        scores.push_back(calibrated.at(LabelOf(option)));
      }
      Record(rec, Strategy::kCc, scores);
    }
    return rec;
  }

 private:
  static void Record(InstanceRecord& rec, Strategy s,
                     const std::vector<StrategyScore>& scores) {
    std::vector<double> values;
    for (const StrategyScore& sc : scores) values.push_back(sc.value);
    rec.scores[s] = std::move(values);
    rec.selected[s] = static_cast<int>(Select(scores));
  }

  const EvalTask& task_;
  Backend& backend_;
  const RunConfig& config_;
  const FewShotSampler* sampler_;
  const CalibrationWeights* weights_;
};

void Aggregate(EvalReport& report) {
  report.n_instances = report.records.size();
  for (Strategy s : report.strategies) report.correct_counts[s] = 0;
  for (const InstanceRecord& rec : report.records) {
    if (rec.errored()) {
      ++report.n_errored;
      continue;
    }
    ++report.n_scored;
    if (!rec.gold.has_value()) continue;
    ++report.n_labeled;
    for (Strategy s : report.strategies) {
      if (rec.correct(s)) ++report.correct_counts[s];
    }
  }
  for (Strategy s : report.strategies) {
    report.accuracy[s] =
        report.n_labeled == 0
            ? 0.0
            : static_cast<double>(report.correct_counts[s]) /
                  static_cast<double>(report.n_labeled);
  }
}

}  // namespace

void RunConfig::Validate() const {
  if (strategies.empty()) {
    throw Error(ErrorCode::kConfig, "at least one strategy is required");
  }
  std::set<Strategy> seen;
  for (Strategy s : strategies) {
    if (!seen.insert(s).second) {
      throw Error(ErrorCode::kConfig,
                  "strategy '" + std::string(StrategyName(s)) + "' listed twice");
    }
  }
  if (parallelism < 1) throw Error(ErrorCode::kConfig, "parallelism must be >= 1");
  if (!(max_error_fraction >= 0.0 && max_error_fraction <= 1.0)) {
    throw Error(ErrorCode::kConfig, "max error fraction must be in [0, 1]");
  }
  if (few_shot.k < 0) throw Error(ErrorCode::kConfig, "k-shot must be >= 0");
  if (calibration) calibration->Validate();
}

bool InstanceRecord::correct(Strategy s) const {
  if (errored() || !gold.has_value()) return false;
  auto it = selected.find(s);
  return it != selected.end() && it->second == *gold;
}

double EvalReport::errored_fraction() const {
  return n_instances == 0 ? 0.0
                          : static_cast<double>(n_errored) /
                                static_cast<double>(n_instances);
}

void ValidateTask(const EvalTask& task, const RunConfig& config) {
  config.Validate();
  if (Contains(config.strategies, Strategy::kCc)) {
    if (!task.tmpl.closed_label_set.has_value()) {
      throw Error(ErrorCode::kConfig,
                  "strategy cc needs a closed label set, and template '" +
                      task.tmpl.id + "' has none");
    }
    if (config.few_shot.k > 0) {
      throw Error(ErrorCode::kConfig, "strategy cc is zero-shot only");
    }
    std::set<std::string> labels;
    for (const std::string& l : *task.tmpl.closed_label_set) labels.insert(LabelOf(l));
    for (const Instance& inst : task.instances) {
      std::set<std::string> options;
      for (const std::string& o : inst.options) options.insert(LabelOf(o));
      if (options != labels || options.size() != inst.options.size()) {
        throw Error(ErrorCode::kConfig,
                    "instance '" + inst.instance_id +
                        "' options do not match the closed label set of "
                        "template '" + task.tmpl.id + "'");
      }
    }
    if (config.calibration) {
      for (const std::string& l : labels) {
        if (!config.calibration->per_label_scale.contains(l)) {
          throw Error(ErrorCode::kConfig,
                      "calibration weights lack label '" + l + "'");
        }
      }
    }
  }
  if (Contains(config.strategies, Strategy::kPremiseLm)) {
    for (const Instance& inst : task.instances) {
      if (!inst.flipped) {
        throw Error(ErrorCode::kConfig,
                    "strategy premise_lm needs flipped instances; '" +
                        inst.instance_id + "' is not flipped");
      }
    }
  }
}

std::map<std::string, double> LabelDistribution(const Instance& instance,
                                                const Template& tmpl,
                                                Backend& backend) {
  const std::vector<RenderedOption> rendered = Render(instance, tmpl);
  std::vector<double> lm;
  for (const RenderedOption& r : rendered) {
    lm.push_back(backend.ScoreContinuation(r.conditional_context, r.continuation())
                     .logprobs.Sum());
  }
  const std::vector<double> probs = NormalizeLogScores(lm);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out[LabelOf(instance.options[i])] = probs[i];
  }
  return out;
}

CalibrationWeights EstimateCalibration(
    const Template& tmpl, const Instance& label_source, Backend& backend,
    std::span<const std::string> content_free_inputs) {
  if (content_free_inputs.empty()) {
    throw Error(ErrorCode::kConfig, "no content-free inputs given");
  }
  std::vector<std::map<std::string, double>> distributions;
  for (const std::string& input : content_free_inputs) {
    Instance cf = label_source;
    for (PremiseField& field : cf.premise_parts) field.text = input;
    distributions.push_back(LabelDistribution(cf, tmpl, backend));
  }
  return EstimateContentFreeWeights(distributions);
}

EvalReport Evaluate(const EvalTask& task, Backend& backend,
                    const RunConfig& config) {
  ValidateTask(task, config);

  EvalReport report;
  report.metadata.model_id = backend.model_id();
  report.metadata.dataset_id = task.dataset_id;
  report.metadata.split = task.split;
  report.metadata.template_id = task.tmpl.id;
  report.metadata.template_version = task.tmpl.version;
  report.metadata.seed = config.few_shot.seed;
  report.metadata.k_shot = config.few_shot.k;
  report.metadata.started_at = NowIso8601();
  report.strategies = config.strategies;

  std::optional<FewShotSampler> sampler;
  if (config.few_shot.k > 0) {
    sampler.emplace(task.few_shot_pool.empty() ? task.instances : task.few_shot_pool,
                    config.few_shot);
  }
  if (Contains(config.strategies, Strategy::kCc)) {
    if (config.calibration) {
      report.calibration = config.calibration;
    } else if (!task.instances.empty()) {
      report.calibration = EstimateCalibration(task.tmpl, task.instances.front(),
                                               backend, config.content_free_inputs);
    }
  }

  const InstanceScorer scorer(task, backend, config, sampler ? &*sampler : nullptr,
                              report.calibration ? &*report.calibration : nullptr);
  const std::size_t n = task.instances.size();
  std::vector<InstanceRecord> records(n);
  std::vector<std::exception_ptr> backend_failures(n);
  std::vector<std::exception_ptr> fatal(n);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const Instance& inst = task.instances[i];
      try {
        records[i] = scorer.Score(inst);
      } catch (const Error& e) {
        if (!e.is_backend_failure()) {
          fatal[i] = std::current_exception();
          continue;
        }
        backend_failures[i] = std::current_exception();
        records[i] = InstanceRecord{};
        records[i].instance_id = inst.instance_id;
        records[i].gold = inst.gold;
        records[i].error =
            std::string(ErrorCodeName(e.code())) + ": " + e.what();
      } catch (...) {
        fatal[i] = std::current_exception();
      }
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(config.parallelism), n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (const std::exception_ptr& e : fatal) {
    if (e) std::rethrow_exception(e);
  }
  if (n > 0 && std::all_of(backend_failures.begin(), backend_failures.end(),
                           [](const std::exception_ptr& e) { return e != nullptr; })) {
    std::rethrow_exception(backend_failures.front());
  }

  std::sort(records.begin(), records.end(),
            [](const InstanceRecord& a, const InstanceRecord& b) {
              return a.instance_id < b.instance_id;
            });
  report.records = std::move(records);
  Aggregate(report);
  report.metadata.finished_at = NowIso8601();
  return report;
}

void CheckErrorThreshold(const EvalReport& report, double max_fraction) {
  if (report.errored_fraction() > max_fraction) {
    std::string first;
    for (const InstanceRecord& rec : report.records) {
      if (rec.errored()) {
        first = rec.instance_id + ": " + *rec.error;
        break;
      }
    }
    throw Error(ErrorCode::kThresholdExceeded,
                std::to_string(report.n_errored) + " of " +
                    std::to_string(report.n_instances) +
                    " instances errored, above the allowed fraction " +
                    std::to_string(max_fraction) + "; first: " + first);
  }
}

FlippedReport EvaluateFlipped(const EvalTask& task, Backend& backend,
                              const RunConfig& config) {
  if (Contains(config.strategies, Strategy::kCc)) {
    throw Error(ErrorCode::kConfig, "strategy cc does not apply to flipped runs");
  }
  const std::vector<Strategy> identity = {Strategy::kLm, Strategy::kAvg,
                                          Strategy::kPmiDc};

  RunConfig original_config = config;
  original_config.strategies.clear();
  for (Strategy s : config.strategies) {
    if (s != Strategy::kPremiseLm) original_config.strategies.push_back(s);
  }
  for (Strategy s : identity) {
    if (!Contains(original_config.strategies, s)) {
      original_config.strategies.push_back(s);
    }
  }
  RunConfig flipped_config = original_config;
  flipped_config.strategies.push_back(Strategy::kPremiseLm);

  EvalTask flipped_task = task;
  flipped_task.instances = CopaFlipAll(task.instances);
  flipped_task.few_shot_pool = CopaFlipAll(task.few_shot_pool);

  FlippedReport out;
  out.original = Evaluate(task, backend, original_config);
  out.flipped = Evaluate(flipped_task, backend, flipped_config);
  out.identity_strategies = identity;

  std::size_t scored = 0;
  std::size_t identical = 0;
  for (const InstanceRecord& rec : out.flipped.records) {
    if (rec.errored()) continue;
    ++scored;
    const int first = rec.selected.at(identity.front());
    bool same = true;
    for (Strategy s : identity) same = same && rec.selected.at(s) == first;
    if (same) ++identical;
  }
  out.selection_identity =
      scored == 0 ? 0.0 : static_cast<double>(identical) / static_cast<double>(scored);

  std::map<std::string, const InstanceRecord*> by_id;
  for (const InstanceRecord& rec : out.original.records) by_id[rec.instance_id] = &rec;
  for (Strategy s : original_config.strategies) {
    std::size_t both = 0;
    std::size_t agree = 0;
    for (const InstanceRecord& rec : out.flipped.records) {
      auto it = by_id.find(rec.instance_id);
      if (rec.errored() || it == by_id.end() || it->second->errored()) continue;
      ++both;
      if (it->second->selected.at(s) == rec.selected.at(s)) ++agree;
    }
    out.original_flipped_agreement[s] =
        both == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(both);
  }
  return out;
}

double Mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double SampleStdDev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

SweepReport SummarizeSweep(std::vector<std::string> labels,
                           std::vector<EvalReport> runs) {
  if (labels.size() != runs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sweep labels and runs differ in size");
  }
  SweepReport out;
  out.labels = std::move(labels);
  out.runs = std::move(runs);
  if (out.runs.empty()) return out;
  for (const EvalReport& run : out.runs) {
    if (run.strategies != out.runs.front().strategies) {
      throw Error(ErrorCode::kInvalidArgument, "sweep runs use different strategies");
    }
  }
  for (Strategy s : out.runs.front().strategies) {
    SweepStat stat;
    for (const EvalReport& run : out.runs) stat.accuracies.push_back(run.accuracy.at(s));
    stat.mean = Mean(stat.accuracies);
    stat.std_dev = SampleStdDev(stat.accuracies);
    out.stats[s] = std::move(stat);
  }
  return out;
}

SweepReport SweepTemplates(const EvalTask& task,
                           std::span<const Template> templates,
                           Backend& backend, const RunConfig& config) {
  if (templates.size() < 2) {
    throw Error(ErrorCode::kConfig, "a prompt sweep needs at least two templates");
  }
  std::vector<std::string> labels;
  std::vector<EvalReport> runs;
  for (const Template& t : templates) {
    EvalTask variant = task;
    variant.tmpl = t;
    runs.push_back(Evaluate(variant, backend, config));
    labels.push_back(t.id);
  }
  return SummarizeSweep(std::move(labels), std::move(runs));
}

SweepReport SweepSeeds(const EvalTask& task, std::span<const std::uint64_t> seeds,
                       Backend& backend, const RunConfig& config) {
  if (seeds.size() < 2) {
    throw Error(ErrorCode::kConfig, "a seed sweep needs at least two seeds");
  }
  std::vector<std::string> labels;
  std::vector<EvalReport> runs;
  for (std::uint64_t seed : seeds) {
    RunConfig variant = config;
    variant.few_shot.seed = seed;
    runs.push_back(Evaluate(task, backend, variant));
    labels.push_back("seed=" + std::to_string(seed));
  }
  return SummarizeSweep(std::move(labels), std::move(runs));
}

}  // namespace sfc
