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

// Dataset evaluation under several scoring strategies.
//
// Every option of every instance costs exactly two backend calls: the
// continuation under the conditional context and under the domain context.
// All per-option strategies are computed from those two results. Instances
// are scored by a bounded worker pool; records are sorted by instance id, so
// reports do not depend on scheduling.

#ifndef SFC_HARNESS_H_
#define SFC_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfc/backend.h"
#include "sfc/fewshot.h"
#include "sfc/instance.h"
#include "sfc/scoring.h"
#include "sfc/template.h"

namespace sfc {

inline constexpr double kDefaultMaxErrorFraction = 0.01;

struct RunConfig {
  std::vector<Strategy> strategies;
  FewShotConfig few_shot;
  int parallelism = 1;
  // Fraction of instances allowed to fail on backend errors.
  double max_error_fraction = kDefaultMaxErrorFraction;
  // Fixed CC weights; estimated from content_free_inputs when absent.
  std::optional<CalibrationWeights> calibration;
  std::vector<std::string> content_free_inputs = DefaultContentFreeInputs();

  // Throws kConfig on an empty strategy list, duplicate strategies,
  // parallelism < 1 or a threshold outside [0, 1].
  void Validate() const;
};

struct EvalTask {
  std::string dataset_id;
  std::string split;
  std::vector<Instance> instances;
  Template tmpl;
  // Exemplar source for k > 0; the evaluated instances when empty.
  std::vector<Instance> few_shot_pool;
};

struct InstanceRecord {
  std::string instance_id;
  std::optional<int> gold;
  // Per strategy, one score per option.
  std::map<Strategy, std::vector<double>> scores;
  std::map<Strategy, int> selected;
  // Set when a backend failure excluded the instance.
  std::optional<std::string> error;

  bool errored() const { return error.has_value(); }
  bool correct(Strategy s) const;
};

struct RunMetadata {
  std::string model_id;
  std::string dataset_id;
  std::string split;
  std::string template_id;
  std::string template_version;
  std::uint64_t seed = 0;
  int k_shot = 0;
  std::string started_at;
  std::string finished_at;
};

struct EvalReport {
  static constexpr int kSchemaVersion = 1;

  RunMetadata metadata;
  std::vector<Strategy> strategies;
  // Fractions in [0, 1] over scored instances that carry a gold label.
  std::map<Strategy, double> accuracy;
  std::map<Strategy, std::size_t> correct_counts;
  std::size_t n_instances = 0;
  std::size_t n_scored = 0;
  std::size_t n_labeled = 0;
  std::size_t n_errored = 0;
  std::vector<InstanceRecord> records;
  // CC weights used, when CC was requested.
  std::optional<CalibrationWeights> calibration;

  double errored_fraction() const;
};

// Throws kConfig before any scoring when the configuration cannot apply to
// the task: CC without a matching closed label set or with k > 0, or
// PREMISE_LM on unflipped instances.
void ValidateTask(const EvalTask& task, const RunConfig& config);

// Renders, scores and aggregates. Backend failures mark single instances as
// errored; if every instance fails the first failure is rethrown.
EvalReport Evaluate(const EvalTask& task, Backend& backend,
                    const RunConfig& config);

// Throws kThresholdExceeded when the errored fraction exceeds `max_fraction`.
void CheckErrorThreshold(const EvalReport& report, double max_fraction);

// Label probabilities for one instance of a closed-label task: the softmax
// of the LM scores over the options, keyed by option text.
std::map<std::string, double> LabelDistribution(const Instance& instance,
                                                const Template& tmpl,
                                                Backend& backend);

// Content-free CC weights: every premise field of `label_source` is replaced
// by each input in turn and the resulting label distributions are averaged.
CalibrationWeights EstimateCalibration(
    const Template& tmpl, const Instance& label_source, Backend& backend,
    std::span<const std::string> content_free_inputs);

struct FlippedReport {
  EvalReport original;
  EvalReport flipped;
  // Strategies among LM, AVG and PMI_DC present in the run.
  std::vector<Strategy> identity_strategies;
  // Fraction of scored flipped instances on which all identity strategies
  // select the same option.
  double selection_identity = 0.0;
  // Per strategy, fraction of instances scored in both runs whose selection
  // is the same before and after flipping.
  std::map<Strategy, double> original_flipped_agreement;
};

// Evaluates the task and its COPA flip. Both runs always include LM, AVG and
// PMI_DC; PREMISE_LM is only applied to the flipped run. Throws kNotFlippable when some instance lacks a relation and
// kConfig when CC is requested.
FlippedReport EvaluateFlipped(const EvalTask& task, Backend& backend,
                              const RunConfig& config);

double Mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double SampleStdDev(std::span<const double> values);

struct SweepStat {
  std::vector<double> accuracies;
  double mean = 0.0;
  double std_dev = 0.0;
};

struct SweepReport {
  // One label per run: template id or "seed=<n>".
  std::vector<std::string> labels;
  std::vector<EvalReport> runs;
  std::map<Strategy, SweepStat> stats;
};

SweepReport SummarizeSweep(std::vector<std::string> labels,
                           std::vector<EvalReport> runs);

// Evaluates `task` once per template. Throws kConfig with fewer than two.
SweepReport SweepTemplates(const EvalTask& task,
                           std::span<const Template> templates,
                           Backend& backend, const RunConfig& config);

// Evaluates `task` once per few-shot seed. Throws kConfig with fewer than two.
SweepReport SweepSeeds(const EvalTask& task,
                       std::span<const std::uint64_t> seeds, Backend& backend,
                       const RunConfig& config);

}  // namespace sfc

#endif  // SFC_HARNESS_H_
