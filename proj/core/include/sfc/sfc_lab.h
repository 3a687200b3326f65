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

// Synthetic surface-form competition lab.
//
// Each concept is a question whose correct answer can be written in several
// surface forms. Only one form (the listed form) appears among the options;
// the unlisted paraphrases take conditional mass away from it. A toy LM is
// built with exactly the configured conditionals P(form | question) and
// domain priors P(form | domain premise), so LM and PMI_DC accuracies follow
// from the table by construction.

#ifndef SFC_SFC_LAB_H_
#define SFC_SFC_LAB_H_

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sfc/harness.h"
#include "sfc/instance.h"
#include "sfc/template.h"
#include "sfc/toy_lm.h"

namespace sfc {

struct SfcLabForm {
  std::string text;
  // P(form | question).
  double conditional = 0.0;
  // P(form | domain premise).
  double prior = 0.0;
};

struct SfcLabConcept {
  std::string id;
  std::string question;
  SfcLabForm listed;
  std::vector<SfcLabForm> paraphrases;
  std::vector<SfcLabForm> distractors;
  // Position of the listed form among the options.
  int gold_index = 0;
};

struct SfcLabSpec {
  std::string model_id = "sfc-lab";
  std::string domain_premise = "the answer is:";
  std::vector<SfcLabConcept> concepts;
};

// Throws kInvalidArgument when a probability is outside [0, 1], a concept's
// conditionals sum above 1, the priors sum above 1 over all forms, a gold
// index is out of range, or a form text repeats.
void ValidateSfcLabSpec(const SfcLabSpec& spec);

// True when some unlisted paraphrase is strictly more probable than the
// listed form under the question.
bool CompetitionHolds(const SfcLabConcept& entry);

// Four concepts. The listed form gets 0.6 - paraphrase_mass of conditional
// mass and the paraphrases share paraphrase_mass; each concept has one
// distractor with conditional 0.08, 0.18, 0.28 or 0.38 and a prior of half
// that. The distractor masses avoid exact ties with the listed form at the
// default and swept masses. paraphrase_mass must be in [0, 0.5].
SfcLabSpec DefaultSfcLabSpec(double paraphrase_mass = 0.35);

// Template "{question} <domain premise>" with domain premise as configured.
Template SfcLabTemplate(const SfcLabSpec& spec);
std::vector<Instance> SfcLabInstances(const SfcLabSpec& spec);
// Realizes the spec's conditionals and priors; leftover mass goes to the end
// marker.
ToyLmSpec BuildSfcLabLm(const SfcLabSpec& spec);

struct SfcLabResult {
  ToyLmSpec lm;
  EvalReport report;
  std::vector<bool> competition;
};

// Evaluates LM and PMI_DC on the spec's instances with a toy backend.
SfcLabResult RunSfcLab(const SfcLabSpec& spec);

struct SfcLabSweepPoint {
  double paraphrase_mass = 0.0;
  double lm_accuracy = 0.0;
  double pmi_dc_accuracy = 0.0;
};

std::vector<SfcLabSweepPoint> SweepParaphraseMass(std::span<const double> masses);

nlohmann::ordered_json SfcLabSpecToJson(const SfcLabSpec& spec);
SfcLabSpec SfcLabSpecFromJson(const nlohmann::json& j);
nlohmann::ordered_json SfcLabResultToJson(const SfcLabSpec& spec,
                                          const SfcLabResult& result);

}  // namespace sfc

#endif  // SFC_SFC_LAB_H_
