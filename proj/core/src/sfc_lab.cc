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

#include "sfc/sfc_lab.h"

#include <set>

#include "sfc/error.h"
#include "text.h"

namespace sfc {
namespace {

constexpr double kMassTolerance = 1e-12;

void CheckProbability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, what + " is outside [0, 1]");
  }
}

std::vector<const SfcLabForm*> AllForms(const SfcLabConcept& c) {
  std::vector<const SfcLabForm*> out = {&c.listed};
  for (const SfcLabForm& f : c.paraphrases) out.push_back(&f);
  for (const SfcLabForm& f : c.distractors) out.push_back(&f);
  return out;
}

nlohmann::ordered_json FormToJson(const SfcLabForm& f) {
  return {{"text", f.text}, {"conditional", f.conditional}, {"prior", f.prior}};
}

SfcLabForm FormFromJson(const nlohmann::json& j) {
  return {j.at("text").get<std::string>(), j.at("conditional").get<double>(),
          j.at("prior").get<double>()};
}

std::vector<SfcLabForm> FormsFromJson(const nlohmann::json& j, const char* key) {
  std::vector<SfcLabForm> out;
  if (!j.contains(key)) return out;
  for (const auto& f : j.at(key)) out.push_back(FormFromJson(f));
  return out;
}

}  // namespace

void ValidateSfcLabSpec(const SfcLabSpec& spec) {
  if (spec.concepts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sfc-lab spec has no concepts");
  }
  std::set<std::string> texts;
  double prior_total = 0.0;
  for (const SfcLabConcept& c : spec.concepts) {
    if (c.distractors.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "concept '" + c.id + "' needs at least one distractor");
    }
    if (c.gold_index < 0 || c.gold_index > static_cast<int>(c.distractors.size())) {
      throw Error(ErrorCode::kInvalidArgument,
                  "concept '" + c.id + "' gold index is out of range");
    }
    double conditional_total = 0.0;
    for (const SfcLabForm* f : AllForms(c)) {
      CheckProbability(f->conditional, "conditional of '" + f->text + "'");
      CheckProbability(f->prior, "prior of '" + f->text + "'");
      if (text::Trim(f->text).empty() || !texts.insert(f->text).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "form '" + f->text + "' is empty or repeated");
      }
      conditional_total += f->conditional;
      prior_total += f->prior;
    }
    if (conditional_total > 1.0 + kMassTolerance) {
      throw Error(ErrorCode::kInvalidArgument,
                  "conditionals of concept '" + c.id + "' sum above 1");
    }
  }
  if (prior_total > 1.0 + kMassTolerance) {
    throw Error(ErrorCode::kInvalidArgument, "domain priors sum above 1");
  }
}

bool CompetitionHolds(const SfcLabConcept& entry) {
  for (const SfcLabForm& f : entry.paraphrases) {
    if (f.conditional > entry.listed.conditional) return true;
  }
  return false;
}

SfcLabSpec DefaultSfcLabSpec(double paraphrase_mass) {
  if (!(paraphrase_mass >= 0.0 && paraphrase_mass <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "paraphrase mass must be in [0, 0.5]");
  }
  struct Seed {
    const char* question;
    const char* listed;
    const char* paraphrase_a;
    const char* paraphrase_b;
    const char* distractor;
    double distractor_mass;
  };
  const Seed seeds[] = {
      {"What is the capital of France?", "Paris", "the city of Paris",
       "Paris, France", "Lyon", 0.08},
      {"Which animal is known as man's best friend?", "dog", "the dog",
       "a dog", "cat", 0.18},
      {"What do bees make?", "honey", "sweet honey", "honey from flowers",
       "wax", 0.28},
      {"What is frozen water called?", "ice", "frozen water", "solid water",
       "snow", 0.38},
  };
  SfcLabSpec spec;
  int index = 0;
  for (const Seed& s : seeds) {
    SfcLabConcept c;
    c.id = "concept-" + std::to_string(index + 1);
    c.question = s.question;
    c.listed = {s.listed, 0.6 - paraphrase_mass, 0.02};
    c.paraphrases = {{s.paraphrase_a, 0.8 * paraphrase_mass, 0.05},
                     {s.paraphrase_b, 0.2 * paraphrase_mass, 0.05}};
    c.distractors = {{s.distractor, s.distractor_mass, s.distractor_mass / 2.0}};
    c.gold_index = index % 2;
    spec.concepts.push_back(std::move(c));
    ++index;
  }
  return spec;
}

Template SfcLabTemplate(const SfcLabSpec& spec) {
  Template t;
  t.id = "sfc-lab";
  t.dataset_id = "sfc-lab";
  t.conditional_pattern = "{question} " + spec.domain_premise;
  t.domain_premise = spec.domain_premise;
  return t;
}

std::vector<Instance> SfcLabInstances(const SfcLabSpec& spec) {
  std::vector<Instance> out;
  for (const SfcLabConcept& c : spec.concepts) {
    Instance inst;
    inst.premise_parts = {{"question", c.question}};
    for (const SfcLabForm& d : c.distractors) inst.options.push_back(d.text);
    inst.options.insert(inst.options.begin() + c.gold_index, c.listed.text);
    inst.gold = c.gold_index;
    inst.dataset_id = "sfc-lab";
    inst.split = "synthetic";
    inst.instance_id = c.id;
    out.push_back(std::move(inst));
  }
  return out;
}

ToyLmSpec BuildSfcLabLm(const SfcLabSpec& spec) {
  ValidateSfcLabSpec(spec);
  const Template tmpl = SfcLabTemplate(spec);
  const std::string domain = spec.domain_premise;
  const std::string joined_domain = tmpl.joiner + domain;
  const double root_share = 1.0 / static_cast<double>(spec.concepts.size() + 1);

  ToyLmBuilder builder(spec.model_id);
  builder.Set({}, domain, root_share);
  for (const SfcLabConcept& c : spec.concepts) {
    const std::string question = text::Trim(c.question);
    builder.Set({}, question, root_share);
    builder.Set({question}, joined_domain, 1.0);
    for (const SfcLabForm* f : AllForms(c)) {
      const std::string token = tmpl.joiner + RenderHypothesis(f->text, tmpl);
      if (f->conditional > 0.0) builder.Set({question, joined_domain}, token, f->conditional);
      if (f->prior > 0.0) builder.Set({domain}, token, f->prior);
    }
  }
  ToyLmSpec lm = builder.Build();
  ValidateToyLmSpec(lm);
  return lm;
}

SfcLabResult RunSfcLab(const SfcLabSpec& spec) {
  SfcLabResult result;
  result.lm = BuildSfcLabLm(spec);
  for (const SfcLabConcept& c : spec.concepts) {
    result.competition.push_back(CompetitionHolds(c));
  }
  ToyBackend backend(result.lm);
  EvalTask task;
  task.dataset_id = "sfc-lab";
  task.split = "synthetic";
  task.instances = SfcLabInstances(spec);
  task.tmpl = SfcLabTemplate(spec);
  RunConfig config;
  config.strategies = {Strategy::kLm, Strategy::kPmiDc};
  result.report = Evaluate(task, backend, config);
  return result;
}

std::vector<SfcLabSweepPoint> SweepParaphraseMass(std::span<const double> masses) {
  std::vector<SfcLabSweepPoint> out;
  for (double m : masses) {
    const SfcLabResult r = RunSfcLab(DefaultSfcLabSpec(m));
    out.push_back({m, r.report.accuracy.at(Strategy::kLm),
                   r.report.accuracy.at(Strategy::kPmiDc)});
  }
  return out;
}

nlohmann::ordered_json SfcLabSpecToJson(const SfcLabSpec& spec) {
  nlohmann::ordered_json concepts = nlohmann::ordered_json::array();
  for (const SfcLabConcept& c : spec.concepts) {
    nlohmann::ordered_json j;
    j["id"] = c.id;
    j["question"] = c.question;
    j["listed"] = FormToJson(c.listed);
    j["paraphrases"] = nlohmann::ordered_json::array();
    for (const SfcLabForm& f : c.paraphrases) j["paraphrases"].push_back(FormToJson(f));
    j["distractors"] = nlohmann::ordered_json::array();
    for (const SfcLabForm& f : c.distractors) j["distractors"].push_back(FormToJson(f));
    j["gold_index"] = c.gold_index;
    concepts.push_back(std::move(j));
  }
  nlohmann::ordered_json out;
  out["model_id"] = spec.model_id;
  out["domain_premise"] = spec.domain_premise;
  out["concepts"] = std::move(concepts);
  return out;
}

SfcLabSpec SfcLabSpecFromJson(const nlohmann::json& j) {
  SfcLabSpec spec;
  try {
    spec.model_id = j.value("model_id", spec.model_id);
    spec.domain_premise = j.value("domain_premise", spec.domain_premise);
    for (const auto& c : j.at("concepts")) {
      SfcLabConcept entry;
      entry.id = c.at("id").get<std::string>();
      entry.question = c.at("question").get<std::string>();
      entry.listed = FormFromJson(c.at("listed"));
      entry.paraphrases = FormsFromJson(c, "paraphrases");
      entry.distractors = FormsFromJson(c, "distractors");
      entry.gold_index = c.value("gold_index", 0);
      spec.concepts.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kDataFormat, std::string("malformed sfc-lab spec: ") + e.what());
  }
  ValidateSfcLabSpec(spec);
  return spec;
}

nlohmann::ordered_json SfcLabResultToJson(const SfcLabSpec& spec,
                                          const SfcLabResult& result) {
  nlohmann::ordered_json out;
  out["accuracy"] = {
      {"lm", result.report.accuracy.at(Strategy::kLm)},
      {"pmi_dc", result.report.accuracy.at(Strategy::kPmiDc)}};
  nlohmann::ordered_json concepts = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < spec.concepts.size(); ++i) {
    const SfcLabConcept& c = spec.concepts[i];
    double conditional_total = 0.0;
    nlohmann::ordered_json forms = nlohmann::ordered_json::array();
    auto add = [&](const SfcLabForm& f, const char* role) {
      conditional_total += f.conditional;
      forms.push_back({{"text", f.text},
                       {"role", role},
                       {"conditional", f.conditional},
                       {"prior", f.prior}});
    };
    add(c.listed, "listed");
    for (const SfcLabForm& f : c.paraphrases) add(f, "paraphrase");
    for (const SfcLabForm& f : c.distractors) add(f, "distractor");
    const InstanceRecord* rec = nullptr;
    for (const InstanceRecord& r : result.report.records) {
      if (r.instance_id == c.id) rec = &r;
    }
    nlohmann::ordered_json j;
    j["id"] = c.id;
    j["competition"] = static_cast<bool>(result.competition[i]);
    j["forms"] = std::move(forms);
    j["other_mass"] = std::max(0.0, 1.0 - conditional_total);
    if (rec != nullptr && !rec->errored()) {
      j["selected"] = {{"lm", rec->selected.at(Strategy::kLm)},
                       {"pmi_dc", rec->selected.at(Strategy::kPmiDc)}};
      j["gold"] = c.gold_index;
    }
    concepts.push_back(std::move(j));
  }
  out["concepts"] = std::move(concepts);
  out["spec"] = SfcLabSpecToJson(spec);
  return out;
}

}  // namespace sfc
