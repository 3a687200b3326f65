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

#include "sfc/template.h"

#include <cctype>
#include <fstream>
#include <map>
#include <set>

#include "sfc/error.h"
#include "text.h"

namespace sfc {
namespace {

bool IsSlotChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

// Replaces {name} slots via `lookup`; names that lookup cannot fill are
// appended to `missing`.
template <typename Lookup>
std::string FillPattern(std::string_view pattern, const Lookup& lookup,
                        std::set<std::string>& missing) {
  std::string out;
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    if (pattern[pos] == '{') {
      std::size_t end = pos + 1;
      while (end < pattern.size() && IsSlotChar(pattern[end])) ++end;
      if (end < pattern.size() && pattern[end] == '}' && end > pos + 1) {
        const std::string name(pattern.substr(pos + 1, end - pos - 1));
        if (std::optional<std::string> value = lookup(name)) {
          out += *value;
        } else {
          missing.insert(name);
        }
        pos = end + 1;
        continue;
      }
    }
    out += pattern[pos++];
  }
  return out;
}

std::string StripFieldPunctuation(std::string_view s) {
  std::string t = text::Trim(s);
  while (!t.empty() && (t.back() == '.' || t.back() == '?')) t.pop_back();
  return text::Trim(t);
}

struct FieldLookup {
  const Instance& instance;
  const Template& tmpl;
  // Replacement for the "premise" field when rendering flipped options.
  const std::string* premise_override = nullptr;

  std::optional<std::string> operator()(const std::string& name) const {
    if (name == "connective") {
      if (!instance.relation) return std::nullopt;
      return *instance.relation == Relation::kBecause ? tmpl.because_word
                                                      : tmpl.so_word;
    }
    const std::string* value = nullptr;
    if (premise_override != nullptr && name == "premise") {
      value = premise_override;
    } else {
      value = instance.FindField(name);
    }
    if (value == nullptr) return std::nullopt;
    for (const std::string& f : tmpl.strip_punctuation_fields) {
      if (f == name) return StripFieldPunctuation(*value);
    }
    return text::Trim(*value);
  }
};

void ThrowMissing(const std::set<std::string>& missing, const Instance& inst,
                  const Template& tmpl) {
  std::vector<std::string> names(missing.begin(), missing.end());
  throw Error(ErrorCode::kDataFormat,
              "template '" + tmpl.id + "' has unfilled slots for instance '" +
                  inst.instance_id + "': " + text::Join(names, ", "));
}

std::vector<RenderedOption> RenderZeroShot(const Instance& instance,
                                           const Template& tmpl) {
  std::vector<RenderedOption> out;
  std::set<std::string> missing;
  if (!instance.flipped) {
    FieldLookup lookup{instance, tmpl};
    const std::string context = FillPattern(tmpl.conditional_pattern, lookup, missing);
    const std::string domain = FillPattern(tmpl.domain_premise, lookup, missing);
    for (std::size_t i = 0; i < instance.options.size(); ++i) {
      out.push_back({context, domain, RenderHypothesis(instance.options[i], tmpl),
                     tmpl.joiner, static_cast<int>(i)});
    }
  } else {
    const std::string* shared = instance.FindField("premise");
    if (shared == nullptr) missing.insert("premise");
    for (std::size_t i = 0; i < instance.options.size() && shared != nullptr; ++i) {
      FieldLookup lookup{instance, tmpl, &instance.options[i]};
      const std::string context =
          FillPattern(tmpl.conditional_pattern, lookup, missing);
      const std::string domain = FillPattern(tmpl.domain_premise, lookup, missing);
      out.push_back({context, domain, RenderHypothesis(*shared, tmpl), tmpl.joiner,
                     static_cast<int>(i)});
    }
  }
  if (!missing.empty()) ThrowMissing(missing, instance, tmpl);
  return out;
}

Template Make(std::string id, std::string conditional, std::string domain,
              std::vector<std::string> strip = {},
              std::optional<std::vector<std::string>> labels = std::nullopt) {
  Template t;
  t.id = id;
  t.dataset_id = std::move(id);
  t.conditional_pattern = std::move(conditional);
  t.domain_premise = std::move(domain);
  t.strip_punctuation_fields = std::move(strip);
  t.closed_label_set = std::move(labels);
  return t;
}

std::vector<Template> BuildRegistry() {
  std::vector<Template> r;

  Template copa = Make("copa", "{premise} {connective}", "{connective}", {"premise"});
  copa.option_style.lowercase_first = true;
  r.push_back(copa);

  r.push_back(Make("storycloze", "{story} The story continues:",
                   "The story continues:"));
  r.push_back(Make("hellaswag", "{context}", ""));
  r.push_back(Make("race-m", "{article} question: {question}? answer:", "? answer:",
                   {"question"}));
  r.push_back(Make("race-h", "{article} question: {question}? answer:", "? answer:",
                   {"question"}));
  r.push_back(Make("arc-easy", "{question} the answer is:", "the answer is:"));
  r.push_back(Make("arc-challenge", "{question} the answer is:", "the answer is:"));
  r.push_back(Make("obqa", "{question} the answer is:", "the answer is:"));
  r.push_back(Make("cqa", "{question}? the answer is:", "? the answer is:",
                   {"question"}));

  Template boolq = Make("boolq", "title: {passage} question: {question}? answer:",
                        "answer:", {"question"},
                        std::vector<std::string>{"yes", "no"});
  boolq.option_style.capitalize_first = true;
  r.push_back(boolq);

  r.push_back(Make("rte",
                   "{premise} question: {hypothesis} true or false? answer:",
                   "true or false? answer:", {},
                   std::vector<std::string>{"true", "false"}));
  r.push_back(Make("cb",
                   "question: Given that {premise} Is {hypothesis} true, false, "
                   "or neither? the answer is:",
                   "the answer is:", {},
                   std::vector<std::string>{"true", "false", "neither"}));
  r.push_back(Make("sst-2", "\"{sentence}\" The quote has a tone that is",
                   "The quote has a tone that is", {},
                   std::vector<std::string>{"positive", "negative"}));
  r.push_back(Make("sst-5", "\"{sentence}\" The quote has a tone that is",
                   "The quote has a tone that is", {},
                   std::vector<std::string>{"terrible", "bad", "neutral", "good",
                                            "great"}));
  r.push_back(Make("agn", "title: {title} summary: {summary} topic:", "topic:", {},
                   std::vector<std::string>{"World", "Sports", "Business",
                                            "Science"}));
  r.push_back(Make("trec", "{question} The answer to this question will be",
                   "The answer to this question will be", {},
                   std::vector<std::string>{"a description", "an entity",
                                            "an abbreviation", "a person",
                                            "a number", "a location"}));
  return r;
}

const std::map<std::string, std::string, std::less<>>& Aliases() {
  static const std::map<std::string, std::string, std::less<>> kAliases = {
      {"sc", "storycloze"},        {"story_cloze", "storycloze"},
      {"hs", "hellaswag"},         {"r-m", "race-m"},
      {"race-middle", "race-m"},   {"r-h", "race-h"},
      {"race-high", "race-h"},     {"arc-e", "arc-easy"},
      {"arc-c", "arc-challenge"},  {"openbookqa", "obqa"},
      {"commonsenseqa", "cqa"},    {"bq", "boolq"},
      {"sst2", "sst-2"},           {"sst5", "sst-5"},
      {"ag_news", "agn"},          {"agnews", "agn"},
      {"generic", "generic-qa"},
  };
  return kAliases;
}

}  // namespace

std::string RenderHypothesis(std::string_view option, const Template& tmpl) {
  std::set<std::string> missing;
  const std::string trimmed = text::Trim(option);
  auto lookup = [&](const std::string& name) -> std::optional<std::string> {
    if (name == "option") return trimmed;
    return std::nullopt;
  };
  std::string out = FillPattern(tmpl.option_pattern, lookup, missing);
  if (!missing.empty()) {
    throw Error(ErrorCode::kDataFormat,
                "option pattern of template '" + tmpl.id + "' has unknown slots");
  }
  if (tmpl.option_style.lowercase_first) out = text::LowercaseFirst(out);
  if (tmpl.option_style.capitalize_first) out = text::CapitalizeFirst(out);
  if (tmpl.option_style.ensure_terminal_period) out = text::EnsureTerminalPeriod(out);
  return out;
}

std::vector<RenderedOption> Render(const Instance& instance, const Template& tmpl,
                                   const RenderOptions& options) {
  std::vector<RenderedOption> rendered = RenderZeroShot(instance, tmpl);
  if (options.exemplars.empty()) return rendered;

  std::string prefix;
  for (const Instance& ex : options.exemplars) {
    if (!ex.gold.has_value()) {
      throw Error(ErrorCode::kDataFormat,
                  "few-shot exemplar '" + ex.instance_id + "' has no label");
    }
    const RenderedOption gold = RenderZeroShot(ex, tmpl).at(*ex.gold);
    prefix += gold.conditional_context + gold.continuation() + options.separator;
  }
  for (RenderedOption& r : rendered) {
    r.conditional_context = prefix + r.conditional_context;
    r.domain_context = prefix + r.domain_context;
  }
  return rendered;
}

const std::vector<Template>& BundledTemplates() {
  static const std::vector<Template> kRegistry = BuildRegistry();
  return kRegistry;
}

const Template& GenericQaTemplate() {
  static const Template kGeneric =
      Make("generic-qa", "question: {question} the answer is:", "the answer is:");
  return kGeneric;
}

const Template* FindBundledTemplate(std::string_view id_or_dataset) {
  const std::string key = text::ToLower(text::Trim(id_or_dataset));
  std::string_view resolved = key;
  if (auto it = Aliases().find(key); it != Aliases().end()) resolved = it->second;
  for (const Template& t : BundledTemplates()) {
    if (t.id == resolved || t.dataset_id == resolved) return &t;
  }
  if (resolved == GenericQaTemplate().id) return &GenericQaTemplate();
  return nullptr;
}

std::vector<std::string> BundledTemplateIds() {
  std::vector<std::string> ids;
  for (const Template& t : BundledTemplates()) ids.push_back(t.id);
  ids.push_back(GenericQaTemplate().id);
  return ids;
}

nlohmann::ordered_json TemplateToJson(const Template& t) {
  nlohmann::ordered_json j;
  j["id"] = t.id;
  j["dataset_id"] = t.dataset_id;
  j["version"] = t.version;
  j["conditional_pattern"] = t.conditional_pattern;
  j["domain_premise"] = t.domain_premise;
  j["option_pattern"] = t.option_pattern;
  j["option_style"] = {{"lowercase_first", t.option_style.lowercase_first},
                       {"capitalize_first", t.option_style.capitalize_first},
                       {"ensure_terminal_period", t.option_style.ensure_terminal_period}};
  j["joiner"] = t.joiner;
  j["strip_punctuation_fields"] = t.strip_punctuation_fields;
  j["closed_label_set"] = t.closed_label_set.has_value()
                              ? nlohmann::ordered_json(*t.closed_label_set)
                              : nlohmann::ordered_json(nullptr);
  j["because_word"] = t.because_word;
  j["so_word"] = t.so_word;
  return j;
}

Template TemplateFromJson(const nlohmann::json& j) {
  Template t;
  try {
    t.id = j.at("id").get<std::string>();
    t.dataset_id = j.value("dataset_id", t.id);
    t.version = j.value("version", std::string("1"));
    t.conditional_pattern = j.at("conditional_pattern").get<std::string>();
    t.domain_premise = j.at("domain_premise").get<std::string>();
    t.option_pattern = j.value("option_pattern", std::string("{option}"));
    if (j.contains("option_style")) {
      const auto& s = j.at("option_style");
      t.option_style.lowercase_first = s.value("lowercase_first", false);
      t.option_style.capitalize_first = s.value("capitalize_first", false);
      t.option_style.ensure_terminal_period = s.value("ensure_terminal_period", true);
    }
    t.joiner = j.value("joiner", std::string(" "));
    t.strip_punctuation_fields =
        j.value("strip_punctuation_fields", std::vector<std::string>{});
    if (j.contains("closed_label_set") && !j.at("closed_label_set").is_null()) {
      t.closed_label_set = j.at("closed_label_set").get<std::vector<std::string>>();
    }
    t.because_word = j.value("because_word", std::string("because"));
    t.so_word = j.value("so_word", std::string("so"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kDataFormat, std::string("malformed template: ") + e.what());
  }
  return t;
}

Template LoadTemplate(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open template " + path.string());
  try {
    return TemplateFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kDataFormat,
                "template " + path.string() + " is not JSON: " + e.what());
  }
}

Template ResolveTemplate(std::string_view spec) {
  if (const Template* t = FindBundledTemplate(spec)) return *t;
  const std::filesystem::path path(spec);
  if (std::filesystem::is_regular_file(path)) return LoadTemplate(path);
  throw Error(ErrorCode::kConfig,
              "no template '" + std::string(spec) +
                  "'; available: " + text::Join(BundledTemplateIds(), ", "));
}

}  // namespace sfc
