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

// Prompt templates.
//
// A template turns an instance into, per option, a conditional context x, a
// domain context x_domain and a hypothesis y. The scored continuation is
// joiner + hypothesis under both contexts, so the two scores of one option
// always see byte-identical continuations.
//
// Patterns use {name} slots filled from the instance's premise fields. The
// extra slot {connective} is the relation word ("because" / "so") of
// COPA-style instances.

#ifndef SFC_TEMPLATE_H_
#define SFC_TEMPLATE_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sfc/instance.h"

namespace sfc {

struct OptionStyle {
  bool lowercase_first = false;
  bool capitalize_first = false;
  // Appends '.' when the option has no terminal punctuation.
  bool ensure_terminal_period = true;
};

struct Template {
  std::string id;
  std::string dataset_id;
  std::string version = "1";
  std::string conditional_pattern;
  std::string domain_premise;
  std::string option_pattern = "{option}";
  OptionStyle option_style;
  std::string joiner = " ";
  // Premise fields whose trailing '.' or '?' is dropped before filling, for
  // patterns that supply their own punctuation.
  std::vector<std::string> strip_punctuation_fields;
  // Closed label vocabulary; required by contextual calibration.
  std::optional<std::vector<std::string>> closed_label_set;
  std::string because_word = "because";
  std::string so_word = "so";
};

struct RenderedOption {
  std::string conditional_context;
  std::string domain_context;
  std::string hypothesis;
  std::string joiner;
  int option_index = 0;

  // What the backend scores under both contexts.
  std::string continuation() const { return joiner + hypothesis; }
};

struct RenderOptions {
  // Primed exemplars, each rendered as its conditional context followed by
  // its gold continuation.
  std::span<const Instance> exemplars;
  std::string separator = "\n\n";
};

// One RenderedOption per option. Flipped instances render each option as the
// context and the shared "premise" field as the hypothesis. Throws
// kDataFormat naming every unfilled slot.
std::vector<RenderedOption> Render(const Instance& instance,
                                   const Template& tmpl,
                                   const RenderOptions& options = {});

// Renders one option string with the template's option pattern and style.
std::string RenderHypothesis(std::string_view option, const Template& tmpl);

// Every bundled template, in registry order.
const std::vector<Template>& BundledTemplates();
// Template for unknown QA datasets: "question: {question} the answer is:".
const Template& GenericQaTemplate();
// Looks up by template id, then by dataset id or alias. nullptr if absent.
const Template* FindBundledTemplate(std::string_view id_or_dataset);
std::vector<std::string> BundledTemplateIds();

nlohmann::ordered_json TemplateToJson(const Template& tmpl);
Template TemplateFromJson(const nlohmann::json& j);
Template LoadTemplate(const std::filesystem::path& path);

// `spec` is a bundled id, a dataset alias or a path to a template JSON file.
// Throws kConfig listing the bundled ids when nothing matches.
Template ResolveTemplate(std::string_view spec);

}  // namespace sfc

#endif  // SFC_TEMPLATE_H_
