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

#include "sfc/copa_flip.h"

#include "sfc/error.h"
#include "text.h"

namespace sfc {

Instance CopaFlip(const Instance& instance) {
  if (!instance.relation.has_value()) {
    throw Error(ErrorCode::kNotFlippable,
                "instance '" + instance.instance_id +
                    "' is not flippable: it has no because/so relation");
  }
  const std::string* premise = instance.FindField("premise");
  if (premise == nullptr) {
    throw Error(ErrorCode::kNotFlippable,
                "instance '" + instance.instance_id +
                    "' is not flippable: it has no \"premise\" field");
  }

  Instance out = instance;
  out.relation = InverseRelation(*instance.relation);
  out.flipped = !instance.flipped;
  for (PremiseField& field : out.premise_parts) {
    if (field.name != "premise") continue;
    field.text = instance.flipped
                     ? text::CapitalizeFirst(text::StripTerminalPeriod(*premise))
                     : text::LowercaseFirst(text::Trim(*premise));
  }
  for (std::string& option : out.options) {
    option = instance.flipped
                 ? text::LowercaseFirst(text::EnsureTerminalPeriod(option))
                 : text::CapitalizeFirst(text::StripTerminalPeriod(option));
  }
  return out;
}

std::vector<Instance> CopaFlipAll(std::span<const Instance> instances) {
  std::vector<Instance> out;
  out.reserve(instances.size());
  for (const Instance& inst : instances) out.push_back(CopaFlip(inst));
  return out;
}

}  // namespace sfc
