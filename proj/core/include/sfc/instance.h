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

// Multiple-choice instances and their JSONL representation.
//
// One JSON object per line:
//
//   {"id": "copa-dev-1",
//    "premise": {"premise": "The bar closed"},
//    "options": ["it was crowded.", "it was 3 AM."],
//    "label": 1,
//    "relation": "because"}
//
// "premise" holds named text fields in template order; "relation" is
// "because", "so" or null. Optional "dataset", "split" and "flipped" override
// the loader defaults. See schemas/instance.schema.json.

#ifndef SFC_INSTANCE_H_
#define SFC_INSTANCE_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sfc {

enum class Relation { kBecause, kSo };

std::string_view RelationName(Relation r);
Relation InverseRelation(Relation r);

struct PremiseField {
  std::string name;
  std::string text;

  friend bool operator==(const PremiseField&, const PremiseField&) = default;
};

struct Instance {
  std::vector<PremiseField> premise_parts;
  std::vector<std::string> options;
  std::optional<int> gold;
  std::string dataset_id;
  std::string split;
  std::string instance_id;
  std::optional<Relation> relation;
  // Set on COPA-flipped instances: options are promoted contexts and the
  // "premise" field is the shared continuation.
  bool flipped = false;

  const std::string* FindField(std::string_view name) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

enum class LoadMode {
  kEval,         // every record needs a valid label
  kPredictOnly,  // labels may be absent
};

struct DatasetSchema {
  std::string dataset_id;
  std::string split = "dev";
  // Premise fields every record must carry.
  std::vector<std::string> required_fields;
  LoadMode mode = LoadMode::kEval;
};

// Throws kDataFormat listing every malformed line as "<source>:<line>: why".
std::vector<Instance> ParseDataset(std::istream& in, const DatasetSchema& schema,
                                   std::string_view source_name);
std::vector<Instance> LoadDataset(const std::filesystem::path& path,
                                  const DatasetSchema& schema);

// Dataset id implied by a file name ("copa.jsonl" -> "copa").
std::string DatasetIdFromPath(const std::filesystem::path& path);

nlohmann::ordered_json InstanceToJson(const Instance& instance);
Instance InstanceFromJson(const nlohmann::ordered_json& j,
                          const DatasetSchema& schema);
// Checks option and label invariants for the given mode.
void ValidateInstance(const Instance& instance, LoadMode mode);

std::string SerializeDataset(std::span<const Instance> instances);

}  // namespace sfc

#endif  // SFC_INSTANCE_H_
