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

#include "sfc/instance.h"

#include <fstream>
#include <set>

#include "sfc/error.h"

namespace sfc {

std::string_view RelationName(Relation r) {
  return r == Relation::kBecause ? "because" : "so";
}

Relation InverseRelation(Relation r) {
  return r == Relation::kBecause ? Relation::kSo : Relation::kBecause;
}

const std::string* Instance::FindField(std::string_view name) const {
  for (const PremiseField& f : premise_parts) {
    if (f.name == name) return &f.text;
  }
  return nullptr;
}

void ValidateInstance(const Instance& instance, LoadMode mode) {
  if (instance.options.size() < 2) {
    throw Error(ErrorCode::kDataFormat,
                "need at least 2 options, got " +
                    std::to_string(instance.options.size()));
  }
  for (std::size_t i = 0; i < instance.options.size(); ++i) {
    if (instance.options[i].empty()) {
      throw Error(ErrorCode::kDataFormat,
                  "option " + std::to_string(i) + " is empty");
    }
  }
  if (instance.gold.has_value()) {
    const int g = *instance.gold;
    if (g < 0 || g >= static_cast<int>(instance.options.size())) {
      throw Error(ErrorCode::kDataFormat,
                  "label " + std::to_string(g) + " out of range for " +
                      std::to_string(instance.options.size()) + " options");
    }
  } else if (mode == LoadMode::kEval) {
    throw Error(ErrorCode::kDataFormat, "missing gold label");
  }
}

nlohmann::ordered_json InstanceToJson(const Instance& instance) {
  nlohmann::ordered_json premise = nlohmann::ordered_json::object();
  for (const PremiseField& f : instance.premise_parts) premise[f.name] = f.text;
  nlohmann::ordered_json j;
  j["id"] = instance.instance_id;
  j["dataset"] = instance.dataset_id;
  j["split"] = instance.split;
  j["premise"] = premise;
  j["options"] = instance.options;
  j["label"] = instance.gold.has_value() ? nlohmann::ordered_json(*instance.gold)
                                         : nlohmann::ordered_json(nullptr);
  j["relation"] = instance.relation.has_value()
                      ? nlohmann::ordered_json(RelationName(*instance.relation))
                      : nlohmann::ordered_json(nullptr);
  if (instance.flipped) j["flipped"] = true;
  return j;
}

Instance InstanceFromJson(const nlohmann::ordered_json& j,
                          const DatasetSchema& schema) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kDataFormat, "record is not a JSON object");
  }
  Instance inst;
  try {
    inst.instance_id = j.value("id", std::string());
    inst.dataset_id = j.value("dataset", schema.dataset_id);
    inst.split = j.value("split", schema.split);
    inst.flipped = j.value("flipped", false);
    const auto& premise = j.at("premise");
    if (premise.is_string()) {
      inst.premise_parts.push_back({"premise", premise.get<std::string>()});
    } else {
      for (const auto& [name, value] : premise.items()) {
        inst.premise_parts.push_back({name, value.get<std::string>()});
      }
    }
    inst.options = j.at("options").get<std::vector<std::string>>();
    if (j.contains("label") && !j.at("label").is_null()) {
      inst.gold = j.at("label").get<int>();
    }
    if (j.contains("relation") && !j.at("relation").is_null()) {
      const std::string rel = j.at("relation").get<std::string>();
      if (rel == "because") {
        inst.relation = Relation::kBecause;
      } else if (rel == "so") {
        inst.relation = Relation::kSo;
      } else {
        throw Error(ErrorCode::kDataFormat,
                    "relation must be \"because\", \"so\" or null");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kDataFormat, e.what());
  }
  for (const std::string& field : schema.required_fields) {
    if (inst.FindField(field) == nullptr) {
      throw Error(ErrorCode::kDataFormat, "missing premise field '" + field + "'");
    }
  }
  ValidateInstance(inst, schema.mode);
  return inst;
}

std::vector<Instance> ParseDataset(std::istream& in, const DatasetSchema& schema,
                                   std::string_view source_name) {
  std::vector<Instance> out;
  std::vector<std::string> problems;
  std::set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where =
        std::string(source_name) + ":" + std::to_string(line_no) + ": ";
    try {
      Instance inst = InstanceFromJson(nlohmann::ordered_json::parse(line), schema);
      if (inst.instance_id.empty()) {
        inst.instance_id = inst.dataset_id + "-" + std::to_string(line_no);
      }
      if (!seen_ids.insert(inst.instance_id).second) {
        problems.push_back(where + "duplicate instance id '" +
                           inst.instance_id + "'");
        continue;
      }
      out.push_back(std::move(inst));
    } catch (const nlohmann::json::exception& e) {
      problems.push_back(where + "invalid JSON: " + e.what());
    } catch (const Error& e) {
      problems.push_back(where + e.what());
    }
  }
  if (!problems.empty()) {
    std::string message = "malformed dataset records:";
    for (const std::string& p : problems) message += "\n  " + p;
    throw Error(ErrorCode::kDataFormat, message);
  }
  return out;
}

std::vector<Instance> LoadDataset(const std::filesystem::path& path,
                                  const DatasetSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open dataset " + path.string());
  DatasetSchema effective = schema;
  if (effective.dataset_id.empty()) effective.dataset_id = DatasetIdFromPath(path);
  return ParseDataset(in, effective, path.filename().string());
}

std::string DatasetIdFromPath(const std::filesystem::path& path) {
  std::string stem = path.filename().string();
  const std::size_t dot = stem.find('.');
  if (dot != std::string::npos) stem.resize(dot);
  return stem;
}

std::string SerializeDataset(std::span<const Instance> instances) {
  std::string out;
  for (const Instance& inst : instances) {
    out += InstanceToJson(inst).dump();
    out += '\n';
  }
  return out;
}

}  // namespace sfc
