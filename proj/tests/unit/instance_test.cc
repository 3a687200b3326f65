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

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "sfc/error.h"
#include "test_support.h"

namespace sfc {
namespace {

using test_support::ThrownCode;

DatasetSchema CopaSchema(LoadMode mode = LoadMode::kEval) {
  DatasetSchema schema;
  schema.dataset_id = "copa";
  schema.required_fields = {"premise"};
  schema.mode = mode;
  return schema;
}

TEST(InstanceTest, ParsesDocumentedRecord) {
  std::istringstream in(
      R"({"id": "copa-dev-1", "premise": {"premise": "The bar closed"}, )"
      R"("options": ["it was crowded.", "it was 3 AM."], "label": 1, )"
      R"("relation": "because"})"
      "\n\n");
  const auto instances = ParseDataset(in, CopaSchema(), "copa.jsonl");
  ASSERT_EQ(instances.size(), 1u);
  const Instance& inst = instances[0];
  EXPECT_EQ(inst.instance_id, "copa-dev-1");
  EXPECT_EQ(inst.dataset_id, "copa");
  EXPECT_EQ(inst.split, "dev");
  EXPECT_EQ(*inst.FindField("premise"), "The bar closed");
  EXPECT_EQ(inst.gold, 1);
  EXPECT_EQ(inst.relation, Relation::kBecause);
  EXPECT_FALSE(inst.flipped);
  EXPECT_EQ(inst.FindField("missing"), nullptr);
}

TEST(InstanceTest, StringPremiseAndDefaultIds) {
  std::istringstream in(R"({"premise": "p", "options": ["a", "b"], "label": 0})");
  const auto instances = ParseDataset(in, DatasetSchema{"toy"}, "toy.jsonl");
  EXPECT_EQ(instances[0].instance_id, "toy-1");
  EXPECT_EQ(*instances[0].FindField("premise"), "p");
}

TEST(InstanceTest, ReportsEveryMalformedLine) {
  std::istringstream in(
      R"({"premise": {"premise": "p"}, "options": ["a"], "label": 0})" "\n"
      "{not json\n"
      R"({"premise": {"premise": "p"}, "options": ["a", "b"], "label": 5})" "\n"
      R"({"premise": {"other": "p"}, "options": ["a", "b"], "label": 0})" "\n"
      R"({"premise": {"premise": "p"}, "options": ["a", "b"]})" "\n"
      R"({"premise": {"premise": "p"}, "options": ["a", "b"], "label": 0, "relation": "if"})" "\n");
  try {
    ParseDataset(in, CopaSchema(), "bad.jsonl");
    FAIL() << "expected a data format error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDataFormat);
    const std::string msg = e.what();
    for (int line = 1; line <= 6; ++line) {
      EXPECT_NE(msg.find("bad.jsonl:" + std::to_string(line) + ":"), std::string::npos)
          << msg;
    }
    EXPECT_NE(msg.find("missing gold label"), std::string::npos);
    EXPECT_NE(msg.find("missing premise field 'premise'"), std::string::npos);
  }
}

TEST(InstanceTest, PredictOnlyAllowsMissingLabels) {
  std::istringstream in(R"({"premise": {"premise": "p"}, "options": ["a", "b"]})");
  const auto instances = ParseDataset(in, CopaSchema(LoadMode::kPredictOnly), "x");
  EXPECT_FALSE(instances[0].gold.has_value());
}

TEST(InstanceTest, DuplicateIdsAreRejected) {
  std::istringstream in(
      R"({"id": "x", "premise": "p", "options": ["a", "b"], "label": 0})" "\n"
      R"({"id": "x", "premise": "q", "options": ["a", "b"], "label": 0})" "\n");
  EXPECT_EQ(ThrownCode([&] { ParseDataset(in, DatasetSchema{"d"}, "d"); }),
            ErrorCode::kDataFormat);
}

TEST(InstanceTest, JsonRoundTrip) {
  const auto original = test_support::CopaToyWorldInstances();
  std::istringstream in(SerializeDataset(original));
  EXPECT_EQ(ParseDataset(in, CopaSchema(), "rt"), original);
}

TEST(InstanceTest, LoadDatasetDerivesIdFromFileName) {
  EXPECT_EQ(DatasetIdFromPath("/data/copa.dev.jsonl"), "copa");
  DatasetSchema schema;
  const auto instances =
      LoadDataset(test_support::FixturePath("copa.jsonl"), schema);
  EXPECT_EQ(instances.size(), 8u);
  EXPECT_EQ(ThrownCode([&] { LoadDataset("/nonexistent.jsonl", schema); }),
            ErrorCode::kNotFound);
}

TEST(InstanceTest, RelationHelpers) {
  EXPECT_EQ(RelationName(Relation::kBecause), "because");
  EXPECT_EQ(InverseRelation(Relation::kSo), Relation::kBecause);
}

}  // namespace
}  // namespace sfc
