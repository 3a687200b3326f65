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


#include "sfc/wins.h"

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sfc/error.h"
#include "test_support.h"

namespace sfc {
namespace {

using test_support::ThrownCode;

WinsDataset Dataset(std::string name, std::optional<double> a, std::optional<double> b,
                    std::optional<std::set<std::string>> bold = std::nullopt) {
  return WinsDataset{std::move(name), {{"a", a}, {"b", b}}, std::move(bold)};
}

TEST(WinsTest, TiesCreditEveryTiedStrategy) {
  const std::vector<WinsGroup> groups = {
      {"g", {Dataset("d1", 0.6, 0.5), Dataset("d2", 0.4, 0.4)}}};
  const WinsTable table = AggregateWins({"a", "b"}, groups);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0].datasets, 2u);
  EXPECT_DOUBLE_EQ(table.rows[0].percent.at("a"), 100.0);
  EXPECT_DOUBLE_EQ(table.rows[0].percent.at("b"), 50.0);
  EXPECT_TRUE(table.flags.empty());
}

TEST(WinsTest, MissingCellsCountInTheDenominator) {
  const std::vector<WinsGroup> groups = {
      {"g", {Dataset("d1", std::nullopt, 0.3), Dataset("d2", 0.9, 0.1),
             Dataset("d3", std::nullopt, std::nullopt), Dataset("d4", 0.2, 0.7)}}};
  const WinsTable table = AggregateWins({"a", "b"}, groups);
  EXPECT_DOUBLE_EQ(table.rows[0].percent.at("a"), 25.0);
  EXPECT_DOUBLE_EQ(table.rows[0].percent.at("b"), 50.0);
  EXPECT_TRUE(BestStrategies(Dataset("x", std::nullopt, std::nullopt)).empty());
}

TEST(WinsTest, TieToleranceAbsorbsRoundingNoise) {
  const WinsDataset ds = Dataset("d", 0.1 + 0.2, 0.3);
  EXPECT_EQ(BestStrategies(ds), (std::set<std::string>{"a", "b"}));
}

TEST(WinsTest, MarkedBestMismatchesAreFlagged) {
  const std::vector<WinsGroup> groups = {
      {"g", {Dataset("ok", 0.6, 0.5, std::set<std::string>{"a"}),
             Dataset("off", 0.6, 0.5, std::set<std::string>{"a", "b"})}}};
  const WinsTable table = AggregateWins({"a", "b"}, groups);
  ASSERT_EQ(table.flags.size(), 1u);
  EXPECT_EQ(table.flags[0].dataset, "off");
  EXPECT_EQ(table.flags[0].computed_best, (std::set<std::string>{"a"}));
  EXPECT_EQ(table.flags[0].marked_best, (std::set<std::string>{"a", "b"}));
}

TEST(WinsTest, RejectsInconsistentStrategySets) {
  const std::vector<WinsGroup> groups = {
      {"g", {WinsDataset{"d", {{"a", 0.5}}, std::nullopt}}}};
  EXPECT_EQ(ThrownCode([&] { AggregateWins({"a", "b"}, groups); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(ThrownCode([&] { AggregateWins({}, groups); }),
            ErrorCode::kInvalidArgument);
}

TEST(WinsTest, GroupFromReports) {
  EvalReport r1;
  r1.metadata.dataset_id = "copa";
  r1.strategies = {Strategy::kLm, Strategy::kPmiDc};
  r1.accuracy = {{Strategy::kLm, 0.5}, {Strategy::kPmiDc, 1.0}};
  r1.n_labeled = 8;
  EvalReport r2 = r1;
  r2.metadata.dataset_id = "sst-2";
  r2.accuracy = {{Strategy::kLm, 0.75}, {Strategy::kPmiDc, 0.75}};
  const std::vector<EvalReport> reports = {r1, r2};
  const WinsGroup group = WinsGroupFromReports("toy", reports);
  const WinsTable table = AggregateWins({"lm", "pmi_dc"}, std::vector<WinsGroup>{group});
  EXPECT_DOUBLE_EQ(table.rows[0].percent.at("lm"), 50.0);
  EXPECT_DOUBLE_EQ(table.rows[0].percent.at("pmi_dc"), 100.0);

  std::vector<EvalReport> mixed = {r1, r2};
  mixed[1].strategies = {Strategy::kLm};
  EXPECT_THROW(WinsGroupFromReports("toy", mixed), Error);
}

TEST(WinsSourceTest, ParsesTheTranscribedTable) {
  const WinsSource source =
      LoadWinsSource(test_support::FixturePath("gpt3_zero_shot_accuracy.json"));
  EXPECT_EQ(source.strategies,
            (std::vector<std::string>{"unc", "lm", "avg", "pmi_dc", "cc"}));
  ASSERT_EQ(source.groups.size(), 4u);
  for (const WinsGroup& g : source.groups) {
    EXPECT_EQ(g.datasets.size(), 16u) << g.group;
    for (const WinsDataset& d : g.datasets) EXPECT_TRUE(d.marked_best.has_value());
  }
  EXPECT_DOUBLE_EQ(source.published_wins.at("175B").at("pmi_dc"), 62.5);
  // Aggregation over the transcription runs and yields one row per group.
  const WinsTable table = AggregateWins(source.strategies, source.groups);
  EXPECT_EQ(table.rows.size(), 4u);
}

TEST(WinsSourceTest, MalformedSources) {
  EXPECT_EQ(ThrownCode([] { WinsSourceFromJson(nlohmann::json{{"groups", 1}}); }),
            ErrorCode::kDataFormat);
  EXPECT_EQ(ThrownCode([] { LoadWinsSource("/nonexistent.json"); }),
            ErrorCode::kNotFound);
}

}  // namespace
}  // namespace sfc
