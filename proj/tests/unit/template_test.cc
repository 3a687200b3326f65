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

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sfc/copa_flip.h"
#include "sfc/error.h"
#include "test_support.h"

namespace sfc {
namespace {

using test_support::ThrownCode;

Instance BarInstance(Relation relation = Relation::kBecause) {
  Instance inst;
  inst.premise_parts = {{"premise", "The bar closed."}};
  inst.options = {"it was crowded.", "it was 3 AM."};
  inst.gold = 1;
  inst.instance_id = "bar";
  inst.relation = relation;
  return inst;
}

const Template& Bundled(std::string_view id) {
  const Template* t = FindBundledTemplate(id);
  if (t == nullptr) throw std::runtime_error("no template " + std::string(id));
  return *t;
}

TEST(TemplateTest, CopaRendersCauseQuestion) {
  const auto r = Render(BarInstance(), Bundled("copa"));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].conditional_context, "The bar closed because");
  EXPECT_EQ(r[0].domain_context, "because");
  EXPECT_EQ(r[0].continuation(), " it was crowded.");
  EXPECT_EQ(r[1].hypothesis, "it was 3 AM.");
  EXPECT_EQ(r[1].option_index, 1);
}

TEST(TemplateTest, CopaRendersEffectQuestion) {
  const auto r = Render(BarInstance(Relation::kSo), Bundled("copa"));
  EXPECT_EQ(r[0].conditional_context, "The bar closed so");
  EXPECT_EQ(r[0].domain_context, "so");
}

TEST(TemplateTest, FlippedInstanceSharesOneContinuation) {
  const auto r = Render(CopaFlip(BarInstance()), Bundled("copa"));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].conditional_context, "It was crowded so");
  EXPECT_EQ(r[1].conditional_context, "It was 3 AM so");
  EXPECT_EQ(r[0].domain_context, "so");
  EXPECT_EQ(r[0].continuation(), " the bar closed.");
  EXPECT_EQ(r[1].continuation(), r[0].continuation());
}

TEST(TemplateTest, DomainPremiseIsASuffixOfTheConditionalContext) {
  std::mt19937_64 rng(5);
  for (const Template& t : BundledTemplates()) {
    if (t.domain_premise.empty()) continue;
    const Instance inst = test_support::RandomInstanceFor(t, rng, "x");
    for (const RenderedOption& r : Render(inst, t)) {
      EXPECT_TRUE(r.conditional_context.ends_with(r.domain_context))
          << t.id << ": " << r.conditional_context << " | " << r.domain_context;
    }
  }
}

TEST(TemplateTest, QuestionTemplatesSupplyTheirOwnPunctuation) {
  Instance inst;
  inst.premise_parts = {{"question", "Where do cats sleep?"}};
  inst.options = {"bed", "roof"};
  inst.gold = 0;
  const auto r = Render(inst, Bundled("cqa"));
  EXPECT_EQ(r[0].conditional_context, "Where do cats sleep? the answer is:");
  EXPECT_EQ(r[0].domain_context, "? the answer is:");
  EXPECT_EQ(r[0].continuation(), " bed.");
}

TEST(TemplateTest, ClosedLabelTemplates) {
  Instance inst;
  inst.premise_parts = {{"passage", "Cats sleep a lot."},
                        {"question", "do cats sleep?"}};
  inst.options = {"yes", "no"};
  inst.gold = 0;
  const auto boolq = Render(inst, Bundled("bq"));
  EXPECT_EQ(boolq[0].conditional_context,
            "title: Cats sleep a lot. question: do cats sleep? answer:");
  EXPECT_EQ(boolq[0].continuation(), " Yes.");
  EXPECT_EQ(boolq[0].domain_context, "answer:");

  Instance sst;
  sst.premise_parts = {{"sentence", "a great film."}};
  sst.options = {"positive", "negative"};
  sst.gold = 0;
  const auto r = Render(sst, Bundled("sst2"));
  EXPECT_EQ(r[0].conditional_context, "\"a great film.\" The quote has a tone that is");
  EXPECT_EQ(r[1].continuation(), " negative.");
  EXPECT_EQ(Bundled("agn").closed_label_set->size(), 4u);
  EXPECT_EQ(Bundled("trec").closed_label_set->size(), 6u);
  EXPECT_FALSE(Bundled("copa").closed_label_set.has_value());
}

TEST(TemplateTest, MissingSlotsAreNamed) {
  Instance inst;
  inst.premise_parts = {{"passage", "p"}};
  inst.options = {"yes", "no"};
  try {
    Render(inst, Bundled("boolq"));
    FAIL() << "expected a data format error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDataFormat);
    EXPECT_NE(std::string(e.what()).find("question"), std::string::npos);
  }
  Instance no_relation = BarInstance();
  no_relation.relation.reset();
  EXPECT_EQ(ThrownCode([&] { Render(no_relation, Bundled("copa")); }),
            ErrorCode::kDataFormat);
}

TEST(TemplateTest, FewShotPrefixPrecedesBothContexts) {
  Instance ex = BarInstance();
  ex.premise_parts = {{"premise", "The man broke his toe."}};
  ex.options = {"he got a hole in his sock.", "he dropped a hammer on his foot."};
  ex.gold = 1;
  const std::vector<Instance> exemplars = {ex};
  RenderOptions options;
  options.exemplars = exemplars;
  const auto r = Render(BarInstance(), Bundled("copa"), options);
  const std::string prefix =
      "The man broke his toe because he dropped a hammer on his foot.\n\n";
  EXPECT_EQ(r[0].conditional_context, prefix + "The bar closed because");
  EXPECT_EQ(r[0].domain_context, prefix + "because");
  EXPECT_EQ(r[0].continuation(), " it was crowded.");

  std::vector<Instance> unlabeled = {ex};
  unlabeled[0].gold.reset();
  options.exemplars = unlabeled;
  EXPECT_THROW(Render(BarInstance(), Bundled("copa"), options), Error);
}

TEST(TemplateTest, RegistryLookupAndAliases) {
  EXPECT_EQ(Bundled("copa").id, "copa");
  EXPECT_EQ(Bundled("story_cloze").id, "storycloze");
  EXPECT_EQ(Bundled("commonsenseqa").id, "cqa");
  EXPECT_EQ(Bundled("race-high").id, "race-h");
  EXPECT_EQ(Bundled("generic").id, "generic-qa");
  EXPECT_EQ(FindBundledTemplate("unknown-dataset"), nullptr);
  const auto ids = BundledTemplateIds();
  EXPECT_NE(std::find(ids.begin(), ids.end(), "hellaswag"), ids.end());
  EXPECT_EQ(GenericQaTemplate().conditional_pattern,
            "question: {question} the answer is:");
}

TEST(TemplateTest, ResolveFromFileOrFailWithIdList) {
  const auto dir = test_support::MakeTempDir("tmpl");
  Template custom = Bundled("obqa");
  custom.id = "custom";
  custom.conditional_pattern = "Q: {question} A:";
  custom.domain_premise = "A:";
  {
    std::ofstream out(dir / "custom.json");
    out << TemplateToJson(custom).dump(2);
  }
  const Template loaded = ResolveTemplate((dir / "custom.json").string());
  EXPECT_EQ(loaded.conditional_pattern, "Q: {question} A:");
  EXPECT_EQ(loaded.id, "custom");
  try {
    ResolveTemplate("nope");
    FAIL() << "expected a config error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("copa"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST(TemplateTest, JsonRoundTripKeepsEveryField) {
  for (const Template& t : BundledTemplates()) {
    const Template back = TemplateFromJson(TemplateToJson(t));
    EXPECT_EQ(TemplateToJson(back), TemplateToJson(t)) << t.id;
  }
  EXPECT_EQ(ThrownCode([] { TemplateFromJson(nlohmann::json{{"id", "x"}}); }),
            ErrorCode::kDataFormat);
}

}  // namespace
}  // namespace sfc
