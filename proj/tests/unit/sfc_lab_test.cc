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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sfc/enumeration.h"
#include "sfc/error.h"
#include "test_support.h"

namespace sfc {
namespace {

// Accuracies by brute-force enumeration of the lab LM, independent of the
// backend and harness.
struct EnumeratedAccuracy {
  double lm = 0.0;
  double pmi_dc = 0.0;
};

EnumeratedAccuracy Enumerate(const SfcLabSpec& spec) {
  const SequenceEnumeration e(BuildSfcLabLm(spec));
  const Template tmpl = SfcLabTemplate(spec);
  EnumeratedAccuracy acc;
  const auto instances = SfcLabInstances(spec);
  for (const Instance& inst : instances) {
    const auto rendered = Render(inst, tmpl);
    int best_lm = 0;
    int best_pmi = 0;
    double top_lm = -1.0;
    double top_pmi = -1.0;
    for (const RenderedOption& r : rendered) {
      const double cond = e.ConditionalProbability(r.conditional_context, r.continuation());
      const double prior = e.ConditionalProbability(r.domain_context, r.continuation());
      if (cond > top_lm) {
        top_lm = cond;
        best_lm = r.option_index;
      }
      if (cond / prior > top_pmi) {
        top_pmi = cond / prior;
        best_pmi = r.option_index;
      }
    }
    acc.lm += best_lm == *inst.gold ? 1.0 : 0.0;
    acc.pmi_dc += best_pmi == *inst.gold ? 1.0 : 0.0;
  }
  acc.lm /= static_cast<double>(instances.size());
  acc.pmi_dc /= static_cast<double>(instances.size());
  return acc;
}

TEST(SfcLabTest, DefaultSpecShape) {
  const SfcLabSpec spec = DefaultSfcLabSpec();
  ASSERT_EQ(spec.concepts.size(), 4u);
  const SfcLabConcept& c = spec.concepts[3];
  EXPECT_NEAR(c.listed.conditional, 0.25, 1e-12);
  EXPECT_NEAR(c.paraphrases[0].conditional + c.paraphrases[1].conditional, 0.35, 1e-12);
  EXPECT_NEAR(c.distractors[0].conditional, 0.38, 1e-12);
  EXPECT_NEAR(c.distractors[0].prior, 0.19, 1e-12);
  EXPECT_TRUE(CompetitionHolds(c));
  EXPECT_FALSE(CompetitionHolds(DefaultSfcLabSpec(0.0).concepts[0]));
  EXPECT_THROW(DefaultSfcLabSpec(0.6), Error);
}

TEST(SfcLabTest, BuiltLmRealizesTheConfiguredConditionals) {
  const SfcLabSpec spec = DefaultSfcLabSpec();
  const SequenceEnumeration e(BuildSfcLabLm(spec));
  for (const SfcLabConcept& c : spec.concepts) {
    const std::string ctx = c.question + " " + spec.domain_premise;
    EXPECT_NEAR(e.ConditionalProbability(ctx, " " + c.listed.text + "."),
                c.listed.conditional, 1e-12);
    EXPECT_NEAR(e.ConditionalProbability(spec.domain_premise, " " + c.listed.text + "."),
                c.listed.prior, 1e-12);
  }
}

TEST(SfcLabTest, DefaultRunShowsSurfaceFormCompetition) {
  const SfcLabResult r = RunSfcLab(DefaultSfcLabSpec());
  // The listed form keeps 0.25 of the conditional mass, below the 0.28 and
  // 0.38 distractors of concepts 3 and 4. PMI_DC divides by the priors:
  // 0.25 / 0.02 for the listed form against 2 for every distractor.
  EXPECT_EQ(r.report.accuracy.at(Strategy::kLm), 0.5);
  EXPECT_EQ(r.report.accuracy.at(Strategy::kPmiDc), 1.0);
  const EnumeratedAccuracy oracle = Enumerate(DefaultSfcLabSpec());
  EXPECT_EQ(r.report.accuracy.at(Strategy::kLm), oracle.lm);
  EXPECT_EQ(r.report.accuracy.at(Strategy::kPmiDc), oracle.pmi_dc);
  EXPECT_EQ(r.competition, (std::vector<bool>{true, true, true, true}));
}

TEST(SfcLabTest, SweepIsNonincreasingInParaphraseMass) {
  const std::vector<double> masses = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  const auto points = SweepParaphraseMass(masses);
  const std::vector<double> expected_lm = {1.0, 1.0, 1.0, 0.75, 0.5, 0.25};
  ASSERT_EQ(points.size(), masses.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    EXPECT_EQ(points[i].lm_accuracy, expected_lm[i]) << masses[i];
    EXPECT_EQ(points[i].pmi_dc_accuracy, 1.0) << masses[i];
    EXPECT_EQ(points[i].lm_accuracy, Enumerate(DefaultSfcLabSpec(masses[i])).lm);
  }
}

TEST(SfcLabTest, ValidationAndJsonRoundTrip) {
  SfcLabSpec spec = DefaultSfcLabSpec();
  const SfcLabSpec back = SfcLabSpecFromJson(SfcLabSpecToJson(spec));
  EXPECT_EQ(SfcLabSpecToJson(back), SfcLabSpecToJson(spec));

  SfcLabSpec bad = spec;
  bad.concepts[0].listed.conditional = 0.9;
  EXPECT_THROW(ValidateSfcLabSpec(bad), Error);
  bad = spec;
  bad.concepts[0].gold_index = 5;
  EXPECT_THROW(ValidateSfcLabSpec(bad), Error);
  bad = spec;
  bad.concepts[1].distractors[0].text = bad.concepts[1].listed.text;
  EXPECT_THROW(ValidateSfcLabSpec(bad), Error);
  bad = spec;
  bad.concepts[0].listed.prior = -0.1;
  EXPECT_THROW(ValidateSfcLabSpec(bad), Error);

  const SfcLabResult r = RunSfcLab(spec);
  const auto j = SfcLabResultToJson(spec, r);
  EXPECT_TRUE(j.contains("competition") || j.contains("concepts")) << j.dump();
}

}  // namespace
}  // namespace sfc
