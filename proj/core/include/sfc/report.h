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

// Report serialization: JSON reports, prediction dumps, calibration weights
// and human-readable Markdown / TSV tables.
//
// Machine output keeps raw fractions; tables show accuracies as percentages
// with one decimal and wins percentages with two.

#ifndef SFC_REPORT_H_
#define SFC_REPORT_H_

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "sfc/harness.h"
#include "sfc/scoring.h"
#include "sfc/wins.h"

namespace sfc {

// Placeholder written over timestamps by NormalizeTimestamps.
inline constexpr std::string_view kNormalizedTimestamp = "1970-01-01T00:00:00Z";

nlohmann::ordered_json ReportToJson(const EvalReport& report);
nlohmann::ordered_json FlippedReportToJson(const FlippedReport& report);
nlohmann::ordered_json SweepReportToJson(const SweepReport& report);
nlohmann::ordered_json WinsTableToJson(const WinsTable& table);

// Replaces every "started_at" / "finished_at" value, at any depth.
void NormalizeTimestamps(nlohmann::ordered_json& j);

// One line per (instance, strategy): {instance_id, strategy, scores,
// selected, gold}. Errored instances are omitted.
std::string PredictionsJsonl(const EvalReport& report);

nlohmann::ordered_json CalibrationWeightsToJson(const CalibrationWeights& w);
CalibrationWeights CalibrationWeightsFromJson(const nlohmann::json& j);
CalibrationWeights LoadCalibrationWeights(const std::filesystem::path& path);

// 100 * fraction with one decimal, e.g. 0.5 -> "50.0".
std::string FormatAccuracy(double fraction);

// Rows are datasets, columns the strategies of the first report.
std::string AccuracyTableMarkdown(std::span<const EvalReport> reports);
std::string AccuracyTableTsv(std::span<const EvalReport> reports);

std::string WinsTableMarkdown(const WinsTable& table);
std::string WinsTableTsv(const WinsTable& table);

// Rows are sweep runs plus a final "mean (std)" row.
std::string SweepTableMarkdown(const SweepReport& report);
std::string SweepTableTsv(const SweepReport& report);

// Writes `contents` to `path`, creating parent directories.
void WriteTextFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace sfc

#endif  // SFC_REPORT_H_
