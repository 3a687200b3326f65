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

// Wins/ties aggregation across datasets.
//
// For each group (typically one model) and strategy, the wins percentage is
// the share of the group's datasets on which the strategy's accuracy equals
// the maximum over strategies. Ties credit every tied strategy, so a row can
// sum to more than 100. A missing cell earns no credit but still counts in
// the denominator.

#ifndef SFC_WINS_H_
#define SFC_WINS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sfc/harness.h"

namespace sfc {

// Accuracies compare equal when they differ by at most this much.
inline constexpr double kWinsTieTolerance = 1e-9;

struct WinsDataset {
  std::string dataset;
  // One entry per strategy of the table; nullopt marks a missing cell.
  std::map<std::string, std::optional<double>> accuracy;
  // Strategies marked best in a source table, checked against the computed
  // maximum when present.
  std::optional<std::set<std::string>> marked_best;
};

struct WinsGroup {
  std::string group;
  std::vector<WinsDataset> datasets;
};

struct WinsRow {
  std::string group;
  std::size_t datasets = 0;
  std::map<std::string, double> percent;
};

// A dataset whose computed best set differs from its marked best set.
struct WinsFlag {
  std::string group;
  std::string dataset;
  std::set<std::string> computed_best;
  std::set<std::string> marked_best;
};

struct WinsTable {
  std::vector<std::string> strategies;
  std::vector<WinsRow> rows;
  std::vector<WinsFlag> flags;
};

// Strategies that attain the dataset's maximum; empty if every cell is
// missing.
std::set<std::string> BestStrategies(const WinsDataset& dataset);

// Throws kInvalidArgument when a dataset's strategy keys differ from
// `strategies`.
WinsTable AggregateWins(const std::vector<std::string>& strategies,
                        std::span<const WinsGroup> groups);

// One WinsDataset per report. Throws kInvalidArgument when the reports do
// not share one strategy set.
WinsGroup WinsGroupFromReports(std::string group,
                               std::span<const EvalReport> reports);

// Source accuracy table with optional published wins rows, as stored in
// JSON:
//
//   {"strategies": ["unc", ...],
//    "groups": [{"group": "175B", "datasets": [
//        {"dataset": "COPA", "accuracy": {"unc": 57.8, "cc": null, ...},
//         "bold": ["pmi_dc"]}]}],
//    "published_wins": {"175B": {"unc": 6.25, ...}}}
struct WinsSource {
  std::vector<std::string> strategies;
  std::vector<WinsGroup> groups;
  std::map<std::string, std::map<std::string, double>> published_wins;
};

WinsSource WinsSourceFromJson(const nlohmann::json& j);
WinsSource LoadWinsSource(const std::filesystem::path& path);

}  // namespace sfc

#endif  // SFC_WINS_H_
