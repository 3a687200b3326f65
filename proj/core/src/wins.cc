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

#include <algorithm>
#include <fstream>

#include "sfc/error.h"

namespace sfc {

std::set<std::string> BestStrategies(const WinsDataset& dataset) {
  std::optional<double> best;
  for (const auto& [name, acc] : dataset.accuracy) {
    if (acc && (!best || *acc > *best)) best = acc;
  }
  std::set<std::string> out;
  if (!best) return out;
  for (const auto& [name, acc] : dataset.accuracy) {
    if (acc && *best - *acc <= kWinsTieTolerance) out.insert(name);
  }
  return out;
}

WinsTable AggregateWins(const std::vector<std::string>& strategies,
                        std::span<const WinsGroup> groups) {
  const std::set<std::string> expected(strategies.begin(), strategies.end());
  if (expected.size() != strategies.size() || strategies.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "wins table needs a non-empty list of distinct strategies");
  }
  WinsTable table;
  table.strategies = strategies;
  for (const WinsGroup& group : groups) {
    WinsRow row;
    row.group = group.group;
    row.datasets = group.datasets.size();
    std::map<std::string, std::size_t> wins;
    for (const WinsDataset& ds : group.datasets) {
      std::set<std::string> keys;
      for (const auto& [name, acc] : ds.accuracy) keys.insert(name);
      if (keys != expected) {
        throw Error(ErrorCode::kInvalidArgument,
                    "dataset '" + ds.dataset + "' in group '" + group.group +
                        "' has a different strategy set");
      }
      const std::set<std::string> best = BestStrategies(ds);
      for (const std::string& s : best) ++wins[s];
      if (ds.marked_best && *ds.marked_best != best) {
        table.flags.push_back({group.group, ds.dataset, best, *ds.marked_best});
      }
    }
    for (const std::string& s : strategies) {
      row.percent[s] = row.datasets == 0
                           ? 0.0
                           : 100.0 * static_cast<double>(wins[s]) /
                                 static_cast<double>(row.datasets);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

WinsGroup WinsGroupFromReports(std::string group,
                               std::span<const EvalReport> reports) {
  WinsGroup out;
  out.group = std::move(group);
  if (reports.empty()) return out;
  std::set<Strategy> first(reports.front().strategies.begin(),
                           reports.front().strategies.end());
  for (const EvalReport& report : reports) {
    if (std::set<Strategy>(report.strategies.begin(), report.strategies.end()) !=
        first) {
      throw Error(ErrorCode::kInvalidArgument,
                  "reports for wins aggregation use different strategy sets");
    }
    WinsDataset ds;
    ds.dataset = report.metadata.dataset_id;
    for (Strategy s : report.strategies) {
      ds.accuracy[std::string(StrategyName(s))] =
          report.n_labeled == 0 ? std::nullopt
                                : std::optional<double>(report.accuracy.at(s));
    }
    out.datasets.push_back(std::move(ds));
  }
  return out;
}

WinsSource WinsSourceFromJson(const nlohmann::json& j) {
  WinsSource out;
  try {
    out.strategies = j.at("strategies").get<std::vector<std::string>>();
    for (const auto& g : j.at("groups")) {
      WinsGroup group;
      group.group = g.at("group").get<std::string>();
      for (const auto& d : g.at("datasets")) {
        WinsDataset ds;
        ds.dataset = d.at("dataset").get<std::string>();
        for (const auto& [name, value] : d.at("accuracy").items()) {
          ds.accuracy[name] =
              value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
        }
        if (d.contains("bold")) {
          ds.marked_best = d.at("bold").get<std::set<std::string>>();
        }
        group.datasets.push_back(std::move(ds));
      }
      out.groups.push_back(std::move(group));
    }
    if (j.contains("published_wins")) {
      out.published_wins =
          j.at("published_wins").get<std::map<std::string, std::map<std::string, double>>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kDataFormat, std::string("malformed wins source: ") + e.what());
  }
  return out;
}

WinsSource LoadWinsSource(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  try {
    return WinsSourceFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kDataFormat, path.string() + " is not JSON: " + e.what());
  }
}

}  // namespace sfc
