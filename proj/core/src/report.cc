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

#include "sfc/report.h"

#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/core.h>

#include "sfc/error.h"

namespace sfc {
namespace {

using Rows = std::vector<std::vector<std::string>>;

std::string Markdown(const std::vector<std::string>& header, const Rows& rows) {
  std::string out = "|";
  for (const std::string& h : header) out += " " + h + " |";
  out += "\n|";
  for (std::size_t i = 0; i < header.size(); ++i) out += i == 0 ? " --- |" : " ---: |";
  out += "\n";
  for (const auto& row : rows) {
    out += "|";
    for (const std::string& cell : row) out += " " + cell + " |";
    out += "\n";
  }
  return out;
}

std::string Tsv(const std::vector<std::string>& header, const Rows& rows) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += '\t';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out;
}

std::vector<std::string> StrategyHeader(std::string first,
                                        const std::vector<Strategy>& strategies) {
  std::vector<std::string> header = {std::move(first)};
  for (Strategy s : strategies) header.emplace_back(StrategyName(s));
  return header;
}

Rows AccuracyRows(std::span<const EvalReport> reports) {
  Rows rows;
  for (const EvalReport& r : reports) {
    std::vector<std::string> row = {r.metadata.dataset_id};
    for (Strategy s : reports.front().strategies) {
      auto it = r.accuracy.find(s);
      row.push_back(it == r.accuracy.end() || r.n_labeled == 0
                        ? "-"
                        : FormatAccuracy(it->second));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> WinsHeader(const WinsTable& table) {
  std::vector<std::string> header = {"group"};
  header.insert(header.end(), table.strategies.begin(), table.strategies.end());
  return header;
}

Rows WinsRows(const WinsTable& table) {
  Rows rows;
  for (const WinsRow& row : table.rows) {
    std::vector<std::string> cells = {row.group};
    for (const std::string& s : table.strategies) {
      cells.push_back(fmt::format("{:.2f}", row.percent.at(s)));
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

Rows SweepRows(const SweepReport& report) {
  Rows rows;
  if (report.runs.empty()) return rows;
  const auto& strategies = report.runs.front().strategies;
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    std::vector<std::string> row = {report.labels[i]};
    for (Strategy s : strategies) row.push_back(FormatAccuracy(report.runs[i].accuracy.at(s)));
    rows.push_back(std::move(row));
  }
  std::vector<std::string> summary = {"mean (std)"};
  for (Strategy s : strategies) {
    const SweepStat& st = report.stats.at(s);
    summary.push_back(fmt::format("{} ({:.1f})", FormatAccuracy(st.mean),
                                  100.0 * st.std_dev));
  }
  rows.push_back(std::move(summary));
  return rows;
}

nlohmann::ordered_json StrategyMap(const std::map<Strategy, double>& m,
                                   const std::vector<Strategy>& order) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (Strategy s : order) {
    if (auto it = m.find(s); it != m.end()) j[std::string(StrategyName(s))] = it->second;
  }
  return j;
}

}  // namespace

std::string FormatAccuracy(double fraction) {
  return fmt::format("{:.1f}", 100.0 * fraction);
}

nlohmann::ordered_json ReportToJson(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = EvalReport::kSchemaVersion;
  const RunMetadata& m = report.metadata;
  j["metadata"] = {{"model_id", m.model_id},
                   {"dataset_id", m.dataset_id},
                   {"split", m.split},
                   {"template_id", m.template_id},
                   {"template_version", m.template_version},
                   {"seed", m.seed},
                   {"k_shot", m.k_shot},
                   {"started_at", m.started_at},
                   {"finished_at", m.finished_at}};
  nlohmann::ordered_json strategies = nlohmann::ordered_json::array();
  for (Strategy s : report.strategies) strategies.push_back(StrategyName(s));
  j["strategies"] = strategies;
  j["accuracy"] = StrategyMap(report.accuracy, report.strategies);
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (Strategy s : report.strategies) {
    counts[std::string(StrategyName(s))] = report.correct_counts.at(s);
  }
  j["correct_counts"] = counts;
  j["n_instances"] = report.n_instances;
  j["n_scored"] = report.n_scored;
  j["n_labeled"] = report.n_labeled;
  j["n_errored"] = report.n_errored;
  if (report.calibration) j["calibration"] = CalibrationWeightsToJson(*report.calibration);

  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const InstanceRecord& rec : report.records) {
    nlohmann::ordered_json r;
    r["instance_id"] = rec.instance_id;
    r["gold"] = rec.gold ? nlohmann::ordered_json(*rec.gold) : nlohmann::ordered_json(nullptr);
    if (rec.errored()) {
      r["error"] = *rec.error;
    } else {
      nlohmann::ordered_json scores = nlohmann::ordered_json::object();
      nlohmann::ordered_json selected = nlohmann::ordered_json::object();
      nlohmann::ordered_json correct = nlohmann::ordered_json::object();
      for (Strategy s : report.strategies) {
        const std::string name(StrategyName(s));
        scores[name] = rec.scores.at(s);
        selected[name] = rec.selected.at(s);
        if (rec.gold) correct[name] = rec.correct(s);
      }
      r["scores"] = scores;
      r["selected"] = selected;
      if (rec.gold) r["correct"] = correct;
    }
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  return j;
}

nlohmann::ordered_json FlippedReportToJson(const FlippedReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = EvalReport::kSchemaVersion;
  nlohmann::ordered_json identity = nlohmann::ordered_json::array();
  for (Strategy s : report.identity_strategies) identity.push_back(StrategyName(s));
  j["identity_strategies"] = identity;
  j["selection_identity"] = report.selection_identity;
  j["original_flipped_agreement"] =
      StrategyMap(report.original_flipped_agreement, report.original.strategies);
  j["original"] = ReportToJson(report.original);
  j["flipped"] = ReportToJson(report.flipped);
  return j;
}

nlohmann::ordered_json SweepReportToJson(const SweepReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = EvalReport::kSchemaVersion;
  j["std_convention"] = "sample (n-1)";
  j["labels"] = report.labels;
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();
  if (!report.runs.empty()) {
    for (Strategy s : report.runs.front().strategies) {
      const SweepStat& st = report.stats.at(s);
      stats[std::string(StrategyName(s))] = {
          {"accuracies", st.accuracies}, {"mean", st.mean}, {"std", st.std_dev}};
    }
  }
  j["stats"] = std::move(stats);
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const EvalReport& r : report.runs) runs.push_back(ReportToJson(r));
  j["runs"] = std::move(runs);
  return j;
}

nlohmann::ordered_json WinsTableToJson(const WinsTable& table) {
  nlohmann::ordered_json j;
  j["strategies"] = table.strategies;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const WinsRow& row : table.rows) {
    nlohmann::ordered_json percent = nlohmann::ordered_json::object();
    for (const std::string& s : table.strategies) percent[s] = row.percent.at(s);
    rows.push_back({{"group", row.group}, {"datasets", row.datasets}, {"percent", percent}});
  }
  j["rows"] = std::move(rows);
  nlohmann::ordered_json flags = nlohmann::ordered_json::array();
  for (const WinsFlag& f : table.flags) {
    flags.push_back({{"group", f.group},
                     {"dataset", f.dataset},
                     {"computed_best", f.computed_best},
                     {"marked_best", f.marked_best}});
  }
  j["flags"] = std::move(flags);
  return j;
}

void NormalizeTimestamps(nlohmann::ordered_json& j) {
  if (j.is_object()) {
    for (auto& [key, value] : j.items()) {
      if ((key == "started_at" || key == "finished_at") && value.is_string()) {
        value = kNormalizedTimestamp;
      } else {
        NormalizeTimestamps(value);
      }
    }
  } else if (j.is_array()) {
    for (auto& v : j) NormalizeTimestamps(v);
  }
}

std::string PredictionsJsonl(const EvalReport& report) {
  std::string out;
  for (const InstanceRecord& rec : report.records) {
    if (rec.errored()) continue;
    for (Strategy s : report.strategies) {
      nlohmann::ordered_json line;
      line["instance_id"] = rec.instance_id;
      line["strategy"] = StrategyName(s);
      line["scores"] = rec.scores.at(s);
      line["selected"] = rec.selected.at(s);
      line["gold"] =
          rec.gold ? nlohmann::ordered_json(*rec.gold) : nlohmann::ordered_json(nullptr);
      out += line.dump() + "\n";
    }
  }
  return out;
}

nlohmann::ordered_json CalibrationWeightsToJson(const CalibrationWeights& w) {
  nlohmann::ordered_json j;
  j["per_label_scale"] = w.per_label_scale;
  j["bias"] = w.bias;
  return j;
}

CalibrationWeights CalibrationWeightsFromJson(const nlohmann::json& j) {
  CalibrationWeights w;
  try {
    w.per_label_scale = j.at("per_label_scale").get<std::map<std::string, double>>();
    w.bias = j.at("bias").get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kDataFormat,
                std::string("malformed calibration weights: ") + e.what());
  }
  w.Validate();
  return w;
}

CalibrationWeights LoadCalibrationWeights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  try {
    return CalibrationWeightsFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kDataFormat, path.string() + " is not JSON: " + e.what());
  }
}

std::string AccuracyTableMarkdown(std::span<const EvalReport> reports) {
  if (reports.empty()) return "";
  return Markdown(StrategyHeader("dataset", reports.front().strategies),
                  AccuracyRows(reports));
}

std::string AccuracyTableTsv(std::span<const EvalReport> reports) {
  if (reports.empty()) return "";
  return Tsv(StrategyHeader("dataset", reports.front().strategies), AccuracyRows(reports));
}

std::string WinsTableMarkdown(const WinsTable& table) {
  return Markdown(WinsHeader(table), WinsRows(table));
}

std::string WinsTableTsv(const WinsTable& table) {
  return Tsv(WinsHeader(table), WinsRows(table));
}

std::string SweepTableMarkdown(const SweepReport& report) {
  if (report.runs.empty()) return "";
  return Markdown(StrategyHeader("prompt", report.runs.front().strategies),
                  SweepRows(report));
}

std::string SweepTableTsv(const SweepReport& report) {
  if (report.runs.empty()) return "";
  return Tsv(StrategyHeader("prompt", report.runs.front().strategies), SweepRows(report));
}

void WriteTextFile(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kConfig, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::kConfig, "failed writing " + path.string());
}

}  // namespace sfc
