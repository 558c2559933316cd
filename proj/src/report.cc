// Copyright 2026 The tabaug Authors.
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

#include <algorithm>
#include <cstdio>

#include "tabaug/error.h"
#include "tabaug/evalkit.h"

namespace tabaug {

namespace {

double Pct(size_t part, size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

std::string Fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void Finish(BucketStat& b) { b.em_pct = Pct(b.em, b.count); }

}  // namespace

std::vector<size_t> QuartileEdges(std::vector<size_t> values) {
  if (values.empty()) return {0, 0, 0};
  std::sort(values.begin(), values.end());
  std::vector<size_t> edges;
  const size_t n = values.size();
  for (size_t q = 1; q <= 3; ++q) {
    size_t rank = (q * n + 3) / 4;  // ceil(q*n/4)
    edges.push_back(values[std::max<size_t>(rank, 1) - 1]);
  }
  return edges;
}

Report BuildReport(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw InputError("cannot build a report from zero records");
  Report rep;
  rep.dataset = std::string(DatasetName(records.front().dataset));
  rep.total = records.size();

  std::vector<size_t> tokens;
  for (const auto& r : records) tokens.push_back(r.table_tokens);
  const auto edges = QuartileEdges(tokens);

  rep.by_table_tokens.resize(4);
  rep.by_table_tokens[0].label = "<=" + std::to_string(edges[0]);
  rep.by_table_tokens[1].label =
      "(" + std::to_string(edges[0]) + ", " + std::to_string(edges[1]) + "]";
  rep.by_table_tokens[2].label =
      "(" + std::to_string(edges[1]) + ", " + std::to_string(edges[2]) + "]";
  rep.by_table_tokens[3].label = ">" + std::to_string(edges[2]);
  rep.by_required_cells.resize(3);
  rep.by_required_cells[0].label = "1";
  rep.by_required_cells[1].label = "2";
  rep.by_required_cells[2].label = ">=3";

  for (const auto& r : records) {
    if (r.em) ++rep.em;
    if (IsExecutionError(r.outcome_status)) ++rep.execution_errors;

    size_t b = 3;
    if (r.table_tokens <= edges[0]) b = 0;
    else if (r.table_tokens <= edges[1]) b = 1;
    else if (r.table_tokens <= edges[2]) b = 2;
    ++rep.by_table_tokens[b].count;
    if (r.em) ++rep.by_table_tokens[b].em;

    if (!r.required_cells || *r.required_cells <= 0) {
      ++rep.required_cells_unknown;
      continue;
    }
    size_t c = static_cast<size_t>(std::min(*r.required_cells, 3)) - 1;
    ++rep.by_required_cells[c].count;
    if (r.em) ++rep.by_required_cells[c].em;
  }
  rep.em_pct = Pct(rep.em, rep.total);
  rep.execution_error_pct = Pct(rep.execution_errors, rep.total);
  for (auto& b : rep.by_table_tokens) Finish(b);
  for (auto& b : rep.by_required_cells) Finish(b);
  return rep;
}

nlohmann::ordered_json ReportToJson(const Report& report) {
  auto buckets = [](const std::vector<BucketStat>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& b : v) {
      arr.push_back({{"label", b.label},
                     {"count", b.count},
                     {"em", b.em},
                     {"em_pct", b.em_pct}});
    }
    return arr;
  };
  nlohmann::ordered_json j;
  j["dataset"] = report.dataset;
  j["total"] = report.total;
  j["em"] = report.em;
  j["em_pct"] = report.em_pct;
  j["execution_errors"] = report.execution_errors;
  j["execution_error_pct"] = report.execution_error_pct;
  j["by_table_tokens"] = buckets(report.by_table_tokens);
  j["by_required_cells"] = buckets(report.by_required_cells);
  j["required_cells_unknown"] = report.required_cells_unknown;
  return j;
}

std::string RenderReportText(const Report& report) {
  std::string out;
  auto line = [&out](const std::string& key, const std::string& value) {
    std::string k = key;
    k.resize(std::max<size_t>(k.size(), 24), ' ');
    out += k + value + "\n";
  };
  line("dataset", report.dataset);
  line("questions", std::to_string(report.total));
  line("exact match", Fixed2(report.em_pct) + " (" + std::to_string(report.em) + ")");
  line("execution error %", Fixed2(report.execution_error_pct) + " (" +
                                std::to_string(report.execution_errors) + ")");
  out += "\nEM by table tokens\n";
  for (const auto& b : report.by_table_tokens) {
    line("  " + b.label, Fixed2(b.em_pct) + " (" + std::to_string(b.em) + "/" +
                             std::to_string(b.count) + ")");
  }
  out += "\nEM by required cells\n";
  for (const auto& b : report.by_required_cells) {
    line("  " + b.label, Fixed2(b.em_pct) + " (" + std::to_string(b.em) + "/" +
                             std::to_string(b.count) + ")");
  }
  line("  unknown", std::to_string(report.required_cells_unknown));
  return out;
}

}  // namespace tabaug
