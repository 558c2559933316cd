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

#ifndef TABAUG_EVALKIT_H_
#define TABAUG_EVALKIT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tabaug/cell.h"
#include "tabaug/dataset_id.h"
#include "tabaug/sqlexec.h"

namespace tabaug {

// A canonical answer: one item for scalars, row-major items for results.
struct Answer {
  std::vector<std::string> items;

  // Items joined with ", " for printing.
  std::string Display() const;
  bool operator==(const Answer&) const = default;
};

// Lowercases and trims. Text that is numeric once currency symbols, commas and
// a trailing "%" are removed becomes a plain decimal with at most six
// fractional digits and no trailing zeros. Other text is left as is.
std::string Canonicalize(std::string_view raw);
std::string CanonicalizeCell(const CellValue& value);
Answer Canonicalize(const ResultRows& rows);
Answer CanonicalizeGold(const std::vector<std::string>& gold);

inline constexpr double kNumericTolerance = 1e-2;

// Scalar comparison of two canonical strings.
bool ScalarMatch(std::string_view a, std::string_view b);

// Same number of items and a one-to-one pairing under ScalarMatch.
bool ExactMatch(const Answer& predicted, const std::vector<std::string>& gold);

struct EvalRecord {
  std::string question_id;
  DatasetId dataset = DatasetId::kWikiTQ;
  std::vector<std::string> gold;
  std::optional<Answer> predicted;
  bool em = false;
  ExecStatus outcome_status = ExecStatus::kEngineError;
  size_t table_tokens = 0;
  std::optional<int> required_cells;
};

// Builds a record and scores it.
EvalRecord Score(std::string question_id, DatasetId dataset,
                 std::vector<std::string> gold, std::optional<Answer> predicted,
                 ExecStatus status, size_t table_tokens,
                 std::optional<int> required_cells);

nlohmann::ordered_json EvalRecordToJson(const EvalRecord& record);

struct BucketStat {
  std::string label;
  size_t count = 0;
  size_t em = 0;
  double em_pct = 0;
};

struct Report {
  std::string dataset;
  size_t total = 0;
  size_t em = 0;
  double em_pct = 0;
  size_t execution_errors = 0;
  double execution_error_pct = 0;
  std::vector<BucketStat> by_table_tokens;    // quartiles of the record set
  std::vector<BucketStat> by_required_cells;  // 1, 2, >=3
  size_t required_cells_unknown = 0;
};

// Throws InputError on an empty record list.
Report BuildReport(const std::vector<EvalRecord>& records);

// Upper edges of the first three quartile buckets (nearest-rank).
std::vector<size_t> QuartileEdges(std::vector<size_t> values);

nlohmann::ordered_json ReportToJson(const Report& report);
std::string RenderReportText(const Report& report);

}  // namespace tabaug

#endif  // TABAUG_EVALKIT_H_
