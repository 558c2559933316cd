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

#include "tabaug/evalkit.h"

#include <cmath>
#include <cstdio>
#include <functional>

#include "tabaug/strings.h"

namespace tabaug {

namespace {

std::string FormatCanonical(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::optional<double> CanonicalNumber(std::string_view canonical) {
  auto n = ParseNumeric(canonical);
  if (!n) return std::nullopt;
  return n->value;
}

}  // namespace

std::string Answer::Display() const { return Join(items, ", "); }

std::string Canonicalize(std::string_view raw) {
  std::string s = ToLower(Trim(raw));
  std::string_view body = s;
  if (!body.empty() && body.back() == '%') body = TrimView(body.substr(0, body.size() - 1));
  if (auto n = ParseNumeric(body)) {
    if (n->integer) return std::to_string(*n->integer);
    return FormatCanonical(n->value);
  }
  return s;
}

std::string CanonicalizeCell(const CellValue& value) {
  if (IsNull(value)) return "";
  if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&value)) return FormatCanonical(*d);
  return Canonicalize(CellToString(value));
}

Answer Canonicalize(const ResultRows& rows) {
  Answer out;
  for (const auto& row : rows) {
    for (const auto& v : row) out.items.push_back(CanonicalizeCell(v));
  }
  return out;
}

Answer CanonicalizeGold(const std::vector<std::string>& gold) {
  Answer out;
  for (const auto& g : gold) out.items.push_back(Canonicalize(g));
  return out;
}

bool ScalarMatch(std::string_view a, std::string_view b) {
  if (a == b) return true;
  auto x = CanonicalNumber(a);
  auto y = CanonicalNumber(b);
  if (!x || !y) return false;
  // The tolerance is applied on the larger of the two scales so that a
  // ratio is compared with a percentage at percentage precision. The slack
  // keeps a decimal difference of exactly 0.01 inclusive.
  constexpr double kLimit = kNumericTolerance + 1e-9;
  return std::fabs(*x - *y) <= kLimit || std::fabs(*x - 100 * *y) <= kLimit ||
         std::fabs(100 * *x - *y) <= kLimit;
}

bool ExactMatch(const Answer& predicted, const std::vector<std::string>& gold) {
  const Answer g = CanonicalizeGold(gold);
  const size_t n = predicted.items.size();
  if (n != g.items.size()) return false;
  if (n == 0) return false;
  if (n == 1) return ScalarMatch(predicted.items[0], g.items[0]);

  // Bipartite matching, since the numeric tolerance is not transitive.
  std::vector<int> owner(n, -1);
  std::function<bool(size_t, std::vector<bool>&)> augment =
      [&](size_t p, std::vector<bool>& seen) {
        for (size_t j = 0; j < n; ++j) {
          if (seen[j] || !ScalarMatch(predicted.items[p], g.items[j])) continue;
          seen[j] = true;
          if (owner[j] < 0 || augment(static_cast<size_t>(owner[j]), seen)) {
            owner[j] = static_cast<int>(p);
            return true;
          }
        }
        return false;
      };
  for (size_t p = 0; p < n; ++p) {
    std::vector<bool> seen(n, false);
    if (!augment(p, seen)) return false;
  }
  return true;
}

EvalRecord Score(std::string question_id, DatasetId dataset,
                 std::vector<std::string> gold, std::optional<Answer> predicted,
                 ExecStatus status, size_t table_tokens,
                 std::optional<int> required_cells) {
  EvalRecord r;
  r.question_id = std::move(question_id);
  r.dataset = dataset;
  r.em = predicted && ExactMatch(*predicted, gold);
  r.gold = std::move(gold);
  r.predicted = std::move(predicted);
  r.outcome_status = status;
  r.table_tokens = table_tokens;
  r.required_cells = required_cells;
  return r;
}

nlohmann::ordered_json EvalRecordToJson(const EvalRecord& record) {
  nlohmann::ordered_json j;
  j["question_id"] = record.question_id;
  j["dataset"] = std::string(DatasetName(record.dataset));
  j["gold"] = record.gold;
  if (record.predicted) {
    j["predicted"] = record.predicted->items;
  } else {
    j["predicted"] = nullptr;
  }
  j["em"] = record.em;
  j["outcome_status"] = std::string(ExecStatusName(record.outcome_status));
  j["table_tokens"] = record.table_tokens;
  if (record.required_cells) {
    j["required_cells"] = *record.required_cells;
  } else {
    j["required_cells"] = nullptr;
  }
  return j;
}

}  // namespace tabaug
