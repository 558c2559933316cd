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

#include <set>

#include "doctest.h"
#include "support/em_oracle.h"
#include "tabaug/evalkit.h"

namespace tabaug {
namespace {

Answer Pred(const std::vector<std::string>& raw) {
  Answer a;
  for (const auto& r : raw) a.items.push_back(Canonicalize(r));
  return a;
}

TEST_CASE("canonical forms") {
  CHECK(Canonicalize("$80,206") == "80206");
  CHECK(Canonicalize("Scotland ") == "scotland");
  CHECK(Canonicalize("23.47%") == "23.47");
  CHECK(Canonicalize("  -$1,200.50 ") == "-1200.5");
  CHECK(Canonicalize("0.50") == "0.5");
  CHECK(Canonicalize("-0.0000001") == "0");
  CHECK(Canonicalize("rca dome") == "rca dome");
  CHECK(CanonicalizeCell(CellValue{80206.0 / 148916.0}) == "0.538599");
  CHECK(CanonicalizeCell(CellValue{std::int64_t{1}}) == "1");
  CHECK(CanonicalizeCell(CellValue{std::string("Jim Clark")}) == "jim clark");
  CHECK(CanonicalizeCell(CellValue{}).empty());
  ResultRows rows{{CellValue{std::int64_t{1}}, CellValue{std::string("A")}},
                  {CellValue{2.5}, CellValue{std::string("b ")}}};
  CHECK(Canonicalize(rows).items == std::vector<std::string>{"1", "a", "2.5", "b"});
}

TEST_CASE("canonicalize is idempotent") {
  for (const auto& pair : testing::GoldenSet()) {
    for (const auto& s : pair.pred) {
      std::string once = Canonicalize(s);
      CHECK(Canonicalize(once) == once);
    }
  }
}

TEST_CASE("exact match examples") {
  CHECK(ExactMatch(Pred({"23.466"}), {"23.47%"}));
  CHECK(ExactMatch(Pred({"0.5386"}), {"53.86%"}));
  CHECK_FALSE(ExactMatch(Pred({"5"}), {"6"}));
  CHECK(ExactMatch(Pred({"1"}), {"1"}));
  CHECK_FALSE(ExactMatch(Pred({"0"}), {"1"}));
  CHECK(ExactMatch(Pred({"Rca Dome"}), {"rca dome"}));
  CHECK_FALSE(ExactMatch(Answer{}, {"1"}));
  CHECK_FALSE(ExactMatch(Answer{}, {}));
}

TEST_CASE("list answers compare as multisets") {
  CHECK(ExactMatch(Pred({"b", "a"}), {"a", "b"}));
  CHECK(ExactMatch(Pred({"a", "a", "b"}), {"a", "b", "a"}));
  CHECK_FALSE(ExactMatch(Pred({"a", "a"}), {"a", "b"}));
  CHECK_FALSE(ExactMatch(Pred({"a"}), {"a", "b"}));
  // Tolerant matches that need reassignment still find a perfect matching.
  CHECK(ExactMatch(Pred({"1.005", "1.0"}), {"1.012", "0.999"}));
}

TEST_CASE("scalar match is symmetric") {
  for (const auto& pair : testing::GoldenSet()) {
    if (pair.pred.size() != 1 || pair.gold.size() != 1) continue;
    std::string a = Canonicalize(pair.pred[0]);
    std::string b = Canonicalize(pair.gold[0]);
    CHECK(ScalarMatch(a, b) == ScalarMatch(b, a));
  }
}

TEST_CASE("golden set agrees with the brute-force oracle") {
  auto golden = testing::GoldenSet();
  REQUIRE(golden.size() == 300);
  size_t disagreements = 0;
  size_t matches = 0;
  for (const auto& pair : golden) {
    for (const auto& s : pair.pred) {
      if (Canonicalize(s) != testing::OracleNormalize(s)) {
        ++disagreements;
        MESSAGE("normalize mismatch for '" << s << "': " << Canonicalize(s) << " vs "
                                           << testing::OracleNormalize(s));
      }
    }
    bool ours = ExactMatch(Pred(pair.pred), pair.gold);
    bool oracle = testing::OracleMatch(pair.pred, pair.gold);
    if (ours != oracle) {
      ++disagreements;
      MESSAGE("match mismatch, first pred '" << pair.pred[0] << "' gold '" << pair.gold[0] << "'");
    }
    matches += oracle ? 1 : 0;
  }
  CHECK(disagreements == 0);
  // The set exercises both outcomes.
  CHECK(matches > 60);
  CHECK(matches < 240);
}

std::vector<EvalRecord> TenRecords() {
  std::vector<EvalRecord> records;
  for (int i = 0; i < 10; ++i) {
    EvalRecord r;
    r.question_id = "q" + std::to_string(i);
    r.em = i < 6;
    r.outcome_status = i >= 8 ? ExecStatus::kSyntaxError
                              : (i == 7 ? ExecStatus::kEmptyResult : ExecStatus::kOk);
    r.table_tokens = static_cast<size_t>(100 + 37 * ((i * 7) % 10));
    if (i % 4 != 3) r.required_cells = 1 + i % 4;
    records.push_back(r);
  }
  return records;
}

TEST_CASE("report totals") {
  Report r = BuildReport(TenRecords());
  CHECK(r.total == 10);
  CHECK(r.em == 6);
  CHECK(r.em_pct == doctest::Approx(60.0));
  CHECK(r.execution_errors == 2);
  CHECK(r.execution_error_pct == doctest::Approx(20.0));
  std::string text = RenderReportText(r);
  CHECK(text.find("60.00") != std::string::npos);
  CHECK(text.find("20.00") != std::string::npos);
  auto j = ReportToJson(r);
  CHECK(j["total"] == 10);
  CHECK_THROWS_AS(BuildReport({}), InputError);
}

TEST_CASE("report buckets partition the records") {
  auto records = TenRecords();
  Report r = BuildReport(records);
  REQUIRE(r.by_table_tokens.size() == 4);
  size_t covered = 0;
  size_t em = 0;
  for (const auto& b : r.by_table_tokens) {
    covered += b.count;
    em += b.em;
  }
  CHECK(covered == records.size());
  CHECK(em == 6);

  REQUIRE(r.by_required_cells.size() == 3);
  size_t known = 0;
  for (const auto& b : r.by_required_cells) known += b.count;
  CHECK(known + r.required_cells_unknown == records.size());
  CHECK(r.required_cells_unknown == 2);
  CHECK(r.by_required_cells[0].label == "1");
  CHECK(r.by_required_cells[2].label == ">=3");
  CHECK(r.by_required_cells[2].count == 2);

  // Property over random token counts: every record lands in exactly one bucket.
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<EvalRecord> rs(1 + rng() % 40);
    for (auto& x : rs) x.table_tokens = rng() % 50;
    size_t total = 0;
    for (const auto& b : BuildReport(rs).by_table_tokens) total += b.count;
    CHECK(total == rs.size());
  }
}

TEST_CASE("quartile edges use nearest rank") {
  auto e = QuartileEdges({10, 20, 30, 40, 50, 60, 70, 80});
  CHECK(e == std::vector<size_t>{20, 40, 60});
  CHECK(QuartileEdges({5}) == std::vector<size_t>{5, 5, 5});
}

TEST_CASE("scored records serialize") {
  auto rec = Score("nu-0", DatasetId::kWikiTQ, {"1"}, Pred({"1"}), ExecStatus::kOk, 120, 2);
  CHECK(rec.em);
  auto j = EvalRecordToJson(rec);
  CHECK(j["outcome_status"] == "ok");
  CHECK(j["required_cells"] == 2);
  auto none = Score("x", DatasetId::kTatQA, {"1"}, std::nullopt, ExecStatus::kTypeError, 1,
                    std::nullopt);
  CHECK_FALSE(none.em);
  CHECK(EvalRecordToJson(none)["predicted"].is_null());
}

}  // namespace
}  // namespace tabaug
