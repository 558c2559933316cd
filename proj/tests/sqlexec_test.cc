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

#include <sqlite3.h>

#include "doctest.h"
#include "support/fixtures.h"
#include "tabaug/analysis.h"
#include "tabaug/augment.h"
#include "tabaug/sqlexec.h"

namespace tabaug {
namespace {

TableBundle SaintsBundle() {
  Table base = testing::SaintsTable();
  RawTable aug{{"is_loss", "is_home_game"}, {{"yes", "no"}, {"yes", "no"}, {"yes", "yes"}}};
  Table joined = JoinOnRowId(base, Table::Ingest(aug, "aug", Provenance::kAugmenting));
  return TableBundle{base, std::nullopt, joined.WithName("t1"), BundleMode::kOpenJoined, {}};
}

TableBundle ClosedBundle(const Table& base, const char* json) {
  return BuildBundle(ParseExtraction(std::string("Final output:\n") + json), base);
}

const char* kTatqaSql =
    "SELECT \n"
    "    (SELECT `depreciation_expense_2019` FROM t2 WHERE `row_id` = 0) / \n"
    "    CAST((SELECT `2019` FROM t1 WHERE `row_id` = 3) AS REAL) \n"
    "    AS depreciation_ratio\n"
    "FROM t1\n"
    "LIMIT 1";

const char* kFinqaSql =
    "SELECT \n"
    "    CAST((SELECT `total number ofsharespurchased[a]` FROM t1 WHERE `row_id` = 3) AS REAL) / \n"
    "    (SELECT `share_repurchase_whole_year` FROM t2 WHERE `row_id` = 0) * 100";

double Scalar(const ExecutionOutcome& o) {
  REQUIRE(o.status == ExecStatus::kOk);
  REQUIRE(o.value->size() == 1);
  REQUIRE(o.value->at(0).size() == 1);
  const CellValue& v = o.value->at(0).at(0);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

TEST_CASE("the Saints query counts one home loss") {
  Session s = Session::Load(SaintsBundle());
  auto o = s.Execute("SELECT COUNT(*) FROM t1 WHERE `is_loss` = 'yes' AND `is_home_game` = 'yes'");
  CHECK(Scalar(o) == 1);
  CHECK(s.TableNames() == std::vector<std::string>{"t1"});
}

TEST_CASE("the TATQA query computes 80206/148916") {
  Session s = Session::Load(ClosedBundle(testing::TatqaTable(),
                                         "{\"depreciation_expense_2019\": [\"$80,206\"]}"));
  CHECK(s.TableNames() == std::vector<std::string>{"t1", "t2"});
  CHECK(Scalar(s.Execute(kTatqaSql)) == doctest::Approx(80206.0 / 148916.0).epsilon(1e-12));
}

TEST_CASE("the FinQA query computes the repurchase percentage") {
  Session s = Session::Load(
      ClosedBundle(testing::FinqaTable(), "{\"share_repurchase_whole_year\": [33035204]}"));
  CHECK(Scalar(s.Execute(kFinqaSql)) ==
        doctest::Approx(7751987.0 / 33035204.0 * 100).epsilon(1e-12));
}

TEST_CASE("loaded columns carry storage types and ISO dates") {
  Session s = Session::Load(ClosedBundle(testing::FinqaTable(), "{\"x\": [1]}"));
  auto o = s.Execute("SELECT typeof(`total number ofsharespurchased[a]`), "
                     "typeof(`averageprice paidpershare`), typeof(`period`) FROM t1 LIMIT 1");
  REQUIRE(o.status == ExecStatus::kOk);
  CHECK(std::get<std::string>(o.value->at(0).at(0)) == "integer");
  CHECK(std::get<std::string>(o.value->at(0).at(1)) == "real");
  CHECK(std::get<std::string>(o.value->at(0).at(2)) == "text");

  Session saints = Session::Load(SaintsBundle());
  auto first = saints.Execute("SELECT `game site` FROM t1 ORDER BY `date` DESC LIMIT 1");
  REQUIRE(first.status == ExecStatus::kOk);
  CHECK(std::get<std::string>(first.value->at(0).at(0)) == "louisiana superdome");
  auto date = saints.Execute("SELECT `date` FROM t1 WHERE `row_id` = 0");
  CHECK(std::get<std::string>(date.value->at(0).at(0)) == "2007-09-06");
}

TEST_CASE("each status has a crafted instance") {
  Session s = Session::Load(SaintsBundle());
  CHECK(s.Execute("SELEC COUNT(*) FROM t1").status == ExecStatus::kSyntaxError);
  CHECK(s.Execute("SELECT COUNT(*) FROM t1 WHERE").status == ExecStatus::kSyntaxError);
  CHECK(s.Execute("SELECT `venue` FROM t1").status == ExecStatus::kMissingIdentifier);
  CHECK(s.Execute("SELECT * FROM t9").status == ExecStatus::kMissingIdentifier);
  CHECK(s.Execute("SELECT no_such_fn(1)").status == ExecStatus::kMissingIdentifier);
  CHECK(s.Execute("SELECT substr() FROM t1").status == ExecStatus::kTypeError);
  CHECK(s.Execute("SELECT 1 FROM t1 WHERE `row_id` IN (SELECT 1, 2)").status ==
        ExecStatus::kTypeError);
  CHECK(s.Execute("SELECT COUNT(*) FROM t1 WHERE COUNT(*) > 1").status == ExecStatus::kTypeError);
  CHECK(s.Execute("SELECT * FROM t1 WHERE `is_loss` = 'maybe'").status ==
        ExecStatus::kEmptyResult);
  auto slow = s.Execute(
      "WITH RECURSIVE c(x) AS (SELECT 1 UNION ALL SELECT x + 1 FROM c) SELECT MAX(x) FROM c",
      std::chrono::milliseconds(50));
  CHECK(slow.status == ExecStatus::kEngineError);
  CHECK(slow.message.find("timed out") != std::string::npos);
}

TEST_CASE("the sandbox is read-only and single-statement") {
  Session s = Session::Load(SaintsBundle());
  CHECK(s.Execute("DELETE FROM t1").status == ExecStatus::kSyntaxError);
  CHECK(s.Execute("DROP TABLE t1").status == ExecStatus::kSyntaxError);
  CHECK(s.Execute("ATTACH DATABASE ':memory:' AS x").status == ExecStatus::kSyntaxError);
  CHECK(s.Execute("PRAGMA query_only = 0").status == ExecStatus::kSyntaxError);
  CHECK(s.Execute("SELECT 1; DELETE FROM t1").status == ExecStatus::kSyntaxError);
  CHECK(s.Execute("SELECT 1;").status == ExecStatus::kOk);
  CHECK(s.Execute("").status == ExecStatus::kSyntaxError);
  CHECK(Scalar(s.Execute("SELECT COUNT(*) FROM t1")) == 3);
}

TEST_CASE("invalid candidates do not reach the engine") {
  Session s = Session::Load(SaintsBundle());
  SqlCandidate c;
  c.valid = false;
  c.error = "no SQL";
  CHECK(s.Execute(c).status == ExecStatus::kSyntaxError);
}

TEST_CASE("classification of engine messages") {
  CHECK(ClassifyEngineError(SQLITE_ERROR, "ambiguous column name: x") ==
        ExecStatus::kMissingIdentifier);
  CHECK(ClassifyEngineError(SQLITE_ERROR, "incomplete input") == ExecStatus::kSyntaxError);
  CHECK(ClassifyEngineError(SQLITE_ERROR, "unrecognized token: \"'\"") ==
        ExecStatus::kSyntaxError);
  CHECK(ClassifyEngineError(SQLITE_MISMATCH, "datatype mismatch") == ExecStatus::kTypeError);
  CHECK(ClassifyEngineError(SQLITE_INTERRUPT, "interrupted") == ExecStatus::kEngineError);
  CHECK(ClassifyEngineError(SQLITE_NOMEM, "out of memory") == ExecStatus::kEngineError);
  CHECK(IsExecutionError(ExecStatus::kTypeError));
  CHECK_FALSE(IsExecutionError(ExecStatus::kEmptyResult));
  CHECK_FALSE(IsExecutionError(ExecStatus::kOk));
  for (auto st : {ExecStatus::kOk, ExecStatus::kSyntaxError, ExecStatus::kMissingIdentifier,
                  ExecStatus::kTypeError, ExecStatus::kEmptyResult, ExecStatus::kEngineError}) {
    CHECK(ParseExecStatus(ExecStatusName(st)) == st);
  }
}

}  // namespace
}  // namespace tabaug
