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

#include <random>

#include "doctest.h"
#include "support/fixtures.h"
#include "tabaug/cell.h"
#include "tabaug/csv.h"
#include "tabaug/strings.h"
#include "tabaug/tabular.h"

namespace tabaug {
namespace {

TEST_CASE("ParseNumeric accepts currency, commas, signs") {
  CHECK(ParseNumeric("$80,206")->integer == 80206);
  CHECK(ParseNumeric(" -1,234.5 ")->value == doctest::Approx(-1234.5));
  CHECK(ParseNumeric("-$5")->integer == -5);
  CHECK(ParseNumeric("$-5")->integer == -5);
  CHECK(ParseNumeric("€12")->integer == 12);
  CHECK_FALSE(ParseNumeric("12%"));
  CHECK_FALSE(ParseNumeric("1e5"));
  CHECK_FALSE(ParseNumeric("1.2.3"));
  CHECK_FALSE(ParseNumeric(""));
  CHECK_FALSE(ParseNumeric("$"));
  CHECK_FALSE(ParseNumeric("l 41-10"));
  CHECK(ParseNumeric("107.59")->value == doctest::Approx(107.59));
  CHECK_FALSE(ParseNumeric("107.59")->integer);
}

TEST_CASE("ParseDate accepts padded and unpadded forms") {
  CHECK(ParseDate("2007-9-6")->Iso() == "2007-09-06");
  CHECK(ParseDate("2007-09-16")->Iso() == "2007-09-16");
  CHECK_FALSE(ParseDate("2007-13-01"));
  CHECK_FALSE(ParseDate("2007-2-30"));
  CHECK_FALSE(ParseDate("9/6/2007"));
}

TEST_CASE("Ingest prepends row_id and infers types") {
  Table t = testing::SaintsTable();
  REQUIRE(t.column_count() == 4);
  CHECK(t.columns()[0].name == "row_id");
  CHECK(t.columns()[0].type == ColumnType::kInt);
  CHECK(t.columns()[1].type == ColumnType::kDate);
  CHECK(t.columns()[2].type == ColumnType::kText);
  CHECK(t.columns()[3].type == ColumnType::kText);
  CHECK(std::get<std::int64_t>(t.cell(2, 0).value) == 2);
  CHECK(t.cell(0, 1).raw == "2007-9-6");
  CHECK(std::get<Date>(t.cell(0, 1).value).Iso() == "2007-09-06");
}

TEST_CASE("type inference uses the 80 percent rule") {
  std::vector<std::string> four_of_five{"1", "2", "3", "4", "n/a"};
  CHECK(InferColumnType(four_of_five) == ColumnType::kInt);
  std::vector<std::string> three_of_four{"1", "2", "3", "n/a"};
  CHECK(InferColumnType(three_of_four) == ColumnType::kText);
  std::vector<std::string> reals{"1.5", "2", "$3,000.25"};
  CHECK(InferColumnType(reals) == ColumnType::kReal);
  std::vector<std::string> with_blanks{"1", "", "", "2"};
  CHECK(InferColumnType(with_blanks) == ColumnType::kInt);
  std::vector<std::string> percents{"5%", "6%"};
  CHECK(InferColumnType(percents) == ColumnType::kText);

  Table fin = testing::FinqaTable();
  CHECK(fin.columns()[2].type == ColumnType::kInt);
  CHECK(fin.columns()[3].type == ColumnType::kReal);
  CHECK(fin.columns()[5].type == ColumnType::kText);
}

TEST_CASE("cells that fail coercion keep their text") {
  RawTable raw{{"n"}, {{"1"}, {"2"}, {"3"}, {"4"}, {"n/a"}, {""}}};
  Table t = Table::Ingest(raw, "t");
  CHECK(t.columns()[1].type == ColumnType::kInt);
  CHECK(std::get<std::string>(t.cell(4, 1).value) == "n/a");
  CHECK(IsNull(t.cell(5, 1).value));
}

TEST_CASE("ragged and empty inputs are rejected") {
  RawTable ragged{{"a", "b"}, {{"1", "2"}, {"3"}}};
  CHECK_THROWS_AS(Table::Ingest(ragged, "t"), RaggedInputError);
  RawTable empty{{}, {}};
  CHECK_THROWS_AS(Table::Ingest(empty, "t"), EmptyHeaderError);
}

TEST_CASE("names are sanitized and deduplicated") {
  CHECK(SanitizeIdentifier("  game\tsite ") == "game site");
  CHECK(SanitizeIdentifier("a`b") == "ab");
  CHECK(SanitizeIdentifier("") == "col");
  CHECK(SanitizeIdentifier("result/score") == "result/score");
  RawTable raw{{"Name", "name", "row_id", ""}, {{"a", "b", "c", "d"}}};
  Table t = Table::Ingest(raw, "t");
  CHECK(t.columns()[1].name == "Name");
  CHECK(t.columns()[2].name == "name_2");
  CHECK(t.columns()[3].name == "row_id_2");
  CHECK(t.columns()[4].name == "col");
  CHECK(t.columns()[3].raw_name == "row_id");
}

TEST_CASE("FindColumn is exact first, then case-insensitive") {
  RawTable raw{{"Driver", "driver"}, {{"a", "b"}}};
  Table t = Table::Ingest(raw, "t");
  CHECK(*t.FindColumn("driver") == 2);
  CHECK(*t.FindColumn("Driver") == 1);
  CHECK(*t.FindColumn("DRIVER_2") == 2);
  CHECK_FALSE(t.FindColumn("country"));
}

TEST_CASE("JoinOnRowId appends columns and checks row counts") {
  Table base = testing::SaintsTable();
  RawTable aug_raw{{"is_loss", "date"}, {{"yes", "x"}, {"yes", "y"}, {"yes", "z"}}};
  Table aug = Table::Ingest(aug_raw, "aug", Provenance::kAugmenting);
  Table joined = JoinOnRowId(base, aug);
  CHECK(joined.provenance() == Provenance::kJoined);
  REQUIRE(joined.column_count() == 6);
  CHECK(joined.columns()[4].name == "is_loss");
  CHECK(joined.columns()[5].name == "date_2");
  CHECK(joined.cell(1, 4).raw == "yes");

  RawTable short_raw{{"x"}, {{"1"}}};
  CHECK_THROWS_AS(JoinOnRowId(base, Table::Ingest(short_raw, "a")), RowCountMismatchError);
}

TEST_CASE("ParseDelimited handles quotes, embedded newlines, CRLF") {
  RawTable t = ParseDelimited("a,b\r\n\"x, y\",\"he said \"\"hi\"\"\"\n\"multi\nline\",2\n\n", ',');
  REQUIRE(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "x, y");
  CHECK(t.rows[0][1] == "he said \"hi\"");
  CHECK(t.rows[1][0] == "multi\nline");
  CHECK_THROWS_AS(ParseDelimited("a\n\"open", ','), InputError);
  RawTable tsv = ParseDelimited("a\tb\n1\t\n", '\t');
  CHECK(tsv.rows[0] == std::vector<std::string>{"1", ""});
}

TEST_CASE("ReadTableFile picks the delimiter from the extension") {
  RawTable csv = ReadTableFile(testing::FixturePath("wikitq-mini/csv/200-csv/0.csv"));
  RawTable tsv = ReadTableFile(testing::FixturePath("wikitq-mini/csv/200-csv/0.tsv"));
  CHECK(csv.header == tsv.header);
  CHECK(csv.rows == tsv.rows);
  CHECK_THROWS_AS(ReadTableFile("/nonexistent/table.csv"), InputError);
}

TEST_CASE("Ingest is deterministic") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    RawTable raw;
    int cols = 1 + static_cast<int>(rng() % 4);
    for (int c = 0; c < cols; ++c) raw.header.push_back("c" + std::to_string(rng() % 3));
    int rows = static_cast<int>(rng() % 6);
    for (int r = 0; r < rows; ++r) {
      std::vector<std::string> row;
      for (int c = 0; c < cols; ++c) {
        switch (rng() % 4) {
          case 0: row.push_back(std::to_string(rng() % 1000)); break;
          case 1: row.push_back("x" + std::to_string(rng() % 9)); break;
          case 2: row.push_back(""); break;
          default: row.push_back("2001-1-" + std::to_string(1 + rng() % 28));
        }
      }
      raw.rows.push_back(row);
    }
    Table a = Table::Ingest(raw, "t");
    Table b = Table::Ingest(raw, "t");
    CHECK(a == b);
    CHECK(a.row_count() == raw.rows.size());
    for (size_t r = 0; r < a.row_count(); ++r) {
      CHECK(std::get<std::int64_t>(a.cell(r, 0).value) == static_cast<std::int64_t>(r));
    }
  }
}

}  // namespace
}  // namespace tabaug
