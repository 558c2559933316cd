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
#include "json.hpp"
#include "support/fixtures.h"
#include "tabaug/analysis.h"
#include "tabaug/scripted_client.h"

namespace tabaug {
namespace {

const char* kSaintsPlan =
    "Transformation: \nSolution outline:\n1. Find the losing games.\n"
    "Further analysis:\nStep 3 can be done with a SQL query.\n"
    "Final output:\n"
    "`is_loss` = @(\"Is it a loss?\"; [result/score])\n"
    "`is_home_game` = @(\"Is it the home court of New Orleans Saints?\"; [game site])";

TEST_CASE("the Saints plan parses into two queries") {
  auto qs = ParsePlan(kSaintsPlan, testing::SaintsTable());
  REQUIRE(qs.size() == 2);
  CHECK(qs[0] == AugmentationQuery{"is_loss", "Is it a loss?", {"result/score"}});
  CHECK(qs[1] == AugmentationQuery{"is_home_game",
                                   "Is it the home court of New Orleans Saints?",
                                   {"game site"}});
}

TEST_CASE("the single-column driver plan parses") {
  RawTable raw{{"driver"}, {{"jim clark"}}};
  Table t = Table::Ingest(raw, "t1");
  auto qs = ParsePlan("Final output:\n`country` = @(\"What is his/her country?\"; [driver])", t);
  REQUIRE(qs.size() == 1);
  CHECK(qs[0].relevant_columns == std::vector<std::string>{"driver"});
}

TEST_CASE("plan parsing tolerates formatting noise") {
  Table t = testing::SaintsTable();
  auto qs = ParsePlan("Final output:\n```\n- `a` = @( \"q1\" ; [date, game site] ),\n\n"
                      "b = @(\"q2\"; [Result/Score])\n```",
                      t);
  REQUIRE(qs.size() == 2);
  CHECK(qs[0].relevant_columns == std::vector<std::string>{"date", "game site"});
  CHECK(qs[1].new_column == "b");
  CHECK(qs[1].relevant_columns == std::vector<std::string>{"result/score"});
}

TEST_CASE("only the last Final output block counts") {
  Table t = testing::SaintsTable();
  auto qs = ParsePlan("Final output:\n`x` = @(\"q\"; [date])\nmore\nFinal output:\nNone", t);
  CHECK(qs.empty());
}

TEST_CASE("None yields an empty plan") {
  CHECK(ParsePlan("Final output:\nNone", testing::SaintsTable()).empty());
  CHECK(ParsePlan("Final output:\n  None  \n", testing::SaintsTable()).empty());
  AugmentationPlan p = PlanFromResponse("analysis\nFinal output:\nNone", testing::SaintsTable());
  CHECK_FALSE(p.needs_augmentation());
  CHECK(p.warnings.empty());
  CHECK(p.reasoning == "analysis");
}

TEST_CASE("malformed plans raise ParseError") {
  Table t = testing::SaintsTable();
  CHECK_THROWS_AS(ParsePlan("no marker here", t), ParseError);
  CHECK_THROWS_AS(ParsePlan("Final output:\n", t), ParseError);
  CHECK_THROWS_AS(ParsePlan("Final output:\n`x` = (\"q\"; [date])", t), ParseError);
  CHECK_THROWS_AS(ParsePlan("Final output:\n`x` = @(\"q\" [date])", t), ParseError);
  CHECK_THROWS_AS(ParsePlan("Final output:\n`x` = @(\"\"; [date])", t), ParseError);
  CHECK_THROWS_AS(ParsePlan("Final output:\n`x` = @(\"q\"; [])", t), ParseError);
  CHECK_THROWS_AS(ParsePlan("Final output:\n`x` = @(\"q\"; [venue])", t), ParseError);
  CHECK_THROWS_AS(ParsePlan("Final output:\nNone\n`x` = @(\"q\"; [date])", t), ParseError);
  AugmentationPlan p = PlanFromResponse("Final output:\ngarbage", t);
  CHECK_FALSE(p.needs_augmentation());
  CHECK(p.warnings.size() == 1);
}

TEST_CASE("render then parse is the identity on random plans") {
  RawTable raw{{"alpha", "beta gamma", "d/e", "x, y", "Zed"}, {{"1", "2", "3", "4", "5"}}};
  Table t = Table::Ingest(raw, "t1");
  std::vector<std::string> columns;
  for (size_t c = 1; c < t.column_count(); ++c) columns.push_back(t.columns()[c].name);
  const std::vector<std::string> words{"is", "it", "a", "loss?", "what's", "the", "country",
                                       "of", "(home)", "team;", "\"quoted\"", "x=y", "[b]"};
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<AugmentationQuery> plan;
    size_t n = rng() % 4;
    for (size_t i = 0; i < n; ++i) {
      AugmentationQuery q;
      q.new_column = "col_" + std::to_string(rng() % 100) + (rng() % 2 ? " extra" : "");
      size_t len = 1 + rng() % 6;
      for (size_t w = 0; w < len; ++w) {
        if (w) q.question += " ";
        q.question += words[rng() % words.size()];
      }
      std::vector<std::string> pool = columns;
      std::shuffle(pool.begin(), pool.end(), rng);
      q.relevant_columns.assign(pool.begin(), pool.begin() + 1 + rng() % 3);
      plan.push_back(q);
    }
    std::string text = RenderPlan(plan);
    auto back = ParsePlan("reasoning\n" + text, t);
    CHECK_MESSAGE(back == plan, text);
  }
}

TEST_CASE("TATQA extraction converts to the augmenting table") {
  auto ex = ParseExtraction("Analysis:\n...\nFinal output:\n{\"depreciation_expense_2019\": [\"$80,206\"]}");
  REQUIRE(ex);
  Table t2 = ex->ToTable();
  CHECK(t2.name() == "t2");
  REQUIRE(t2.column_count() == 2);
  CHECK(t2.columns()[1].name == "depreciation_expense_2019");
  CHECK(t2.columns()[1].type == ColumnType::kInt);
  CHECK(t2.cell(0, 1).raw == "80206");
  CHECK(std::get<std::int64_t>(t2.cell(0, 1).value) == 80206);
}

TEST_CASE("FinQA extraction converts to the augmenting table") {
  auto ex = ParseExtraction("Final output:\n{\"share_repurchase_whole_year\": [33035204]}");
  REQUIRE(ex);
  Table t2 = ex->ToTable();
  CHECK(std::get<std::int64_t>(t2.cell(0, 1).value) == 33035204);
  CHECK(t2.columns()[1].type == ColumnType::kInt);
}

TEST_CASE("extraction keeps column order and multiple rows") {
  auto ex = ParseExtraction("Final output:\n```json\n{\"z\": [1, 2], \"a\": [\"x\", \"y\"]}\n```");
  REQUIRE(ex);
  CHECK(ex->columns[0].first == "z");
  CHECK(ex->row_count() == 2);
  Table t = ex->ToTable();
  CHECK(t.cell(1, 2).raw == "y");
}

TEST_CASE("ragged or empty extractions are rejected") {
  CHECK_THROWS_AS(ParseExtraction("Final output:\n{\"a\": [1, 2], \"b\": [1]}"),
                  LengthMismatchError);
  CHECK_THROWS_AS(ParseExtraction("Final output:\n{\"a\": []}"), ParseError);
  CHECK_THROWS_AS(ParseExtraction("Final output:\n{\"a\": [null]}"), ParseError);
  CHECK_THROWS_AS(ParseExtraction("Final output:\n{\"a\": [\"nan\"]}"), ParseError);
  CHECK_THROWS_AS(ParseExtraction("Final output:\n{\"a\": [1,"), ParseError);
  CHECK_FALSE(ParseExtraction("Final output:\nNone"));
  CHECK_FALSE(ParseExtraction("Final output:\n{}"));
}

TEST_CASE("extraction parsing is idempotent through its table") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    nlohmann::ordered_json j;
    size_t rows = 1 + rng() % 4;
    for (size_t c = 0; c < 1 + rng() % 3; ++c) {
      std::vector<std::string> values;
      for (size_t r = 0; r < rows; ++r) {
        values.push_back(rng() % 2 ? "$" + std::to_string(rng() % 100000)
                                   : "v" + std::to_string(rng() % 10));
      }
      j["c" + std::to_string(c)] = values;
    }
    auto first = ParseExtraction("Final output:\n" + j.dump());
    REQUIRE(first);
    Table a = first->ToTable();
    nlohmann::ordered_json again;
    for (size_t c = 1; c < a.column_count(); ++c) {
      std::vector<std::string> values;
      for (size_t r = 0; r < a.row_count(); ++r) values.push_back(a.cell(r, c).raw);
      again[a.columns()[c].name] = values;
    }
    auto second = ParseExtraction("Final output:\n" + again.dump());
    REQUIRE(second);
    CHECK(second->ToTable() == a);
  }
}

TEST_CASE("PlanAugmentation returns one plan per sample") {
  ScriptedModel model({{"plan", "", {"Q: what number"}, {kSaintsPlan, "Final output:\nNone"}}});
  PromptTemplate tmpl;
  GenerationParams params;
  params.n_samples = 3;
  params.temperature = 0.6;
  auto plans = PlanAugmentation("what number of games were lost at home?",
                                testing::SaintsTable(), model, tmpl, params);
  REQUIRE(plans.size() == 3);
  CHECK(plans[0].queries.size() == 2);
  CHECK_FALSE(plans[1].needs_augmentation());
  CHECK_FALSE(plans[2].needs_augmentation());
}

TEST_CASE("ExtractClosedDomain needs a document") {
  ScriptedModel model({}, "Final output:\nNone");
  PromptTemplate tmpl;
  CHECK_THROWS_AS(ExtractClosedDomain("q", testing::TatqaTable(), "  ", model, tmpl, {}),
                  InputError);
  auto r = ExtractClosedDomain("q", testing::TatqaTable(), "doc", model, tmpl, {});
  REQUIRE(r.size() == 1);
  CHECK_FALSE(r[0].extraction);
}

}  // namespace
}  // namespace tabaug
