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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support/fixtures.h"
#include "support/mock_openai.h"
#include "tabaug/run.h"

namespace tabaug {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("tabaug_run_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

RunConfig Replay(DatasetId dataset, const std::string& data) {
  RunConfig c;
  c.dataset = dataset;
  c.data_path = testing::FixturePath(data);
  c.llm.mode = LlmMode::kReplay;
  c.llm.transcripts = testing::FixturePath("transcripts.jsonl");
  return c;
}

TEST_CASE("replay over the bundled fixtures scores every question") {
  struct Case {
    DatasetId dataset;
    const char* data;
    size_t total;
  };
  for (const Case& c : {Case{DatasetId::kWikiTQ, "wikitq-mini", 3},
                        Case{DatasetId::kTatQA, "tatqa-mini/tatqa_dataset_dev.json", 1},
                        Case{DatasetId::kFinQA, "finqa-mini/test.json", 1}}) {
    CAPTURE(DatasetName(c.dataset));
    RunSummary s = RunDataset(Replay(c.dataset, c.data));
    CHECK(s.report.total == c.total);
    CHECK(s.report.em == c.total);
    CHECK(s.report.execution_errors == 0);
    for (const auto& run : s.runs) CHECK(run.error.empty());
  }
}

TEST_CASE("ensemble and baseline replays") {
  auto c = Replay(DatasetId::kWikiTQ, "wikitq-mini");
  c.m = 3;
  c.k = 2;
  RunSummary s = RunDataset(c);
  CHECK(s.report.em == 3);
  auto d = Replay(DatasetId::kWikiTQ, "wikitq-mini");
  d.baseline = Baseline::kDirectAnswer;
  RunSummary direct = RunDataset(d);
  CHECK(direct.report.total == 3);
  for (const auto& run : direct.runs) {
    CHECK(run.error.empty());
    CHECK(run.vote.budget.total == 1);
  }
}

TEST_CASE("replay runs are byte-identical") {
  TempDir tmp("det");
  auto c = Replay(DatasetId::kWikiTQ, "wikitq-mini");
  c.m = 3;
  c.k = 2;
  c.output_dir = tmp.sub("a");
  RunDataset(c);
  c.output_dir = tmp.sub("b");
  c.workers = 1;
  RunDataset(c);
  for (const char* f : {"artifacts.jsonl", "report.json", "report.txt"}) {
    CAPTURE(f);
    std::string a = Slurp(tmp.path / "a" / f);
    CHECK_FALSE(a.empty());
    CHECK(a == Slurp(tmp.path / "b" / f));
  }
  CHECK(fs::exists(tmp.path / "a" / "run_meta.json"));
}

TEST_CASE("existing output is never overwritten") {
  TempDir tmp("out");
  fs::create_directories(tmp.path);
  std::ofstream(tmp.path / "report.json") << "{}";
  auto c = Replay(DatasetId::kWikiTQ, "wikitq-mini");
  c.output_dir = tmp.path.string();
  CHECK_THROWS_AS(RunDataset(c), ConfigError);
  CHECK(Slurp(tmp.path / "report.json") == "{}");
}

TEST_CASE("live mode without a credential fails before any request") {
  testing::MockOpenAI mock(ScriptedModel({}, "None"));
  LlmConfig llm;
  llm.mode = LlmMode::kLive;
  llm.endpoint = mock.endpoint();
  llm.credential_env = "TABAUG_TEST_KEY";
  auto no_env = [](const std::string&) { return std::optional<std::string>(); };
  CHECK_THROWS_AS(MakeModel(llm, no_env), ConfigError);

  RunConfig c = Replay(DatasetId::kWikiTQ, "wikitq-mini");
  c.llm = llm;
  c.llm.credential_env = "TABAUG_TEST_KEY_THAT_IS_NEVER_SET";
  CHECK_THROWS_AS(RunDataset(c), ConfigError);
  CHECK(mock.requests() == 0);

  auto with_env = [](const std::string& name) {
    return name == "TABAUG_TEST_KEY" ? std::optional<std::string>("sk-x") : std::nullopt;
  };
  CHECK(MakeModel(llm, with_env) != nullptr);
  CHECK(mock.requests() == 0);
}

TEST_CASE("configuration errors surface early") {
  RunConfig c = Replay(DatasetId::kWikiTQ, "wikitq-mini");
  c.llm.transcripts = "/nonexistent/transcripts.jsonl";
  CHECK_THROWS_AS(RunDataset(c), ConfigError);
  c = Replay(DatasetId::kWikiTQ, "wikitq-mini");
  c.mode = KnowledgeMode::kClosed;
  CHECK_THROWS_AS(RunDataset(c), ConfigError);
  c = Replay(DatasetId::kWikiTQ, "does-not-exist");
  CHECK_THROWS_AS(RunDataset(c), ConfigError);

  RunConfig j;
  ApplyConfigJson(j, nlohmann::json::parse(
                         R"({"dataset": "finqa", "m": 3, "k": 2, "llm": {"mode": "live"}})"));
  CHECK(j.dataset == DatasetId::kFinQA);
  CHECK(j.knowledge_mode() == KnowledgeMode::kClosed);
  CHECK(j.m == 3);
  CHECK(j.llm.mode == LlmMode::kLive);
  CHECK_THROWS_AS(ApplyConfigJson(j, nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
}

TEST_CASE("single questions over a table file") {
  TempDir tmp("single");
  RunConfig c;
  c.llm.mode = LlmMode::kReplay;
  c.llm.transcripts = testing::FixturePath("transcripts.jsonl");
  c.output_dir = tmp.sub("saints");
  auto r = RunSingle("what number of games were lost at home?",
                     testing::FixturePath("ask/saints.csv"), std::nullopt, c, nullptr, {"1"});
  CHECK(r.answer == "1");
  CHECK(r.run.record.em);
  CHECK(fs::exists(r.artifact_path));

  RunConfig t = c;
  t.dataset = DatasetId::kTatQA;
  t.output_dir = tmp.sub("tatqa");
  auto tr = RunSingle(
      "What is the ratio of depreciation expense to accumulated depreciation of property and "
      "equipment in 2019?",
      testing::FixturePath("ask/tatqa_table.csv"), testing::FixturePath("ask/tatqa_report.txt"),
      t);
  CHECK(std::stod(tr.answer) == doctest::Approx(80206.0 / 148916.0).epsilon(1e-4));

  c.output_dir = tmp.sub("missing");
  CHECK_THROWS_AS(RunSingle("q", "/nonexistent/table.csv", std::nullopt, c), InputError);
}

}  // namespace
}  // namespace tabaug
