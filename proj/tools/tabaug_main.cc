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

// tabaug: batch and single-question entry points.
//
//   tabaug run --dataset wikitq --data DIR --llm-mode replay \
//       --transcripts fixtures/transcripts.jsonl --out runs/x
//   tabaug ask --dataset wikitq --table t.csv "what number of games ..."

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "tabaug/error.h"
#include "tabaug/evalkit.h"
#include "tabaug/llmclient.h"
#include "tabaug/run.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitRuntime = 1;

struct Flags {
  std::string config_file;
  std::string dataset;
  std::string mode;
  std::string llm_mode;
  std::string transcripts;
  std::string endpoint;
  std::string model;
  std::string credential_env;
  std::string script;
  std::string profile;
  std::optional<int> m, k, workers;
  std::optional<size_t> preview_rows, limit, token_limit;
  std::string baseline;
  std::string out;
  std::string data;
  std::string templates;
  bool subset = false;
};

void AddCommonFlags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_file, "JSON run configuration");
  app->add_option("--dataset", f.dataset, "wikitq, tatqa or finqa");
  app->add_option("--mode", f.mode, "open or closed (default follows the dataset)");
  app->add_option("--llm-mode", f.llm_mode, "live, replay or record");
  app->add_option("--transcripts", f.transcripts, "transcript cache (JSONL)");
  app->add_option("--endpoint", f.endpoint, "chat-completions URL");
  app->add_option("--model", f.model, "model id sent to the endpoint");
  app->add_option("--credential-env", f.credential_env,
                  "environment variable holding the API key");
  app->add_option("--script", f.script, "record mode: scripted responses file");
  app->add_option("--profile", f.profile, "gpt or llama sampling defaults");
  app->add_option("--m", f.m, "step-1 samples");
  app->add_option("--k", f.k, "SQL samples per context");
  app->add_option("--preview-rows", f.preview_rows, "rows shown in table previews");
  app->add_option("--token-limit", f.token_limit, "prompt token budget (0: none)");
  app->add_option("--baseline", f.baseline, "none or direct_answer");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--workers", f.workers, "question-level workers");
  app->add_option("--templates", f.templates, "template directory");
}

tabaug::RunConfig BuildConfig(const Flags& f) {
  tabaug::RunConfig c;
  if (!f.config_file.empty()) tabaug::ApplyConfigFile(c, f.config_file);
  if (!f.dataset.empty()) c.dataset = tabaug::ParseDatasetId(f.dataset);
  if (!f.mode.empty()) c.mode = tabaug::ParseKnowledgeMode(f.mode);
  if (!f.llm_mode.empty()) c.llm.mode = tabaug::ParseLlmMode(f.llm_mode);
  if (!f.transcripts.empty()) c.llm.transcripts = f.transcripts;
  if (!f.endpoint.empty()) c.llm.endpoint = f.endpoint;
  if (!f.model.empty()) c.llm.model_id = f.model;
  if (!f.credential_env.empty()) c.llm.credential_env = f.credential_env;
  if (!f.script.empty()) c.llm.script = f.script;
  if (!f.profile.empty()) {
    if (f.profile == "gpt") c.llm.profile = tabaug::ModelProfile::kGpt;
    else if (f.profile == "llama") c.llm.profile = tabaug::ModelProfile::kLlama;
    else throw tabaug::ConfigError("unknown profile: " + f.profile);
  }
  if (f.m) c.m = *f.m;
  if (f.k) c.k = *f.k;
  if (f.workers) c.workers = *f.workers;
  if (f.preview_rows) c.preview_rows = *f.preview_rows;
  if (f.token_limit) c.token_limit = *f.token_limit;
  if (f.limit) c.limit = *f.limit;
  if (f.subset) c.subset = true;
  if (!f.baseline.empty()) c.baseline = tabaug::ParseBaseline(f.baseline);
  if (!f.out.empty()) c.output_dir = f.out;
  if (!f.data.empty()) c.data_path = f.data;
  if (!f.templates.empty()) c.templates_dir = f.templates;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Augment-then-generate table question answering"};
  app.require_subcommand(1);

  Flags run_flags;
  CLI::App* run = app.add_subcommand("run", "run a dataset and write a report");
  AddCommonFlags(run, run_flags);
  run->add_option("--data", run_flags.data, "dataset release path");
  run->add_option("--limit", run_flags.limit, "run only the first N questions");
  run->add_flag("--subset", run_flags.subset, "WikiTQ: every fourth of the first 4000");

  Flags ask_flags;
  std::string question, table_path, document_path;
  std::vector<std::string> gold;
  CLI::App* ask = app.add_subcommand("ask", "answer one question over a table file");
  AddCommonFlags(ask, ask_flags);
  ask->add_option("--table", table_path, "CSV/TSV table")->required();
  ask->add_option("--document", document_path, "report text (closed mode)");
  ask->add_option("--gold", gold, "gold answer(s) for scoring");
  ask->add_option("question", question, "question text")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      tabaug::RunConfig config = BuildConfig(run_flags);
      auto summary = tabaug::RunDataset(config);
      std::cout << tabaug::RenderReportText(summary.report);
      if (!config.output_dir.empty()) std::cout << "\nartifacts: " << config.output_dir << "\n";
      return 0;
    }
    tabaug::RunConfig config = BuildConfig(ask_flags);
    std::optional<std::string> doc;
    if (!document_path.empty()) doc = document_path;
    auto result = tabaug::RunSingle(question, table_path, doc, config, nullptr, gold);
    std::cout << result.answer;
    if (!result.run.vote.winner) {
      std::cout << " (" << tabaug::ExecStatusName(result.run.record.outcome_status);
      if (!result.run.error.empty()) std::cout << ": " << result.run.error;
      std::cout << ")";
    }
    std::cout << "\n";
    if (!gold.empty()) std::cout << "em: " << (result.run.record.em ? "true" : "false") << "\n";
    if (!result.artifact_path.empty()) std::cout << "artifact: " << result.artifact_path << "\n";
    return 0;
  } catch (const tabaug::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const tabaug::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
