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

#ifndef TABAUG_RUN_H_
#define TABAUG_RUN_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tabaug/ensemble.h"
#include "tabaug/evalkit.h"
#include "tabaug/llmclient.h"

namespace tabaug {

enum class LlmMode { kLive, kReplay, kRecord };
std::string_view LlmModeName(LlmMode mode);
LlmMode ParseLlmMode(std::string_view name);

struct LlmConfig {
  LlmMode mode = LlmMode::kReplay;
  std::string transcripts;  // JSONL cache; required for replay and record
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model_id;     // empty: profile default
  std::string credential_env = "OPENAI_API_KEY";
  ModelProfile profile = ModelProfile::kGpt;
  int max_in_flight = 4;
  bool supports_n = true;
  // Record mode only: answer misses from a scripted rule file instead of the
  // endpoint.
  std::string script;
};

struct RunConfig {
  DatasetId dataset = DatasetId::kWikiTQ;
  std::optional<KnowledgeMode> mode;  // default follows the dataset
  Baseline baseline = Baseline::kNone;
  LlmConfig llm;
  int m = 1;
  int k = 1;
  size_t preview_rows = 3;
  size_t token_limit = 0;
  std::string data_path;
  std::string templates_dir;  // empty: bundled templates
  std::string output_dir;
  int workers = 4;
  std::optional<size_t> limit;
  bool subset = false;

  KnowledgeMode knowledge_mode() const {
    return mode.value_or(DefaultKnowledgeMode(dataset));
  }
  PipelineConfig Pipeline() const;
  // Checks everything that can be checked without reading data or calling
  // the source. Throws ConfigError.
  void Validate() const;
};

// Overlays keys present in `j` onto `config`. Unknown keys are errors.
void ApplyConfigJson(RunConfig& config, const nlohmann::json& j);
void ApplyConfigFile(RunConfig& config, const std::string& path);

std::string BundledTemplatesDir();

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
std::optional<std::string> ProcessEnv(const std::string& name);

// Throws ConfigError for live/record mode without a credential and for
// replay without a transcript file.
std::shared_ptr<LanguageModel> MakeModel(const LlmConfig& config,
                                         const EnvLookup& env = ProcessEnv);

struct RunSummary {
  Report report;
  std::vector<QuestionRun> runs;
  size_t skipped_records = 0;
};

// Runs every selected question and, when output_dir is set, writes
// artifacts.jsonl, report.json, report.txt and run_meta.json there. The
// directory must not already hold a run.
RunSummary RunDataset(const RunConfig& config,
                      std::shared_ptr<LanguageModel> model = nullptr);

struct SingleResult {
  QuestionRun run;
  std::string answer;  // winner display text or "none"
  std::string artifact_path;
};

SingleResult RunSingle(const std::string& question, const std::string& table_path,
                       const std::optional<std::string>& document_path,
                       const RunConfig& config,
                       std::shared_ptr<LanguageModel> model = nullptr,
                       std::vector<std::string> gold = {});

}  // namespace tabaug

#endif  // TABAUG_RUN_H_
