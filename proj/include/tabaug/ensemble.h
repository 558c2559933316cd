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

#ifndef TABAUG_ENSEMBLE_H_
#define TABAUG_ENSEMBLE_H_

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tabaug/analysis.h"
#include "tabaug/augment.h"
#include "tabaug/datasets.h"
#include "tabaug/evalkit.h"
#include "tabaug/llmclient.h"
#include "tabaug/promptkit.h"
#include "tabaug/sqlexec.h"
#include "tabaug/sqlgen.h"

namespace tabaug {

// Most frequent canonical answer among ok outcomes. Ties go to the answer
// seen first. nullopt when nothing executed successfully.
std::optional<Answer> MajorityVote(const std::vector<ExecutionOutcome>& outcomes);

// m + round(alpha*m) + m*k.
int BudgetTotal(int m, double alpha, int k);

struct SampleBudget {
  int m = 1;
  double alpha_observed = 0;
  int k = 1;
  // Step-1 and step-2 were one merged call per sample (closed domain); the
  // total is then m + m*k.
  bool merged_steps = false;
  int total = 0;
  size_t samples_issued = 0;   // generated samples actually requested
  size_t requests_issued = 0;  // chat requests actually sent
};

struct CandidateOutcome {
  std::string candidate_id;  // "<context>.<sample>"
  ExecutionOutcome outcome;
  std::optional<Answer> answer;
};

struct VoteRecord {
  std::vector<CandidateOutcome> outcomes;
  std::vector<std::string> normalized_answers;  // ok answers in order
  std::optional<Answer> winner;
  SampleBudget budget;
};

enum class Baseline { kNone, kDirectAnswer };
std::string_view BaselineName(Baseline b);
Baseline ParseBaseline(std::string_view name);

struct TemplateSet {
  std::optional<PromptTemplate> analyze;
  std::optional<PromptTemplate> augment;
  std::optional<PromptTemplate> extract;
  std::optional<PromptTemplate> sql;
  std::optional<PromptTemplate> direct;

  // Reads <dir>/<dataset>/<step>.txt for the steps the configuration needs.
  // Throws ConfigError when one is missing.
  static TemplateSet Load(const std::string& dir, DatasetId dataset,
                          KnowledgeMode mode, Baseline baseline);
};

struct PipelineConfig {
  DatasetId dataset = DatasetId::kWikiTQ;
  KnowledgeMode mode = KnowledgeMode::kOpen;
  Baseline baseline = Baseline::kNone;
  ModelProfile profile = ModelProfile::kGpt;
  int m = 1;
  int k = 1;
  size_t preview_rows = 3;
  size_t token_limit = 0;
  std::chrono::milliseconds query_timeout = kDefaultQueryTimeout;
  std::string model_id;  // empty: profile default

  DecodeMode decode() const {
    return m == 1 && k == 1 ? DecodeMode::kGreedy : DecodeMode::kEnsemble;
  }
  GenerationParams Params(Step step) const;
  void Validate() const;
};

// One step-1 sample and everything derived from it.
struct ContextRun {
  int index = 0;
  std::optional<AugmentationPlan> plan;
  std::optional<ExtractionResult> extraction;
  std::optional<TableBundle> bundle;
  std::vector<SqlCandidate> candidates;
  std::vector<ExecutionOutcome> outcomes;
  std::string error;
};

struct QuestionRun {
  std::string question_id;
  std::string question;
  std::string error;  // set when the question could not be processed
  std::vector<ContextRun> contexts;
  std::string direct_response;  // baseline only
  VoteRecord vote;
  EvalRecord record;
};

// Runs the augment-then-generate pipeline (or the direct baseline) on one
// question. Source and engine failures are recorded, not thrown.
QuestionRun RunEnsemble(const Question& question,
                        std::shared_ptr<LanguageModel> model,
                        const TemplateSet& templates, const PipelineConfig& config);

std::string RenderDirectTask(const Question& question);
// Text after the last "Answer:" or the last non-empty line; " | " separates
// list answers.
Answer ParseDirectAnswer(std::string_view response);

nlohmann::ordered_json TableToJson(const Table& table);
nlohmann::ordered_json QuestionRunToJson(const QuestionRun& run);

}  // namespace tabaug

#endif  // TABAUG_ENSEMBLE_H_
