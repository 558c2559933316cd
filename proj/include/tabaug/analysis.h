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

#ifndef TABAUG_ANALYSIS_H_
#define TABAUG_ANALYSIS_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tabaug/error.h"
#include "tabaug/llmclient.h"
#include "tabaug/promptkit.h"
#include "tabaug/tabular.h"

namespace tabaug {

inline constexpr std::string_view kFinalOutputMarker = "Final output:";

// One requested column: `new_column` = @("question"; [relevant_columns]).
struct AugmentationQuery {
  std::string new_column;
  std::string question;
  std::vector<std::string> relevant_columns;

  bool operator==(const AugmentationQuery&) const = default;
};

struct AugmentationPlan {
  std::vector<AugmentationQuery> queries;  // empty: no augmentation needed
  std::string raw_response;
  std::string reasoning;  // text before the final-output block
  std::vector<std::string> warnings;

  bool needs_augmentation() const { return !queries.empty(); }
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Parses the block after the last "Final output:" marker. "None" yields an
// empty list. Relevant columns are resolved against `table` and returned
// under the table's own names; new column names are sanitized.
std::vector<AugmentationQuery> ParsePlan(std::string_view response,
                                         const Table& table);

// Inverse of ParsePlan: a "Final output:" block.
std::string RenderPlan(const std::vector<AugmentationQuery>& queries);

// Like ParsePlan but never throws: a ParseError becomes an empty plan with a
// warning.
AugmentationPlan PlanFromResponse(std::string response, const Table& table);

std::string RenderAnalyzeTask(std::string_view question, const Table& table,
                              size_t preview_rows);

struct StepOptions {
  size_t preview_rows = 3;
  size_t token_limit = 0;  // 0: unchecked
};

// Step 1, open domain. Queries the model once with params.n_samples samples
// and parses every sample. Source errors propagate.
std::vector<AugmentationPlan> PlanAugmentation(std::string_view question,
                                               const Table& table,
                                               LanguageModel& model,
                                               const PromptTemplate& tmpl,
                                               const GenerationParams& params,
                                               const StepOptions& options = {});

// Columns extracted from a document, in the order the model emitted them.
struct ClosedDomainExtraction {
  std::vector<std::pair<std::string, std::vector<std::string>>> columns;
  std::string raw_response;

  size_t row_count() const {
    return columns.empty() ? 0 : columns.front().second.size();
  }
  // Numeric-looking values are normalized ("$80,206" -> "80206") and the
  // result is ingested as an augmenting table.
  Table ToTable(std::string name = "t2") const;
};

// Parses the JSON object after the last "Final output:" marker. Accepts a
// fenced or bare object with trailing prose. Returns nullopt for "None".
// Throws ParseError on malformed JSON, null/NaN/empty columns, and
// LengthMismatchError when columns differ in length.
std::optional<ClosedDomainExtraction> ParseExtraction(std::string_view response);

struct ExtractionResult {
  std::optional<ClosedDomainExtraction> extraction;
  std::string raw_response;
  std::vector<std::string> warnings;
};

std::string RenderExtractTask(std::string_view question, const Table& table,
                              std::string_view document);

// Steps 1 and 2 merged for the closed domain. Parse failures degrade to "no
// augmentation" with a warning.
std::vector<ExtractionResult> ExtractClosedDomain(std::string_view question,
                                                  const Table& table,
                                                  std::string_view document,
                                                  LanguageModel& model,
                                                  const PromptTemplate& tmpl,
                                                  const GenerationParams& params,
                                                  size_t token_limit = 0);

}  // namespace tabaug

#endif  // TABAUG_ANALYSIS_H_
