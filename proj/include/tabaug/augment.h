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

#ifndef TABAUG_AUGMENT_H_
#define TABAUG_AUGMENT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabaug/analysis.h"
#include "tabaug/llmclient.h"
#include "tabaug/promptkit.h"
#include "tabaug/tabular.h"

namespace tabaug {

enum class BundleMode { kOpenJoined, kClosedSeparate };

std::string_view BundleModeName(BundleMode mode);

struct DroppedQuery {
  std::string new_column;
  std::string reason;
};

// Input to SQL generation. In open mode the augmenting columns are joined
// onto the base table (`joined`, rendered as t1); in closed mode the
// augmenting table stays separate and is rendered as t2.
struct TableBundle {
  Table base;
  std::optional<Table> augmenting;
  std::optional<Table> joined;
  BundleMode mode = BundleMode::kOpenJoined;
  std::vector<DroppedQuery> dropped;

  // The table SQL sees as t1.
  const Table& primary() const { return joined ? *joined : base; }
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

// Table rendered for a row-wise question: row_id plus the relevant columns,
// tab separated, inside a comment block.
std::string RenderRowwiseTask(const AugmentationQuery& query, const Table& table,
                              size_t first_row, size_t end_row);

// Parses a row-wise answer block for rows [first_row, end_row). Lines that
// echo row ids are aligned by id, otherwise by position. Echoed relevant
// cells are stripped, leaving the answer. Throws AlignmentError.
std::vector<std::string> ParseRowwiseResponse(std::string_view response,
                                              const AugmentationQuery& query,
                                              const Table& table, size_t first_row,
                                              size_t end_row);

// Step 2, open domain: one answer per row. A misaligned response is retried
// once before AlignmentError is raised. Tables too large for the token
// budget are answered in row chunks.
std::vector<std::string> AnswerRowwise(const AugmentationQuery& query,
                                       const Table& table, LanguageModel& model,
                                       const PromptTemplate& tmpl,
                                       const GenerationParams& params,
                                       size_t token_limit = 0);

// Answers every query (concurrently), drops misaligned ones and joins the
// rest onto `base` in plan order.
TableBundle BuildBundle(const AugmentationPlan& plan, const Table& base,
                        LanguageModel& model, const PromptTemplate& tmpl,
                        const GenerationParams& params, size_t token_limit = 0);

// Closed domain: the extraction, when present, becomes table t2.
TableBundle BuildBundle(const std::optional<ClosedDomainExtraction>& extraction,
                        const Table& base);

}  // namespace tabaug

#endif  // TABAUG_AUGMENT_H_
