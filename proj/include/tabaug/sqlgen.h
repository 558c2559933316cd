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

#ifndef TABAUG_SQLGEN_H_
#define TABAUG_SQLGEN_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabaug/augment.h"
#include "tabaug/error.h"
#include "tabaug/llmclient.h"
#include "tabaug/promptkit.h"

namespace tabaug {

struct SqlCandidate {
  std::string sql;
  std::string reasoning;
  std::optional<std::string> units;
  int sample_index = 0;
  // False when no SQL could be extracted; such candidates are kept and count
  // as execution errors.
  bool valid = true;
  std::string error;
  std::string raw_response;
};

class NoFenceFound : public Error {
 public:
  using Error::Error;
};

struct ExtractedSql {
  std::string sql;
  std::optional<std::string> units;
};

// Contents of the last ``` fence (language tag dropped) plus an optional
// `Units: "..."` line after it. Falls back to a bare response that starts
// with SELECT, WITH or "(". Throws NoFenceFound otherwise.
ExtractedSql ExtractSql(std::string_view response);

struct SqlTaskOptions {
  size_t preview_rows = 3;
  // Closed mode always shows every row.
  bool full_tables = false;
  std::string document;  // closed mode
  size_t token_limit = 0;
};

std::string RenderSqlTask(std::string_view question, const TableBundle& bundle,
                          const SqlTaskOptions& options);

// Step 3. Requests params.n_samples candidates in one call and returns
// exactly that many, invalid ones flagged.
std::vector<SqlCandidate> GenerateSql(std::string_view question,
                                      const TableBundle& bundle,
                                      LanguageModel& model,
                                      const PromptTemplate& tmpl,
                                      const GenerationParams& params,
                                      const SqlTaskOptions& options = {});

}  // namespace tabaug

#endif  // TABAUG_SQLGEN_H_
