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

#ifndef TABAUG_PROMPTKIT_H_
#define TABAUG_PROMPTKIT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabaug/error.h"
#include "tabaug/tabular.h"

namespace tabaug {

// Roughly four characters per token. Only used for budgeting and for
// length bucketing, so it needs to be monotone, not exact.
size_t EstimateTokens(std::string_view text);

enum class RenderMode { kPipeRows, kCreateTablePreview, kCreateTableFull };

struct TableRendering {
  RenderMode mode = RenderMode::kPipeRows;
  std::string text;
  size_t token_estimate = 0;
};

// Header line then one line per row, cells joined by " | ". A literal " | "
// inside a cell is rendered as " / " so the format stays unambiguous.
TableRendering RenderPipe(const Table& table);

// CREATE TABLE block followed by a comment holding either a LIMIT preview
// (space-aligned) or every row (tab-separated). With preview_rows == 0 and
// full == false only the schema is emitted.
TableRendering RenderCreateTable(const Table& table, size_t preview_rows,
                                 bool full);

// Splits one line of RenderPipe output back into cells.
std::vector<std::string> SplitPipeRow(std::string_view line);

struct Message {
  std::string role;  // "system", "user" or "assistant"
  std::string content;

  bool operator==(const Message&) const = default;
};

using MessageSequence = std::vector<Message>;

struct Shot {
  std::string input;
  std::string output;
};

// A prompt template file:
//
//   ---
//   id: wikitq.analyze
//   step: analyze
//   dataset: wikitq
//   num_shots: 1
//   ---
//   ### SYSTEM
//   <instructions>
//   ### SHOT INPUT
//   <example input>
//   ### SHOT OUTPUT
//   <example output>
//
// SHOT INPUT / SHOT OUTPUT pairs repeat, in order. A missing or empty
// SYSTEM section produces no system message.
struct PromptTemplate {
  std::string id;
  std::string step;
  std::string dataset;
  std::string system_text;
  std::vector<Shot> shots;

  size_t num_shots() const { return shots.size(); }
};

PromptTemplate ParseTemplate(std::string_view text);
PromptTemplate LoadTemplate(const std::string& path);

class TokenBudgetExceeded : public Error {
 public:
  TokenBudgetExceeded(size_t estimate, size_t limit);
  size_t estimate() const { return estimate_; }
  size_t limit() const { return limit_; }

 private:
  size_t estimate_;
  size_t limit_;
};

size_t EstimateTokens(const MessageSequence& messages);

// System text, then each shot as a user/assistant pair, then the task as the
// final user turn. `max_shots` keeps only the first N shots. A zero
// `token_limit` disables the budget check.
MessageSequence BuildPrompt(const PromptTemplate& tmpl, std::string_view task,
                            size_t token_limit = 0,
                            std::optional<size_t> max_shots = std::nullopt);

}  // namespace tabaug

#endif  // TABAUG_PROMPTKIT_H_
