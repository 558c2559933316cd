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

#ifndef TABAUG_DATASETS_H_
#define TABAUG_DATASETS_H_

#include <optional>
#include <string>
#include <vector>

#include "tabaug/dataset_id.h"
#include "tabaug/error.h"
#include "tabaug/tabular.h"

namespace tabaug {

class MissingFile : public InputError {
 public:
  using InputError::InputError;
};

struct Question {
  std::string id;
  DatasetId dataset = DatasetId::kWikiTQ;
  std::string text;
  Table table;
  std::optional<std::string> document;  // closed-domain datasets only
  std::vector<std::string> gold;
  std::optional<int> required_cells;
};

struct LoadResult {
  std::vector<Question> questions;
  size_t records = 0;       // records read from the file
  size_t filtered_out = 0;  // well-formed but excluded by the dataset filter
  size_t skipped = 0;       // malformed
  std::vector<std::string> skip_reasons;
};

// Header label given to blank header cells in TATQA and FinQA tables.
inline constexpr std::string_view kFilledColumnName = "filledcolumnname";

// 0, 4, 8, ... below min(n, 4000).
std::vector<size_t> WikiTQSubsetIndices(size_t n);

// `path` is the release root (containing data/ and csv/) or a question file
// in the release's tab-separated format.
LoadResult LoadWikiTQ(const std::string& path, bool subset);
// Keeps questions answered from both table and text.
LoadResult LoadTatQA(const std::string& path);
// Keeps questions whose gold evidence cites a table row and a text sentence.
LoadResult LoadFinQA(const std::string& path);
LoadResult LoadDataset(DatasetId id, const std::string& path, bool subset);

// Unescapes the release's \n, \p and \\ sequences.
std::string UnescapeWikiTQ(std::string_view s);

// Counts numeric operands in a gold derivation or program that equal some
// numeric cell of the table. nullopt when there is no derivation.
std::optional<int> CountRequiredCells(std::string_view derivation,
                                      const Table& table);

}  // namespace tabaug

#endif  // TABAUG_DATASETS_H_
