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

#ifndef TABAUG_DATASET_ID_H_
#define TABAUG_DATASET_ID_H_

#include <string>
#include <string_view>

namespace tabaug {

enum class DatasetId { kWikiTQ, kTatQA, kFinQA };

// Where missing information comes from: the model's own knowledge (open) or
// an accompanying document (closed).
enum class KnowledgeMode { kOpen, kClosed };

std::string_view DatasetName(DatasetId id);
// Accepts "wikitq", "tatqa", "finqa" (case-insensitive); throws ConfigError.
DatasetId ParseDatasetId(std::string_view name);

std::string_view KnowledgeModeName(KnowledgeMode mode);
KnowledgeMode ParseKnowledgeMode(std::string_view name);
KnowledgeMode DefaultKnowledgeMode(DatasetId id);

}  // namespace tabaug

#endif  // TABAUG_DATASET_ID_H_
