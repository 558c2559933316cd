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

#include "tabaug/csv.h"

#include <filesystem>

#include "tabaug/strings.h"

namespace tabaug {

RawTable ParseDelimited(std::string_view text, char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      if (record.empty() && !field_started) continue;  // blank line
      end_record();
    } else if (c == '\r') {
      // swallowed; \r\n line endings
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw InputError("unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();

  RawTable raw;
  if (records.empty()) return raw;
  raw.header = std::move(records.front());
  for (size_t i = 1; i < records.size(); ++i) {
    raw.rows.push_back(std::move(records[i]));
  }
  return raw;
}

RawTable ReadTableFile(const std::string& path) {
  std::string ext = ToLower(std::filesystem::path(path).extension().string());
  return ParseDelimited(ReadFile(path), ext == ".tsv" ? '\t' : ',');
}

}  // namespace tabaug
