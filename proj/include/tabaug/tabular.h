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

#ifndef TABAUG_TABULAR_H_
#define TABAUG_TABULAR_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabaug/cell.h"
#include "tabaug/error.h"

namespace tabaug {

inline constexpr std::string_view kRowIdColumn = "row_id";

// Fraction of non-null cells that must parse as numbers (or dates) for a
// column to be typed int/real (date).
inline constexpr double kTypeInferenceThreshold = 0.8;

enum class ColumnType { kInt, kReal, kText, kDate };
enum class Provenance { kOriginal, kAugmenting, kJoined };

std::string_view ColumnTypeName(ColumnType type);
// Type as written in CREATE TABLE renderings; dates render as text.
std::string_view SqlTypeName(ColumnType type);
std::string_view ProvenanceName(Provenance p);

struct Column {
  std::string raw_name;
  std::string name;  // sanitized, unique within the table
  ColumnType type = ColumnType::kText;
};

// Original text is kept next to the coerced value: prompts show `raw`, the
// SQL engine sees `value`.
struct Cell {
  std::string raw;
  CellValue value;
};

// Header plus data rows as read from a file or dataset record.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

class RaggedInputError : public InputError {
 public:
  using InputError::InputError;
};

class EmptyHeaderError : public InputError {
 public:
  using InputError::InputError;
};

class RowCountMismatchError : public Error {
 public:
  using Error::Error;
};

// Immutable rectangular relation. Column 0 is always `row_id` holding
// 0..n-1 in order.
class Table {
 public:
  // Prepends row_id, sanitizes and dedupes names and infers column types.
  static Table Ingest(const RawTable& raw, std::string name,
                      Provenance provenance = Provenance::kOriginal,
                      std::string title = {});

  const std::string& name() const { return name_; }
  const std::string& title() const { return title_; }
  Provenance provenance() const { return provenance_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  size_t row_count() const { return rows_.size(); }
  size_t column_count() const { return columns_.size(); }
  const Cell& cell(size_t row, size_t col) const { return rows_[row][col]; }

  // Exact name, then exact raw name, then ASCII case-insensitive name.
  std::optional<size_t> FindColumn(std::string_view name) const;

  Table WithName(std::string name) const;
  Table WithTitle(std::string title) const;

  friend Table JoinOnRowId(const Table& base, const Table& aug);
  friend bool operator==(const Table&, const Table&);

 private:
  Table(std::string name, std::string title, Provenance provenance,
        std::vector<Column> columns, std::vector<std::vector<Cell>> rows);

  void CheckInvariants() const;

  std::string name_;
  std::string title_;
  Provenance provenance_;
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

bool operator==(const Table& a, const Table& b);
bool operator==(const Cell& a, const Cell& b);
bool operator==(const Column& a, const Column& b);

// Appends aug's columns (without its row_id) to base. Colliding names get a
// `_2`, `_3`, ... suffix. Throws RowCountMismatchError.
Table JoinOnRowId(const Table& base, const Table& aug);

// Deterministic and idempotent. Keeps punctuation verbatim (identifiers are
// backtick-quoted downstream), drops backticks and control characters,
// collapses whitespace. Returns "col" when nothing is left.
std::string SanitizeIdentifier(std::string_view raw);

// Resolves case-insensitive collisions by suffixing `_2`, `_3`, ...
// Names already in `taken` are treated as used.
std::vector<std::string> DedupeNames(std::vector<std::string> names,
                                     std::vector<std::string> taken = {});

ColumnType InferColumnType(std::span<const std::string> cells);

// Coerces one raw cell under a column type. Cells that do not parse under
// the column type keep their text; empty cells become NULL.
CellValue CoerceCell(std::string_view raw, ColumnType type);

}  // namespace tabaug

#endif  // TABAUG_TABULAR_H_
