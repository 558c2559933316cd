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

#include "tabaug/tabular.h"

#include <cctype>
#include <utility>

#include "tabaug/strings.h"

namespace tabaug {

std::string_view ColumnTypeName(ColumnType type) {
  switch (type) {
    case ColumnType::kInt: return "int";
    case ColumnType::kReal: return "real";
    case ColumnType::kText: return "text";
    case ColumnType::kDate: return "date";
  }
  return "text";
}

std::string_view SqlTypeName(ColumnType type) {
  switch (type) {
    case ColumnType::kInt: return "int";
    case ColumnType::kReal: return "real";
    default: return "text";
  }
}

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kOriginal: return "original";
    case Provenance::kAugmenting: return "augmenting";
    case Provenance::kJoined: return "joined";
  }
  return "original";
}

std::string SanitizeIdentifier(std::string_view raw) {
  std::string cleaned;
  cleaned.reserve(raw.size());
  for (char c : raw) {
    auto u = static_cast<unsigned char>(c);
    if (c == '`') continue;
    if (u < 0x20 || u == 0x7f) {
      cleaned.push_back(' ');
      continue;
    }
    cleaned.push_back(c);
  }
  std::string out = CollapseWhitespace(cleaned);
  if (out.empty()) return "col";
  return out;
}

std::vector<std::string> DedupeNames(std::vector<std::string> names,
                                     std::vector<std::string> taken) {
  auto used = [&taken](const std::string& n) {
    for (const auto& t : taken) {
      if (EqualsIgnoreCase(t, n)) return true;
    }
    return false;
  };
  for (auto& name : names) {
    if (used(name)) {
      std::string base = name;
      for (int suffix = 2;; ++suffix) {
        name = base + "_" + std::to_string(suffix);
        if (!used(name)) break;
      }
    }
    taken.push_back(name);
  }
  return names;
}

ColumnType InferColumnType(std::span<const std::string> cells) {
  size_t non_null = 0;
  size_t numeric = 0;
  size_t integral = 0;
  size_t dated = 0;
  for (const auto& cell : cells) {
    if (TrimView(cell).empty()) continue;
    ++non_null;
    if (auto n = ParseNumeric(cell)) {
      ++numeric;
      if (n->integer) ++integral;
    } else if (ParseDate(cell)) {
      ++dated;
    }
  }
  if (non_null == 0) return ColumnType::kText;
  const double threshold = kTypeInferenceThreshold * static_cast<double>(non_null);
  if (static_cast<double>(numeric) >= threshold) {
    return integral == numeric ? ColumnType::kInt : ColumnType::kReal;
  }
  if (static_cast<double>(dated) >= threshold) return ColumnType::kDate;
  return ColumnType::kText;
}

CellValue CoerceCell(std::string_view raw, ColumnType type) {
  if (TrimView(raw).empty()) return std::monostate{};
  switch (type) {
    case ColumnType::kInt:
    case ColumnType::kReal:
      if (auto n = ParseNumeric(raw)) {
        if (type == ColumnType::kInt && n->integer) return *n->integer;
        return n->value;
      }
      break;
    case ColumnType::kDate:
      if (auto d = ParseDate(raw)) return *d;
      break;
    case ColumnType::kText:
      break;
  }
  return std::string(raw);
}

Table::Table(std::string name, std::string title, Provenance provenance,
             std::vector<Column> columns, std::vector<std::vector<Cell>> rows)
    : name_(std::move(name)),
      title_(std::move(title)),
      provenance_(provenance),
      columns_(std::move(columns)),
      rows_(std::move(rows)) {
  CheckInvariants();
}

void Table::CheckInvariants() const {
  if (columns_.empty() || columns_[0].name != kRowIdColumn) {
    throw Error("table invariant: row_id must be column 0");
  }
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name.empty()) {
      throw Error("table invariant: empty column name");
    }
    for (size_t j = 0; j < i; ++j) {
      if (EqualsIgnoreCase(columns_[i].name, columns_[j].name)) {
        throw Error("table invariant: duplicate column " + columns_[i].name);
      }
    }
  }
  for (size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != columns_.size()) {
      throw Error("table invariant: non-rectangular row " + std::to_string(r));
    }
    const auto* id = std::get_if<std::int64_t>(&rows_[r][0].value);
    if (id == nullptr || *id != static_cast<std::int64_t>(r)) {
      throw Error("table invariant: row_id not contiguous at row " +
                  std::to_string(r));
    }
  }
}

Table Table::Ingest(const RawTable& raw, std::string name,
                    Provenance provenance, std::string title) {
  if (raw.header.empty()) throw EmptyHeaderError("table has no header columns");
  const size_t width = raw.header.size();
  for (size_t r = 0; r < raw.rows.size(); ++r) {
    if (raw.rows[r].size() != width) {
      throw RaggedInputError("row " + std::to_string(r) + " has " +
                             std::to_string(raw.rows[r].size()) +
                             " cells, header has " + std::to_string(width));
    }
  }

  std::vector<std::string> names;
  names.reserve(width);
  for (const auto& h : raw.header) names.push_back(SanitizeIdentifier(h));
  names = DedupeNames(std::move(names), {std::string(kRowIdColumn)});

  std::vector<Column> columns;
  columns.push_back({std::string(kRowIdColumn), std::string(kRowIdColumn),
                     ColumnType::kInt});
  std::vector<std::string> column_cells(raw.rows.size());
  for (size_t c = 0; c < width; ++c) {
    for (size_t r = 0; r < raw.rows.size(); ++r) column_cells[r] = raw.rows[r][c];
    columns.push_back({raw.header[c], names[c], InferColumnType(column_cells)});
  }

  std::vector<std::vector<Cell>> rows;
  rows.reserve(raw.rows.size());
  for (size_t r = 0; r < raw.rows.size(); ++r) {
    std::vector<Cell> row;
    row.reserve(width + 1);
    auto id = static_cast<std::int64_t>(r);
    row.push_back({std::to_string(r), id});
    for (size_t c = 0; c < width; ++c) {
      const std::string& text = raw.rows[r][c];
      row.push_back({text, CoerceCell(text, columns[c + 1].type)});
    }
    rows.push_back(std::move(row));
  }
  return Table(std::move(name), std::move(title), provenance,
               std::move(columns), std::move(rows));
}

std::optional<size_t> Table::FindColumn(std::string_view name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].raw_name == name) return i;
  }
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (EqualsIgnoreCase(columns_[i].name, name)) return i;
  }
  return std::nullopt;
}

Table Table::WithName(std::string name) const {
  Table copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

Table Table::WithTitle(std::string title) const {
  Table copy = *this;
  copy.title_ = std::move(title);
  return copy;
}

Table JoinOnRowId(const Table& base, const Table& aug) {
  if (aug.row_count() != base.row_count()) {
    throw RowCountMismatchError(
        "cannot join: base has " + std::to_string(base.row_count()) +
        " rows, augmenting table has " + std::to_string(aug.row_count()));
  }
  std::vector<std::string> taken;
  for (const auto& col : base.columns_) taken.push_back(col.name);
  std::vector<std::string> aug_names;
  for (size_t c = 1; c < aug.column_count(); ++c) {
    aug_names.push_back(aug.columns_[c].name);
  }
  aug_names = DedupeNames(std::move(aug_names), std::move(taken));

  std::vector<Column> columns = base.columns_;
  for (size_t c = 1; c < aug.column_count(); ++c) {
    Column col = aug.columns_[c];
    col.name = aug_names[c - 1];
    columns.push_back(std::move(col));
  }
  std::vector<std::vector<Cell>> rows = base.rows_;
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& extra = aug.rows_[r];
    rows[r].insert(rows[r].end(), extra.begin() + 1, extra.end());
  }
  return Table(base.name_, base.title_, Provenance::kJoined, std::move(columns),
               std::move(rows));
}

bool operator==(const Cell& a, const Cell& b) {
  return a.raw == b.raw && a.value == b.value;
}

bool operator==(const Column& a, const Column& b) {
  return a.raw_name == b.raw_name && a.name == b.name && a.type == b.type;
}

bool operator==(const Table& a, const Table& b) {
  return a.name_ == b.name_ && a.title_ == b.title_ &&
         a.provenance_ == b.provenance_ && a.columns_ == b.columns_ &&
         a.rows_ == b.rows_;
}

}  // namespace tabaug
