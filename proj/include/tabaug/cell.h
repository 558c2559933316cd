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

#ifndef TABAUG_CELL_H_
#define TABAUG_CELL_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace tabaug {

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  // YYYY-MM-DD.
  std::string Iso() const;

  auto operator<=>(const Date&) const = default;
};

// A typed cell value. std::monostate is SQL NULL.
using CellValue =
    std::variant<std::monostate, std::int64_t, double, std::string, Date>;

inline bool IsNull(const CellValue& v) {
  return std::holds_alternative<std::monostate>(v);
}

// Text form used for SQL loading and prompt rendering of coerced values.
// Dates serialize as ISO-8601, reals use the shortest round-trip form, NULL
// renders as the empty string.
std::string CellToString(const CellValue& v);

std::string FormatReal(double v);

struct Numeric {
  double value = 0;
  // Set when the text had no fractional part and fits in 64 bits.
  std::optional<std::int64_t> integer;
};

// Accepts an optional sign, at most one leading currency symbol ($ € £ ¥),
// thousands commas and surrounding whitespace. Percent signs, units and
// exponents are rejected.
std::optional<Numeric> ParseNumeric(std::string_view text);

// Accepts YYYY-MM-DD and the unpadded YYYY-M-D form.
std::optional<Date> ParseDate(std::string_view text);

}  // namespace tabaug

#endif  // TABAUG_CELL_H_
