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

#include "tabaug/cell.h"

#include <array>
#include <charconv>
#include <cstdio>

#include "tabaug/strings.h"

namespace tabaug {

namespace {

constexpr std::array<std::string_view, 4> kCurrencySymbols = {
    "$", "\xE2\x82\xAC", "\xC2\xA3", "\xC2\xA5"};

bool ConsumeCurrency(std::string_view& s) {
  for (std::string_view sym : kCurrencySymbols) {
    if (s.starts_with(sym)) {
      s.remove_prefix(sym.size());
      return true;
    }
  }
  return false;
}

bool ConsumeSign(std::string_view& s, bool& negative) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
    return true;
  }
  return false;
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

int DaysInMonth(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30,
                                  31, 31, 30, 31, 30, 31};
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[month - 1];
}

}  // namespace

std::string Date::Iso() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::string FormatReal(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string CellToString(const CellValue& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return FormatReal(d); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const Date& d) const { return d.Iso(); }
  };
  return std::visit(Visitor{}, v);
}

std::optional<Numeric> ParseNumeric(std::string_view text) {
  std::string_view s = TrimView(text);
  bool negative = false;
  bool signed_already = ConsumeSign(s, negative);
  if (ConsumeCurrency(s)) {
    s = TrimView(s);
    if (!signed_already) ConsumeSign(s, negative);
  }
  if (s.empty()) return std::nullopt;

  std::string digits;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : s) {
    if (IsDigit(c)) {
      digits.push_back(c);
      seen_digit = true;
    } else if (c == ',') {
      continue;
    } else if (c == '.' && !seen_dot) {
      digits.push_back(c);
      seen_dot = true;
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;

  Numeric out;
  std::string signed_digits = negative ? "-" + digits : digits;
  const char* begin = signed_digits.data();
  const char* end = begin + signed_digits.size();
  if (!seen_dot) {
    std::int64_t i = 0;
    auto res = std::from_chars(begin, end, i);
    if (res.ec == std::errc() && res.ptr == end) out.integer = i;
  }
  auto res = std::from_chars(begin, end, out.value);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return out;
}

std::optional<Date> ParseDate(std::string_view text) {
  std::string_view s = TrimView(text);
  auto parts = Split(s, "-");
  if (parts.size() != 3) return std::nullopt;
  auto all_digits = [](const std::string& p, size_t lo, size_t hi) {
    if (p.size() < lo || p.size() > hi) return false;
    for (char c : p) {
      if (!IsDigit(c)) return false;
    }
    return true;
  };
  if (!all_digits(parts[0], 4, 4) || !all_digits(parts[1], 1, 2) ||
      !all_digits(parts[2], 1, 2)) {
    return std::nullopt;
  }
  Date d{std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2])};
  if (d.month < 1 || d.month > 12) return std::nullopt;
  if (d.day < 1 || d.day > DaysInMonth(d.year, d.month)) return std::nullopt;
  return d;
}

}  // namespace tabaug
