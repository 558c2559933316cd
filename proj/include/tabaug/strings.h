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

#ifndef TABAUG_STRINGS_H_
#define TABAUG_STRINGS_H_

#include <string>
#include <string_view>
#include <vector>

namespace tabaug {

std::string_view TrimView(std::string_view s);
std::string Trim(std::string_view s);
std::string ToLower(std::string_view s);

// Case-insensitive (ASCII) comparison.
bool EqualsIgnoreCase(std::string_view a, std::string_view b);
bool StartsWithIgnoreCase(std::string_view s, std::string_view prefix);

// Splits on every occurrence of `sep`; empty fields are kept.
std::vector<std::string> Split(std::string_view s, std::string_view sep);
std::vector<std::string> SplitLines(std::string_view s);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);
std::string ReplaceAll(std::string s, std::string_view from, std::string_view to);

// Collapses runs of whitespace into one space and trims the ends.
std::string CollapseWhitespace(std::string_view s);

// Position of the last occurrence of `needle`, or npos.
size_t FindLast(std::string_view haystack, std::string_view needle);

std::string ReadFile(const std::string& path);

}  // namespace tabaug

#endif  // TABAUG_STRINGS_H_
