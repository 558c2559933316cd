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

#ifndef TABAUG_CSV_H_
#define TABAUG_CSV_H_

#include <string>
#include <string_view>

#include "tabaug/tabular.h"

namespace tabaug {

// RFC 4180 style: quoted fields may contain the delimiter, doubled quotes and
// newlines. The first record is the header. A trailing empty line is ignored.
RawTable ParseDelimited(std::string_view text, char delimiter);

// Picks the delimiter from the extension: tab for .tsv, comma otherwise.
RawTable ReadTableFile(const std::string& path);

}  // namespace tabaug

#endif  // TABAUG_CSV_H_
