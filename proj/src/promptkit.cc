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

#include "tabaug/promptkit.h"

#include <algorithm>

#include "tabaug/strings.h"

namespace tabaug {

namespace {

constexpr std::string_view kPipe = " | ";
constexpr size_t kColumnGap = 4;

std::string SingleLine(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return out;
}

std::string EscapePipeCell(std::string_view s) {
  std::string out = SingleLine(s);
  // Overlapping separators (" | | ") need more than one pass.
  while (out.find(kPipe) != std::string::npos) out = ReplaceAll(out, kPipe, " / ");
  if (out.size() >= 2 && out.ends_with(" |")) out.back() = '/';
  return out;
}

std::string JoinRow(const std::vector<std::string>& cells) {
  return Join(cells, kPipe);
}

std::string PadRight(std::string s, size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string StripBlankEdges(std::string_view s) {
  // Drop leading and trailing newlines only; trailing spaces inside lines are
  // part of the template text.
  while (!s.empty() && (s.front() == '\n' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

}  // namespace

size_t EstimateTokens(std::string_view text) { return (text.size() + 3) / 4; }

TableRendering RenderPipe(const Table& table) {
  std::vector<std::string> lines;
  std::vector<std::string> cells;
  for (const auto& col : table.columns()) cells.push_back(EscapePipeCell(col.name));
  lines.push_back(JoinRow(cells));
  for (const auto& row : table.rows()) {
    cells.clear();
    for (const auto& cell : row) cells.push_back(EscapePipeCell(cell.raw));
    lines.push_back(JoinRow(cells));
  }
  TableRendering out;
  out.mode = RenderMode::kPipeRows;
  out.text = Join(lines, "\n");
  out.token_estimate = EstimateTokens(out.text);
  return out;
}

std::vector<std::string> SplitPipeRow(std::string_view line) {
  return Split(line, kPipe);
}

TableRendering RenderCreateTable(const Table& table, size_t preview_rows,
                                 bool full) {
  std::string text = "CREATE TABLE " + table.name() + "(\n";
  const auto& columns = table.columns();
  for (size_t c = 0; c < columns.size(); ++c) {
    text += "    " + columns[c].name + " ";
    text += SqlTypeName(columns[c].type);
    text += c + 1 < columns.size() ? ",\n" : ")";
  }

  TableRendering out;
  out.mode = full ? RenderMode::kCreateTableFull : RenderMode::kCreateTablePreview;
  if (full) {
    text += "\n/*\nAll rows of the table:\nSELECT * FROM " + table.name() + ";\n";
    std::vector<std::string> cells;
    for (const auto& col : columns) cells.push_back(col.name);
    text += Join(cells, "\t") + "\n";
    for (const auto& row : table.rows()) {
      cells.clear();
      for (const auto& cell : row) cells.push_back(SingleLine(cell.raw));
      text += Join(cells, "\t") + "\n";
    }
    text += "*/";
  } else if (preview_rows > 0) {
    const size_t shown = std::min(preview_rows, table.row_count());
    std::vector<size_t> widths(columns.size());
    for (size_t c = 0; c < columns.size(); ++c) {
      widths[c] = columns[c].name.size();
      for (size_t r = 0; r < shown; ++r) {
        widths[c] = std::max(widths[c], SingleLine(table.cell(r, c).raw).size());
      }
    }
    auto aligned = [&](auto cell_text) {
      std::string line;
      for (size_t c = 0; c < columns.size(); ++c) {
        std::string value = cell_text(c);
        line += c + 1 < columns.size() ? PadRight(value, widths[c] + kColumnGap)
                                       : value;
      }
      return line;
    };
    text += "\n/*\n" + std::to_string(shown) + " example rows:\nSELECT * FROM " +
            table.name() + " LIMIT " + std::to_string(shown) + ";\n";
    text += aligned([&](size_t c) { return columns[c].name; }) + "\n";
    for (size_t r = 0; r < shown; ++r) {
      text += aligned([&](size_t c) { return SingleLine(table.cell(r, c).raw); });
      text += "\n";
    }
    text += "*/";
  }
  out.text = std::move(text);
  out.token_estimate = EstimateTokens(out.text);
  return out;
}

PromptTemplate ParseTemplate(std::string_view text) {
  PromptTemplate tmpl;
  std::vector<std::string> lines = SplitLines(text);
  size_t i = 0;
  std::optional<size_t> declared_shots;
  if (i < lines.size() && Trim(lines[i]) == "---") {
    ++i;
    bool closed = false;
    for (; i < lines.size(); ++i) {
      if (Trim(lines[i]) == "---") {
        closed = true;
        ++i;
        break;
      }
      size_t colon = lines[i].find(':');
      if (colon == std::string::npos) {
        throw InputError("template front matter: expected 'key: value', got '" +
                         lines[i] + "'");
      }
      std::string key = Trim(std::string_view(lines[i]).substr(0, colon));
      std::string value = Trim(std::string_view(lines[i]).substr(colon + 1));
      if (key == "id") tmpl.id = value;
      else if (key == "step") tmpl.step = value;
      else if (key == "dataset") tmpl.dataset = value;
      else if (key == "num_shots") declared_shots = std::stoul(value);
    }
    if (!closed) throw InputError("template front matter is not terminated");
  }

  enum class Section { kNone, kSystem, kInput, kOutput };
  Section section = Section::kNone;
  std::string buffer;
  std::optional<std::string> pending_input;
  auto flush = [&] {
    std::string body = StripBlankEdges(buffer);
    buffer.clear();
    switch (section) {
      case Section::kNone:
        if (!Trim(body).empty()) {
          throw InputError("template text outside of a section");
        }
        break;
      case Section::kSystem:
        tmpl.system_text = body;
        break;
      case Section::kInput:
        if (pending_input) throw InputError("SHOT INPUT without SHOT OUTPUT");
        pending_input = body;
        break;
      case Section::kOutput:
        if (!pending_input) throw InputError("SHOT OUTPUT without SHOT INPUT");
        tmpl.shots.push_back({*pending_input, body});
        pending_input.reset();
        break;
    }
  };
  for (; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line == "### SYSTEM" || line == "### SHOT INPUT" ||
        line == "### SHOT OUTPUT") {
      flush();
      section = line == "### SYSTEM"       ? Section::kSystem
                : line == "### SHOT INPUT" ? Section::kInput
                                           : Section::kOutput;
      continue;
    }
    buffer += line;
    buffer += '\n';
  }
  flush();
  if (pending_input) throw InputError("SHOT INPUT without SHOT OUTPUT");
  if (declared_shots && *declared_shots != tmpl.shots.size()) {
    throw InputError("template " + tmpl.id + " declares num_shots " +
                     std::to_string(*declared_shots) + " but has " +
                     std::to_string(tmpl.shots.size()));
  }
  return tmpl;
}

PromptTemplate LoadTemplate(const std::string& path) {
  try {
    return ParseTemplate(ReadFile(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

TokenBudgetExceeded::TokenBudgetExceeded(size_t estimate, size_t limit)
    : Error("prompt needs ~" + std::to_string(estimate) +
            " tokens, context limit is " + std::to_string(limit)),
      estimate_(estimate),
      limit_(limit) {}

size_t EstimateTokens(const MessageSequence& messages) {
  size_t total = 0;
  for (const auto& m : messages) total += EstimateTokens(m.content);
  return total;
}

MessageSequence BuildPrompt(const PromptTemplate& tmpl, std::string_view task,
                            size_t token_limit, std::optional<size_t> max_shots) {
  MessageSequence messages;
  if (!tmpl.system_text.empty()) messages.push_back({"system", tmpl.system_text});
  size_t shots = tmpl.shots.size();
  if (max_shots) shots = std::min(shots, *max_shots);
  for (size_t i = 0; i < shots; ++i) {
    messages.push_back({"user", tmpl.shots[i].input});
    messages.push_back({"assistant", tmpl.shots[i].output});
  }
  messages.push_back({"user", std::string(task)});
  if (token_limit > 0) {
    size_t estimate = EstimateTokens(messages);
    if (estimate > token_limit) throw TokenBudgetExceeded(estimate, token_limit);
  }
  return messages;
}

}  // namespace tabaug
