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

#include "tabaug/analysis.h"

#include <regex>

#include "json.hpp"
#include "tabaug/strings.h"

namespace tabaug {

namespace {

// Returns (before, after) around the last marker, or nullopt.
std::optional<std::pair<std::string_view, std::string_view>> SplitAtLastMarker(
    std::string_view text) {
  size_t pos = FindLast(text, kFinalOutputMarker);
  if (pos == std::string_view::npos) return std::nullopt;
  return std::make_pair(text.substr(0, pos),
                        text.substr(pos + kFinalOutputMarker.size()));
}

bool IsNoneLiteral(std::string_view s) {
  std::string t = Trim(s);
  while (!t.empty() && (t.back() == '.' || t.back() == ',')) t.pop_back();
  if (t.size() >= 2 && (t.front() == '"' || t.front() == '`' || t.front() == '\'') &&
      t.back() == t.front()) {
    t = t.substr(1, t.size() - 2);
  }
  return EqualsIgnoreCase(Trim(t), "none");
}

std::string StripQuotes(std::string_view s) {
  std::string t = Trim(s);
  if (t.size() >= 2 && (t.front() == '`' || t.front() == '"' || t.front() == '\'') &&
      t.back() == t.front()) {
    t = t.substr(1, t.size() - 2);
  }
  return t;
}

std::vector<std::string> ResolveColumns(std::string_view list, const Table& table,
                                        std::string_view line) {
  std::vector<std::string> pieces = Split(list, ",");
  std::vector<std::string> out;
  size_t i = 0;
  while (i < pieces.size()) {
    bool matched = false;
    // Longest run of pieces that names a column, so names containing commas
    // still resolve.
    for (size_t j = pieces.size(); j > i; --j) {
      std::vector<std::string> run(pieces.begin() + i, pieces.begin() + j);
      std::string candidate = StripQuotes(Join(run, ","));
      if (auto idx = table.FindColumn(candidate)) {
        out.push_back(table.columns()[*idx].name);
        i = j;
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw ParseError("unknown column '" + StripQuotes(pieces[i]) +
                       "' in plan line: " + std::string(line));
    }
  }
  return out;
}

std::string TitleLine(const Table& table) {
  return table.title().empty() ? std::string() : "Title: " + table.title() + "\n";
}

}  // namespace

std::vector<AugmentationQuery> ParsePlan(std::string_view response,
                                         const Table& table) {
  auto split = SplitAtLastMarker(response);
  if (!split) throw ParseError("no \"Final output:\" marker in response");

  static const std::regex kLine(
      R"re(^`?([^`=]+?)`?\s*=\s*@\(\s*"(.*)"\s*;\s*\[(.*)\]\s*\)\s*,?$)re");
  std::vector<std::string> lines;
  for (auto& raw : SplitLines(split->second)) {
    std::string line = Trim(raw);
    if (line.empty() || line.starts_with("```")) continue;
    if (line.starts_with("- ") || line.starts_with("* ")) line = Trim(line.substr(2));
    lines.push_back(std::move(line));
  }
  if (lines.empty()) throw ParseError("empty final output block");
  if (lines.size() == 1 && IsNoneLiteral(lines[0])) return {};

  std::vector<AugmentationQuery> queries;
  for (const auto& line : lines) {
    std::smatch m;
    if (!std::regex_match(line, m, kLine)) {
      throw ParseError("unrecognized plan line: " + line);
    }
    AugmentationQuery q;
    q.new_column = SanitizeIdentifier(m[1].str());
    q.question = Trim(m[2].str());
    if (q.question.empty()) throw ParseError("empty question in plan line: " + line);
    std::string list = Trim(m[3].str());
    if (list.empty()) throw ParseError("no relevant columns in plan line: " + line);
    q.relevant_columns = ResolveColumns(list, table, line);
    queries.push_back(std::move(q));
  }
  return queries;
}

std::string RenderPlan(const std::vector<AugmentationQuery>& queries) {
  std::string out(kFinalOutputMarker);
  out += "\n";
  if (queries.empty()) return out + "None";
  for (size_t i = 0; i < queries.size(); ++i) {
    const auto& q = queries[i];
    out += "`" + q.new_column + "` = @(\"" + q.question + "\"; [" +
           Join(q.relevant_columns, ", ") + "])";
    if (i + 1 < queries.size()) out += "\n";
  }
  return out;
}

AugmentationPlan PlanFromResponse(std::string response, const Table& table) {
  AugmentationPlan plan;
  if (auto split = SplitAtLastMarker(response)) {
    plan.reasoning = Trim(split->first);
  }
  try {
    plan.queries = ParsePlan(response, table);
  } catch (const ParseError& e) {
    plan.queries.clear();
    plan.warnings.push_back(std::string("plan parse error, continuing without "
                                        "augmentation: ") + e.what());
  }
  plan.raw_response = std::move(response);
  return plan;
}

std::string RenderAnalyzeTask(std::string_view question, const Table& table,
                              size_t preview_rows) {
  return TitleLine(table) +
         RenderCreateTable(table, preview_rows, false).text + "\n\nQ: " +
         std::string(question);
}

std::vector<AugmentationPlan> PlanAugmentation(std::string_view question,
                                               const Table& table,
                                               LanguageModel& model,
                                               const PromptTemplate& tmpl,
                                               const GenerationParams& params,
                                               const StepOptions& options) {
  const Table t1 = table.WithName("t1");
  MessageSequence messages;
  size_t preview = options.preview_rows;
  while (true) {
    try {
      messages = BuildPrompt(tmpl, RenderAnalyzeTask(question, t1, preview),
                             options.token_limit, params.num_shots);
      break;
    } catch (const TokenBudgetExceeded&) {
      if (preview == 0) throw;
      preview /= 2;
    }
  }
  std::vector<AugmentationPlan> plans;
  for (auto& response : model.Complete(messages, params)) {
    plans.push_back(PlanFromResponse(std::move(response), t1));
  }
  return plans;
}

namespace {

// Index one past the brace closing the object that starts at `open`.
std::optional<size_t> MatchBrace(std::string_view s, size_t open) {
  int depth = 0;
  bool in_string = false;
  for (size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::nullopt;
}

std::string JsonScalarText(const nlohmann::ordered_json& v, const std::string& key) {
  if (v.is_null()) throw ParseError("column '" + key + "' contains null");
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    std::string t = ToLower(Trim(s));
    if (t == "nan" || t == "null" || t.empty()) {
      throw ParseError("column '" + key + "' contains an empty or NaN value");
    }
    return s;
  }
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) return FormatReal(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw ParseError("column '" + key + "' contains a nested value");
}

std::string NormalizeExtractedValue(const std::string& s) {
  if (auto n = ParseNumeric(s)) {
    return n->integer ? std::to_string(*n->integer) : FormatReal(n->value);
  }
  return s;
}

}  // namespace

std::optional<ClosedDomainExtraction> ParseExtraction(std::string_view response) {
  std::string_view block = response;
  if (auto split = SplitAtLastMarker(response)) block = split->second;

  std::vector<std::string> lines;
  for (auto& line : SplitLines(block)) {
    if (Trim(line).starts_with("```")) continue;
    lines.push_back(line);
  }
  std::string body = Trim(Join(lines, "\n"));
  if (body.empty()) throw ParseError("empty final output block");
  size_t open = body.find('{');
  if (open == std::string::npos) {
    if (IsNoneLiteral(SplitLines(body).front())) return std::nullopt;
    throw ParseError("no JSON object in final output");
  }
  if (open > 0 && IsNoneLiteral(body.substr(0, open))) return std::nullopt;
  auto close = MatchBrace(body, open);
  if (!close) throw ParseError("unterminated JSON object");

  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(body.substr(open, *close - open));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("final output is not a JSON object");
  if (j.empty()) return std::nullopt;

  ClosedDomainExtraction out;
  out.raw_response = std::string(response);
  for (const auto& [key, value] : j.items()) {
    std::vector<std::string> values;
    if (value.is_array()) {
      for (const auto& v : value) values.push_back(JsonScalarText(v, key));
    } else {
      values.push_back(JsonScalarText(value, key));
    }
    if (values.empty()) throw ParseError("column '" + key + "' has no values");
    out.columns.emplace_back(key, std::move(values));
  }
  const size_t rows = out.columns.front().second.size();
  for (const auto& [key, values] : out.columns) {
    if (values.size() != rows) {
      throw LengthMismatchError("column '" + key + "' has " +
                                std::to_string(values.size()) + " values, '" +
                                out.columns.front().first + "' has " +
                                std::to_string(rows));
    }
  }
  return out;
}

Table ClosedDomainExtraction::ToTable(std::string name) const {
  RawTable raw;
  for (const auto& [key, values] : columns) raw.header.push_back(key);
  for (size_t r = 0; r < row_count(); ++r) {
    std::vector<std::string> row;
    for (const auto& [key, values] : columns) {
      row.push_back(NormalizeExtractedValue(values[r]));
    }
    raw.rows.push_back(std::move(row));
  }
  return Table::Ingest(raw, std::move(name), Provenance::kAugmenting);
}

std::string RenderExtractTask(std::string_view question, const Table& table,
                              std::string_view document) {
  return "Report:\n" + Trim(document) + "\nTables:\n" + RenderPipe(table).text +
         "\n\nQuestion: " + std::string(question);
}

std::vector<ExtractionResult> ExtractClosedDomain(std::string_view question,
                                                  const Table& table,
                                                  std::string_view document,
                                                  LanguageModel& model,
                                                  const PromptTemplate& tmpl,
                                                  const GenerationParams& params,
                                                  size_t token_limit) {
  if (Trim(document).empty()) throw InputError("closed-domain question has no document");
  MessageSequence messages = BuildPrompt(
      tmpl, RenderExtractTask(question, table, document), token_limit,
      params.num_shots);
  std::vector<ExtractionResult> results;
  for (auto& response : model.Complete(messages, params)) {
    ExtractionResult r;
    try {
      r.extraction = ParseExtraction(response);
    } catch (const ParseError& e) {
      r.warnings.push_back(std::string("extraction rejected, continuing without "
                                       "augmentation: ") + e.what());
    }
    r.raw_response = std::move(response);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace tabaug
