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

#include "tabaug/augment.h"

#include <cctype>
#include <future>
#include <map>
#include <regex>

#include "tabaug/strings.h"

namespace tabaug {

std::string_view BundleModeName(BundleMode mode) {
  return mode == BundleMode::kOpenJoined ? "open_joined" : "closed_separate";
}

namespace {

std::string OneLine(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return out;
}

std::vector<size_t> RelevantIndexes(const AugmentationQuery& query,
                                    const Table& table) {
  std::vector<size_t> idx;
  for (const auto& name : query.relevant_columns) {
    auto i = table.FindColumn(name);
    if (!i) throw Error("relevant column '" + name + "' is not in the table");
    idx.push_back(*i);
  }
  return idx;
}

std::vector<std::string> SplitFields(std::string_view s) {
  static const std::regex kSep(R"(\t+| {2,})");
  std::string text = Trim(s);
  std::vector<std::string> out;
  std::sregex_token_iterator it(text.begin(), text.end(), kSep, -1), end;
  for (; it != end; ++it) {
    std::string f = Trim(it->str());
    if (!f.empty()) out.push_back(std::move(f));
  }
  return out;
}

std::string StripEcho(std::string_view rest, const std::vector<std::string>& echoed) {
  std::string_view r = TrimView(rest);
  bool echo_ok = true;
  for (const auto& v : echoed) {
    std::string_view value = TrimView(v);
    if (value.empty()) continue;
    if (r.starts_with(value)) {
      r = TrimView(r.substr(value.size()));
    } else {
      echo_ok = false;
      break;
    }
  }
  if (echo_ok) return std::string(r);
  auto fields = SplitFields(rest);
  return fields.empty() ? std::string() : fields.back();
}

// Leading integer token followed by whitespace (or end of line).
std::optional<std::pair<size_t, std::string>> LeadingRowId(std::string_view line) {
  std::string_view s = TrimView(line);
  size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == 0 || i > 9) return std::nullopt;
  if (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) {
    return std::nullopt;
  }
  return std::make_pair(static_cast<size_t>(std::stoul(std::string(s.substr(0, i)))),
                        std::string(s.substr(i)));
}

}  // namespace

std::string RenderRowwiseTask(const AugmentationQuery& query, const Table& table,
                              size_t first_row, size_t end_row) {
  std::vector<size_t> idx = RelevantIndexes(query, table);
  std::string text = "Give a database as shown below:\n";
  if (!table.title().empty()) text += "Table: " + table.title() + "\n";
  text += "/*\nrow_id";
  for (size_t c : idx) text += "\t" + table.columns()[c].name;
  text += "\n";
  for (size_t r = first_row; r < end_row; ++r) {
    text += std::to_string(r);
    for (size_t c : idx) text += "\t" + OneLine(table.cell(r, c).raw);
    text += "\n";
  }
  text += "*/\nQ: Answer question \"" + query.question + "\" row by row.";
  return text;
}

std::vector<std::string> ParseRowwiseResponse(std::string_view response,
                                              const AugmentationQuery& query,
                                              const Table& table, size_t first_row,
                                              size_t end_row) {
  const size_t expected = end_row - first_row;
  std::string_view block = response;
  size_t open = FindLast(response, "/*");
  if (open != std::string_view::npos) {
    size_t close = response.find("*/", open + 2);
    block = response.substr(open + 2, close == std::string_view::npos
                                          ? std::string_view::npos
                                          : close - open - 2);
  } else if (size_t out = FindLast(response, "Output:"); out != std::string_view::npos) {
    block = response.substr(out + 7);
  }

  std::vector<std::string> lines;
  for (auto& line : SplitLines(block)) {
    std::string t = Trim(line);
    if (t.empty() || t.starts_with("```")) continue;
    if (StartsWithIgnoreCase(t, kRowIdColumn)) continue;  // header
    lines.push_back(line);
  }

  std::vector<size_t> idx = RelevantIndexes(query, table);
  auto echoed = [&](size_t row) {
    std::vector<std::string> values;
    for (size_t c : idx) values.push_back(OneLine(table.cell(row, c).raw));
    return values;
  };

  bool keyed = !lines.empty();
  for (const auto& line : lines) keyed = keyed && LeadingRowId(line).has_value();

  std::vector<std::string> answers(expected);
  if (keyed) {
    std::map<size_t, std::string> by_id;
    for (const auto& line : lines) {
      auto [id, rest] = *LeadingRowId(line);
      if (id < first_row || id >= end_row) {
        throw AlignmentError("response names unknown row_id " + std::to_string(id));
      }
      if (!by_id.emplace(id, rest).second) {
        throw AlignmentError("response repeats row_id " + std::to_string(id));
      }
    }
    if (by_id.size() != expected) {
      throw AlignmentError("response covers " + std::to_string(by_id.size()) +
                           " of " + std::to_string(expected) + " rows");
    }
    for (const auto& [id, rest] : by_id) {
      answers[id - first_row] = StripEcho(rest, echoed(id));
    }
    return answers;
  }
  if (lines.size() != expected) {
    throw AlignmentError("response has " + std::to_string(lines.size()) +
                         " rows, table has " + std::to_string(expected));
  }
  for (size_t i = 0; i < expected; ++i) {
    answers[i] = StripEcho(lines[i], echoed(first_row + i));
  }
  return answers;
}

namespace {

std::vector<std::string> AnswerChunk(const AugmentationQuery& query,
                                     const Table& table, LanguageModel& model,
                                     const PromptTemplate& tmpl,
                                     const GenerationParams& params,
                                     size_t token_limit, size_t first, size_t end) {
  MessageSequence messages;
  try {
    messages = BuildPrompt(tmpl, RenderRowwiseTask(query, table, first, end),
                           token_limit, params.num_shots);
  } catch (const TokenBudgetExceeded&) {
    if (end - first <= 1) throw;
    size_t mid = first + (end - first) / 2;
    auto left = AnswerChunk(query, table, model, tmpl, params, token_limit, first, mid);
    auto right = AnswerChunk(query, table, model, tmpl, params, token_limit, mid, end);
    left.insert(left.end(), right.begin(), right.end());
    return left;
  }
  GenerationParams single = params;
  single.n_samples = 1;
  for (int attempt = 0;; ++attempt) {
    auto responses = model.Complete(messages, single);
    try {
      return ParseRowwiseResponse(responses.at(0), query, table, first, end);
    } catch (const AlignmentError&) {
      if (attempt >= 1) throw;
    }
  }
}

}  // namespace

std::vector<std::string> AnswerRowwise(const AugmentationQuery& query,
                                       const Table& table, LanguageModel& model,
                                       const PromptTemplate& tmpl,
                                       const GenerationParams& params,
                                       size_t token_limit) {
  if (table.row_count() == 0) return {};
  return AnswerChunk(query, table, model, tmpl, params, token_limit, 0,
                     table.row_count());
}

TableBundle BuildBundle(const AugmentationPlan& plan, const Table& base,
                        LanguageModel& model, const PromptTemplate& tmpl,
                        const GenerationParams& params, size_t token_limit) {
  TableBundle bundle{base.WithName("t1"), std::nullopt, std::nullopt,
                     BundleMode::kOpenJoined, {}};
  if (plan.queries.empty()) return bundle;

  std::vector<std::future<std::vector<std::string>>> pending;
  for (const auto& query : plan.queries) {
    pending.push_back(std::async(std::launch::async, [&, query] {
      return AnswerRowwise(query, bundle.base, model, tmpl, params, token_limit);
    }));
  }

  RawTable raw;
  raw.rows.resize(base.row_count());
  for (size_t q = 0; q < plan.queries.size(); ++q) {
    std::vector<std::string> column;
    try {
      column = pending[q].get();
    } catch (const AlignmentError& e) {
      bundle.dropped.push_back({plan.queries[q].new_column, e.what()});
      continue;
    }
    raw.header.push_back(plan.queries[q].new_column);
    for (size_t r = 0; r < column.size(); ++r) raw.rows[r].push_back(column[r]);
  }
  if (raw.header.empty()) return bundle;

  Table aug = Table::Ingest(raw, "aug", Provenance::kAugmenting);
  bundle.joined = JoinOnRowId(bundle.base, aug);
  bundle.augmenting = std::move(aug);
  return bundle;
}

TableBundle BuildBundle(const std::optional<ClosedDomainExtraction>& extraction,
                        const Table& base) {
  TableBundle bundle{base.WithName("t1"), std::nullopt, std::nullopt,
                     BundleMode::kClosedSeparate, {}};
  if (extraction) bundle.augmenting = extraction->ToTable("t2");
  return bundle;
}

}  // namespace tabaug
