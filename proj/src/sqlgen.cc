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

#include "tabaug/sqlgen.h"

#include <cctype>

#include "tabaug/strings.h"

namespace tabaug {

namespace {

constexpr std::string_view kFence = "```";

std::optional<std::string> ParseUnits(std::string_view text) {
  for (const auto& line : SplitLines(text)) {
    std::string t = Trim(line);
    if (!StartsWithIgnoreCase(t, "Units:")) continue;
    std::string value = Trim(std::string_view(t).substr(6));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    return value;
  }
  return std::nullopt;
}

// Skips whitespace and leading "--" comment lines.
std::string_view SkipSqlPreamble(std::string_view s) {
  while (true) {
    s = TrimView(s);
    if (!s.starts_with("--")) return s;
    size_t nl = s.find('\n');
    if (nl == std::string_view::npos) return {};
    s.remove_prefix(nl + 1);
  }
}

bool LooksLikeSql(std::string_view s) {
  std::string_view body = SkipSqlPreamble(s);
  return StartsWithIgnoreCase(body, "select") || StartsWithIgnoreCase(body, "with") ||
         body.starts_with("(");
}

bool IsLanguageTag(std::string_view s) {
  if (s.empty() || s.size() > 16) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
      return false;
    }
  }
  return true;
}

}  // namespace

ExtractedSql ExtractSql(std::string_view response) {
  std::vector<size_t> fences;
  for (size_t pos = response.find(kFence); pos != std::string_view::npos;
       pos = response.find(kFence, pos + kFence.size())) {
    fences.push_back(pos);
  }

  ExtractedSql out;
  if (!fences.empty()) {
    size_t open;
    size_t close;
    if (fences.size() >= 2) {
      open = fences[fences.size() - 2];
      close = fences.back();
    } else {
      open = fences.back();
      close = response.size();
    }
    std::string_view body = response.substr(open + kFence.size(),
                                            close - open - kFence.size());
    size_t nl = body.find('\n');
    if (nl != std::string_view::npos && IsLanguageTag(TrimView(body.substr(0, nl)))) {
      body.remove_prefix(nl + 1);
    }
    out.sql = Trim(body);
    if (out.sql.empty()) throw NoFenceFound("empty SQL fence");
    if (close < response.size()) {
      out.units = ParseUnits(response.substr(close + kFence.size()));
    }
    return out;
  }

  if (!LooksLikeSql(response)) {
    throw NoFenceFound("no fenced SQL block and response is not bare SQL");
  }
  std::string_view body = response;
  for (size_t pos = 0; pos < body.size();) {
    size_t nl = body.find('\n', pos);
    std::string_view line = body.substr(pos, nl == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : nl - pos);
    if (StartsWithIgnoreCase(TrimView(line), "Units:")) {
      out.units = ParseUnits(body.substr(pos));
      body = body.substr(0, pos);
      break;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  out.sql = Trim(body);
  return out;
}

namespace {

std::string TitleLine(const Table& table) {
  return table.title().empty() ? std::string() : "Title: " + table.title() + "\n";
}

}  // namespace

std::string RenderSqlTask(std::string_view question, const TableBundle& bundle,
                          const SqlTaskOptions& options) {
  if (bundle.mode == BundleMode::kOpenJoined) {
    const Table& t1 = bundle.primary();
    return TitleLine(t1) +
           RenderCreateTable(t1, options.preview_rows, options.full_tables).text +
           "\n\nQ: " + std::string(question);
  }
  std::string text = "Report:\n" + Trim(options.document) + "\nTables:\n";
  text += RenderCreateTable(bundle.base, options.preview_rows, options.full_tables).text;
  if (bundle.augmenting) {
    text += "\n\n" +
            RenderCreateTable(*bundle.augmenting, options.preview_rows,
                              options.full_tables)
                .text;
  }
  text += "\n\nQ: " + std::string(question);
  return text;
}

std::vector<SqlCandidate> GenerateSql(std::string_view question,
                                      const TableBundle& bundle,
                                      LanguageModel& model,
                                      const PromptTemplate& tmpl,
                                      const GenerationParams& params,
                                      const SqlTaskOptions& options) {
  if (params.n_samples < 1) throw ConfigError("k must be >= 1");
  SqlTaskOptions opts = options;
  MessageSequence messages;
  // Shrink the table rendering until the prompt fits: full -> preview ->
  // fewer preview rows -> schema only.
  while (true) {
    try {
      messages = BuildPrompt(tmpl, RenderSqlTask(question, bundle, opts),
                             opts.token_limit, params.num_shots);
      break;
    } catch (const TokenBudgetExceeded&) {
      if (opts.full_tables) {
        opts.full_tables = false;
        opts.preview_rows = std::max<size_t>(opts.preview_rows, 3);
      } else if (opts.preview_rows > 0) {
        opts.preview_rows /= 2;
      } else {
        throw;
      }
    }
  }

  std::vector<std::string> responses = model.Complete(messages, params);
  std::vector<SqlCandidate> out;
  for (size_t i = 0; i < responses.size(); ++i) {
    SqlCandidate c;
    c.sample_index = static_cast<int>(i);
    c.raw_response = responses[i];
    size_t marker = FindLast(responses[i], "Final SQL query:");
    if (marker == std::string::npos) marker = FindLast(responses[i], kFence);
    c.reasoning = Trim(std::string_view(responses[i]).substr(
        0, marker == std::string::npos ? 0 : marker));
    try {
      ExtractedSql e = ExtractSql(responses[i]);
      c.sql = std::move(e.sql);
      c.units = std::move(e.units);
    } catch (const NoFenceFound& e) {
      c.valid = false;
      c.error = e.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace tabaug
