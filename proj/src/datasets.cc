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

#include "tabaug/datasets.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "tabaug/cell.h"
#include "tabaug/csv.h"
#include "tabaug/strings.h"

namespace tabaug {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string ReadOrMissing(const fs::path& p) {
  if (!fs::exists(p)) throw MissingFile("missing file: " + p.string());
  return ReadFile(p.string());
}

json ReadJson(const fs::path& p) {
  std::string text = ReadOrMissing(p);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

std::string JsonToText(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return FormatReal(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_null()) return "";
  return v.dump();
}

// Dataset-native tables: a list of rows, the first being the header.
RawTable RawFromRows(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw InputError("table has no rows");
  RawTable raw;
  for (const auto& cell : rows.front()) {
    std::string name = Trim(JsonToText(cell));
    raw.header.push_back(name.empty() ? std::string(kFilledColumnName) : name);
  }
  for (size_t r = 1; r < rows.size(); ++r) {
    std::vector<std::string> row;
    for (const auto& cell : rows[r]) row.push_back(JsonToText(cell));
    raw.rows.push_back(std::move(row));
  }
  return raw;
}

void Skip(LoadResult& out, std::string reason) {
  ++out.skipped;
  out.skip_reasons.push_back(std::move(reason));
}

RawTable ReadWikiTQTable(const fs::path& csv_path) {
  fs::path tsv = csv_path;
  tsv.replace_extension(".tsv");
  if (fs::exists(tsv)) {
    std::string text = ReadFile(tsv.string());
    RawTable raw;
    bool first = true;
    for (const auto& line : SplitLines(text)) {
      if (line.empty()) continue;
      std::vector<std::string> fields;
      for (const auto& f : Split(line, "\t")) fields.push_back(UnescapeWikiTQ(f));
      if (first) {
        raw.header = std::move(fields);
        first = false;
      } else {
        raw.rows.push_back(std::move(fields));
      }
    }
    return raw;
  }
  if (!fs::exists(csv_path)) throw MissingFile("missing table: " + csv_path.string());
  return ReadTableFile(csv_path.string());
}

std::string WikiTQTitle(const fs::path& root, const std::string& context) {
  // csv/204-csv/590.csv -> page/204-page/590.json
  fs::path ctx(context);
  std::string dir = ctx.parent_path().filename().string();
  auto dash = dir.find("-csv");
  if (dash == std::string::npos) return "";
  fs::path page = root / "page" / (dir.substr(0, dash) + "-page") /
                  (ctx.stem().string() + ".json");
  if (!fs::exists(page)) return "";
  try {
    json j = json::parse(ReadFile(page.string()));
    return j.value("title", "");
  } catch (const std::exception&) {
    return "";
  }
}

}  // namespace

std::vector<size_t> WikiTQSubsetIndices(size_t n) {
  std::vector<size_t> out;
  for (size_t i = 0; i < std::min<size_t>(n, 4000); i += 4) out.push_back(i);
  return out;
}

std::string UnescapeWikiTQ(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      char n = s[i + 1];
      if (n == 'n') { out.push_back('\n'); ++i; continue; }
      if (n == 'p') { out.push_back('|'); ++i; continue; }
      if (n == '\\') { out.push_back('\\'); ++i; continue; }
    }
    out.push_back(s[i]);
  }
  return out;
}

std::optional<int> CountRequiredCells(std::string_view derivation,
                                      const Table& table) {
  if (Trim(derivation).empty()) return std::nullopt;
  std::vector<double> cells;
  for (const auto& row : table.rows()) {
    for (size_t c = 1; c < row.size(); ++c) {
      std::string raw = Trim(row[c].raw);
      if (raw.size() > 2 && raw.front() == '(' && raw.back() == ')') {
        raw = raw.substr(1, raw.size() - 2);
      }
      if (!raw.empty() && raw.back() == '%') raw.pop_back();
      if (auto n = ParseNumeric(raw)) cells.push_back(std::fabs(n->value));
    }
  }
  int count = 0;
  size_t i = 0;
  while (i < derivation.size()) {
    char c = derivation[i];
    bool starts = std::isdigit(static_cast<unsigned char>(c)) &&
                  (i == 0 || !(std::isalnum(static_cast<unsigned char>(derivation[i - 1])) ||
                               derivation[i - 1] == '_' || derivation[i - 1] == '#' ||
                               derivation[i - 1] == '.'));
    if (!starts) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < derivation.size() &&
           (std::isdigit(static_cast<unsigned char>(derivation[j])) ||
            derivation[j] == ',' || derivation[j] == '.')) {
      ++j;
    }
    std::string token(derivation.substr(i, j - i));
    while (!token.empty() && (token.back() == ',' || token.back() == '.')) token.pop_back();
    if (auto n = ParseNumeric(token)) {
      for (double v : cells) {
        if (std::fabs(v - std::fabs(n->value)) < 1e-9) {
          ++count;
          break;
        }
      }
    }
    i = j;
  }
  return count;
}

LoadResult LoadWikiTQ(const std::string& path, bool subset) {
  fs::path p(path);
  fs::path questions_file;
  fs::path root;
  if (fs::is_directory(p)) {
    root = p;
    questions_file = p / "data" / "pristine-unseen-tables.tsv";
  } else {
    questions_file = p;
    root = p.parent_path();
    if (root.filename() == "data") root = root.parent_path();
  }
  std::string text = ReadOrMissing(questions_file);

  struct Row {
    std::string id, utterance, context, target;
  };
  std::vector<Row> rows;
  LoadResult out;
  auto lines = SplitLines(text);
  std::optional<size_t> id_col, utt_col, ctx_col, tgt_col;
  bool header_seen = false;
  for (const auto& line : lines) {
    if (line.empty()) continue;
    auto fields = Split(line, "\t");
    if (!header_seen) {
      header_seen = true;
      for (size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "id") id_col = i;
        else if (fields[i] == "utterance") utt_col = i;
        else if (fields[i] == "context") ctx_col = i;
        else if (fields[i] == "targetValue") tgt_col = i;
      }
      if (!id_col || !utt_col || !ctx_col || !tgt_col) {
        throw InputError(questions_file.string() +
                         ": expected id, utterance, context and targetValue columns");
      }
      continue;
    }
    ++out.records;
    size_t need = std::max({*id_col, *utt_col, *ctx_col, *tgt_col});
    if (fields.size() <= need) {
      rows.push_back({});  // keeps subset indices aligned with the file
      continue;
    }
    rows.push_back({fields[*id_col], fields[*utt_col], fields[*ctx_col], fields[*tgt_col]});
  }

  std::vector<size_t> indices;
  if (subset) {
    indices = WikiTQSubsetIndices(rows.size());
    out.filtered_out = rows.size() - indices.size();
  } else {
    for (size_t i = 0; i < rows.size(); ++i) indices.push_back(i);
  }
  for (size_t idx : indices) {
    const Row& row = rows[idx];
    if (row.id.empty()) {
      Skip(out, "record " + std::to_string(idx) + ": too few fields");
      continue;
    }
    try {
      RawTable raw = ReadWikiTQTable(root / row.context);
      Table table = Table::Ingest(raw, "t", Provenance::kOriginal,
                                  WikiTQTitle(root, row.context));
      std::vector<std::string> gold;
      for (const auto& g : Split(row.target, "|")) gold.push_back(UnescapeWikiTQ(g));
      out.questions.push_back(Question{row.id, DatasetId::kWikiTQ,
                                       UnescapeWikiTQ(row.utterance), std::move(table),
                                       std::nullopt, std::move(gold), std::nullopt});
    } catch (const InputError& e) {
      Skip(out, row.id + ": " + e.what());
    }
  }
  return out;
}

LoadResult LoadTatQA(const std::string& path) {
  json data = ReadJson(path);
  if (!data.is_array()) throw InputError(path + ": expected a JSON array");
  LoadResult out;
  for (const auto& entry : data) {
    const size_t n_questions =
        entry.contains("questions") && entry["questions"].is_array()
            ? entry["questions"].size()
            : 1;
    out.records += n_questions;
    try {
      RawTable raw = RawFromRows(entry.at("table").at("table"));
      Table table = Table::Ingest(raw, "t");

      std::vector<std::pair<int, std::string>> paragraphs;
      for (const auto& para : entry.at("paragraphs")) {
        paragraphs.emplace_back(para.value("order", 0), para.at("text").get<std::string>());
      }
      std::stable_sort(paragraphs.begin(), paragraphs.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<std::string> texts;
      for (auto& [order, t] : paragraphs) texts.push_back(t);
      const std::string document = Join(texts, "\n");

      for (const auto& q : entry.at("questions")) {
        try {
          if (q.at("answer_from").get<std::string>() != "table-text") {
            ++out.filtered_out;
            continue;
          }
          std::vector<std::string> gold;
          const json& answer = q.at("answer");
          if (answer.is_array()) {
            for (const auto& a : answer) gold.push_back(JsonToText(a));
          } else {
            gold.push_back(JsonToText(answer));
          }
          std::string derivation = q.value("derivation", "");
          out.questions.push_back(Question{q.at("uid").get<std::string>(),
                                           DatasetId::kTatQA,
                                           q.at("question").get<std::string>(), table,
                                           document, std::move(gold),
                                           CountRequiredCells(derivation, table)});
        } catch (const std::exception& e) {
          Skip(out, std::string("question: ") + e.what());
        }
      }
    } catch (const std::exception& e) {
      out.skipped += n_questions;
      out.skip_reasons.push_back(std::string("entry: ") + e.what());
    }
  }
  return out;
}

LoadResult LoadFinQA(const std::string& path) {
  json data = ReadJson(path);
  if (!data.is_array()) throw InputError(path + ": expected a JSON array");
  LoadResult out;
  for (const auto& entry : data) {
    ++out.records;
    try {
      const json& qa = entry.at("qa");
      bool has_table = false;
      bool has_text = false;
      for (const auto& [key, value] : qa.at("gold_inds").items()) {
        if (key.starts_with("table_")) has_table = true;
        if (key.starts_with("text_")) has_text = true;
      }
      if (!has_table || !has_text) {
        ++out.filtered_out;
        continue;
      }
      RawTable raw = RawFromRows(entry.at("table"));
      Table table = Table::Ingest(raw, "t");
      std::vector<std::string> texts;
      for (const auto& t : entry.at("pre_text")) texts.push_back(t.get<std::string>());
      for (const auto& t : entry.at("post_text")) texts.push_back(t.get<std::string>());

      std::string gold;
      if (qa.contains("exe_ans") && !qa["exe_ans"].is_null()) {
        gold = JsonToText(qa["exe_ans"]);
      } else {
        gold = JsonToText(qa.at("answer"));
      }
      std::string program = qa.value("program", "");
      out.questions.push_back(Question{entry.at("id").get<std::string>(),
                                       DatasetId::kFinQA,
                                       qa.at("question").get<std::string>(), table,
                                       Join(texts, "\n"), {gold},
                                       CountRequiredCells(program, table)});
    } catch (const std::exception& e) {
      Skip(out, std::string("entry: ") + e.what());
    }
  }
  return out;
}

LoadResult LoadDataset(DatasetId id, const std::string& path, bool subset) {
  switch (id) {
    case DatasetId::kWikiTQ: return LoadWikiTQ(path, subset);
    case DatasetId::kTatQA: return LoadTatQA(path);
    case DatasetId::kFinQA: return LoadFinQA(path);
  }
  throw ConfigError("unknown dataset");
}

}  // namespace tabaug
