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

#include "tabaug/run.h"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <thread>

#include "tabaug/csv.h"
#include "tabaug/datasets.h"
#include "tabaug/live_client.h"
#include "tabaug/scripted_client.h"
#include "tabaug/strings.h"

#ifndef TABAUG_SOURCE_DIR
#define TABAUG_SOURCE_DIR "."
#endif

namespace tabaug {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string_view LlmModeName(LlmMode mode) {
  switch (mode) {
    case LlmMode::kLive: return "live";
    case LlmMode::kReplay: return "replay";
    case LlmMode::kRecord: return "record";
  }
  return "replay";
}

LlmMode ParseLlmMode(std::string_view name) {
  std::string n = ToLower(Trim(name));
  if (n == "live") return LlmMode::kLive;
  if (n == "replay") return LlmMode::kReplay;
  if (n == "record") return LlmMode::kRecord;
  throw ConfigError("unknown llm mode '" + std::string(name) +
                    "' (expected live, replay or record)");
}

std::string BundledTemplatesDir() {
  return (fs::path(TABAUG_SOURCE_DIR) / "templates").string();
}

std::optional<std::string> ProcessEnv(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

PipelineConfig RunConfig::Pipeline() const {
  PipelineConfig p;
  p.dataset = dataset;
  p.mode = knowledge_mode();
  p.baseline = baseline;
  p.profile = llm.profile;
  p.m = m;
  p.k = k;
  p.preview_rows = preview_rows;
  p.token_limit = token_limit;
  p.model_id = llm.model_id;
  return p;
}

void RunConfig::Validate() const {
  Pipeline().Validate();
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (llm.max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  if (llm.mode != LlmMode::kLive && llm.transcripts.empty()) {
    throw ConfigError(std::string(LlmModeName(llm.mode)) +
                      " mode needs --transcripts");
  }
  if (llm.mode == LlmMode::kReplay && !fs::exists(llm.transcripts)) {
    throw ConfigError("transcript file not found: " + llm.transcripts);
  }
  if (!llm.script.empty() && llm.mode != LlmMode::kRecord) {
    throw ConfigError("a script file is only used in record mode");
  }
}

void ApplyConfigJson(RunConfig& c, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "dataset") c.dataset = ParseDatasetId(v.get<std::string>());
      else if (key == "mode") c.mode = ParseKnowledgeMode(v.get<std::string>());
      else if (key == "baseline") c.baseline = ParseBaseline(v.get<std::string>());
      else if (key == "m") c.m = v.get<int>();
      else if (key == "k") c.k = v.get<int>();
      else if (key == "preview_rows") c.preview_rows = v.get<size_t>();
      else if (key == "token_limit") c.token_limit = v.get<size_t>();
      else if (key == "data") c.data_path = v.get<std::string>();
      else if (key == "templates") c.templates_dir = v.get<std::string>();
      else if (key == "out") c.output_dir = v.get<std::string>();
      else if (key == "workers") c.workers = v.get<int>();
      else if (key == "limit") c.limit = v.get<size_t>();
      else if (key == "subset") c.subset = v.get<bool>();
      else if (key == "llm") {
        for (const auto& [lk, lv] : v.items()) {
          if (lk == "mode") c.llm.mode = ParseLlmMode(lv.get<std::string>());
          else if (lk == "transcripts") c.llm.transcripts = lv.get<std::string>();
          else if (lk == "endpoint") c.llm.endpoint = lv.get<std::string>();
          else if (lk == "model") c.llm.model_id = lv.get<std::string>();
          else if (lk == "credential_env") c.llm.credential_env = lv.get<std::string>();
          else if (lk == "max_in_flight") c.llm.max_in_flight = lv.get<int>();
          else if (lk == "supports_n") c.llm.supports_n = lv.get<bool>();
          else if (lk == "script") c.llm.script = lv.get<std::string>();
          else if (lk == "profile") {
            std::string p = ToLower(lv.get<std::string>());
            if (p == "gpt") c.llm.profile = ModelProfile::kGpt;
            else if (p == "llama") c.llm.profile = ModelProfile::kLlama;
            else throw ConfigError("unknown model profile: " + p);
          } else {
            throw ConfigError("unknown llm config key: " + lk);
          }
        }
      } else {
        throw ConfigError("unknown config key: " + key);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

void ApplyConfigFile(RunConfig& config, const std::string& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  ApplyConfigJson(config, j);
}

std::shared_ptr<LanguageModel> MakeModel(const LlmConfig& config, const EnvLookup& env) {
  auto live = [&]() -> std::shared_ptr<LanguageModel> {
    auto key = env(config.credential_env);
    if (!key) {
      throw ConfigError("credential variable " + config.credential_env + " is not set");
    }
    LiveConfig lc;
    lc.endpoint = config.endpoint;
    lc.api_key = *key;
    lc.max_in_flight = config.max_in_flight;
    lc.supports_n = config.supports_n;
    return std::make_shared<LiveModel>(lc);
  };
  switch (config.mode) {
    case LlmMode::kLive:
      return live();
    case LlmMode::kReplay: {
      if (!fs::exists(config.transcripts)) {
        throw ConfigError("transcript file not found: " + config.transcripts);
      }
      auto store = std::make_shared<TranscriptStore>(config.transcripts);
      return std::make_shared<ReplayModel>(store);
    }
    case LlmMode::kRecord: {
      std::shared_ptr<LanguageModel> inner;
      if (!config.script.empty()) {
        try {
          inner = std::make_shared<ScriptedModel>(ScriptedModel::FromFile(config.script));
        } catch (const InputError& e) {
          throw ConfigError(e.what());
        }
      } else {
        inner = live();
      }
      auto store = std::make_shared<TranscriptStore>(config.transcripts);
      return std::make_shared<RecordingModel>(inner, store);
    }
  }
  throw ConfigError("unknown llm mode");
}

namespace {

std::string UtcNow() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void PrepareOutputDir(const std::string& dir) {
  if (dir.empty()) return;
  if (fs::exists(dir) && !fs::is_empty(dir)) {
    throw ConfigError("output directory already holds a run: " + dir);
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
}

void WriteNew(const fs::path& path, const std::string& text) {
  if (fs::exists(path)) throw Error("refusing to overwrite " + path.string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

ordered_json ConfigToJson(const RunConfig& c) {
  ordered_json j;
  j["dataset"] = std::string(DatasetName(c.dataset));
  j["mode"] = std::string(KnowledgeModeName(c.knowledge_mode()));
  j["baseline"] = std::string(BaselineName(c.baseline));
  j["m"] = c.m;
  j["k"] = c.k;
  j["preview_rows"] = c.preview_rows;
  j["token_limit"] = c.token_limit;
  j["llm_mode"] = std::string(LlmModeName(c.llm.mode));
  j["model"] = c.Pipeline().Params(Step::kSql).model_id;
  j["workers"] = c.workers;
  j["subset"] = c.subset;
  if (c.limit) j["limit"] = *c.limit;
  return j;
}

}  // namespace

RunSummary RunDataset(const RunConfig& config, std::shared_ptr<LanguageModel> model) {
  config.Validate();
  const auto pipeline = config.Pipeline();
  const std::string templates_dir =
      config.templates_dir.empty() ? BundledTemplatesDir() : config.templates_dir;
  TemplateSet templates =
      TemplateSet::Load(templates_dir, config.dataset, pipeline.mode, config.baseline);
  if (config.data_path.empty()) throw ConfigError("no dataset path given (--data)");
  if (!fs::exists(config.data_path)) {
    throw ConfigError("dataset path not found: " + config.data_path);
  }
  if (!model) model = MakeModel(config.llm);
  PrepareOutputDir(config.output_dir);
  const std::string started = UtcNow();

  LoadResult loaded = LoadDataset(config.dataset, config.data_path, config.subset);
  std::vector<Question>& questions = loaded.questions;
  if (config.limit && questions.size() > *config.limit) {
    questions.erase(questions.begin() + static_cast<std::ptrdiff_t>(*config.limit),
                    questions.end());
  }
  if (questions.empty()) throw InputError("no questions to run in " + config.data_path);

  RunSummary summary;
  summary.skipped_records = loaded.skipped;
  summary.runs.resize(questions.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < questions.size(); i = next++) {
      summary.runs[i] = RunEnsemble(questions[i], model, templates, pipeline);
    }
  };
  const size_t n_workers =
      std::min<size_t>(static_cast<size_t>(config.workers), questions.size());
  std::vector<std::thread> pool;
  for (size_t w = 0; w < n_workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  std::vector<EvalRecord> records;
  std::string artifacts;
  for (const auto& run : summary.runs) {
    records.push_back(run.record);
    artifacts += QuestionRunToJson(run).dump() + "\n";
  }
  summary.report = BuildReport(records);

  if (!config.output_dir.empty()) {
    const fs::path out(config.output_dir);
    WriteNew(out / "artifacts.jsonl", artifacts);
    WriteNew(out / "report.json", ReportToJson(summary.report).dump(2) + "\n");
    WriteNew(out / "report.txt", RenderReportText(summary.report));
    ordered_json meta;
    meta["started_at"] = started;
    meta["finished_at"] = UtcNow();
    meta["config"] = ConfigToJson(config);
    meta["records_read"] = loaded.records;
    meta["filtered_out"] = loaded.filtered_out;
    meta["skipped"] = loaded.skipped;
    meta["skip_reasons"] = loaded.skip_reasons;
    WriteNew(out / "run_meta.json", meta.dump(2) + "\n");
  }
  return summary;
}

SingleResult RunSingle(const std::string& question, const std::string& table_path,
                       const std::optional<std::string>& document_path,
                       const RunConfig& config, std::shared_ptr<LanguageModel> model,
                       std::vector<std::string> gold) {
  config.Validate();
  const auto pipeline = config.Pipeline();
  if (pipeline.mode == KnowledgeMode::kClosed && !document_path &&
      config.baseline == Baseline::kNone) {
    throw ConfigError("closed mode needs a document (--document)");
  }
  if (pipeline.mode == KnowledgeMode::kOpen && document_path) {
    throw ConfigError("open mode takes no document");
  }
  const std::string templates_dir =
      config.templates_dir.empty() ? BundledTemplatesDir() : config.templates_dir;
  TemplateSet templates =
      TemplateSet::Load(templates_dir, config.dataset, pipeline.mode, config.baseline);
  if (!model) model = MakeModel(config.llm);

  RawTable raw = ReadTableFile(table_path);
  if (pipeline.mode == KnowledgeMode::kClosed) {
    for (auto& h : raw.header) {
      if (Trim(h).empty()) h = std::string(kFilledColumnName);
    }
  }
  std::string title;
  fs::path title_file = fs::path(table_path).replace_extension(".title");
  if (fs::exists(title_file)) title = Trim(ReadFile(title_file.string()));
  Table table = Table::Ingest(raw, "t", Provenance::kOriginal, title);
  std::optional<std::string> document;
  if (document_path) document = Trim(ReadFile(*document_path));

  Question q{"ask", config.dataset, question, std::move(table), document,
             std::move(gold), std::nullopt};
  PrepareOutputDir(config.output_dir);

  SingleResult result;
  result.run = RunEnsemble(q, model, templates, pipeline);
  if (result.run.vote.winner) {
    result.answer = result.run.vote.winner->Display();
  } else {
    result.answer = "none";
  }
  if (!config.output_dir.empty()) {
    fs::path path = fs::path(config.output_dir) / "artifact.json";
    WriteNew(path, QuestionRunToJson(result.run).dump(2) + "\n");
    result.artifact_path = path.string();
  }
  return result;
}

}  // namespace tabaug
