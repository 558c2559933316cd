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

#include "tabaug/ensemble.h"

#include <cmath>
#include <filesystem>
#include <future>
#include <map>

#include "tabaug/strings.h"

namespace tabaug {

using nlohmann::ordered_json;

std::optional<Answer> MajorityVote(const std::vector<ExecutionOutcome>& outcomes) {
  std::map<std::vector<std::string>, std::pair<size_t, size_t>> tally;  // count, first
  size_t order = 0;
  for (const auto& o : outcomes) {
    if (o.status != ExecStatus::kOk || !o.value) continue;
    Answer a = Canonicalize(*o.value);
    auto [it, inserted] = tally.try_emplace(a.items, 0, order);
    ++it->second.first;
    ++order;
  }
  const std::vector<std::string>* best = nullptr;
  std::pair<size_t, size_t> best_score{0, 0};
  for (const auto& [items, score] : tally) {
    if (!best || score.first > best_score.first ||
        (score.first == best_score.first && score.second < best_score.second)) {
      best = &items;
      best_score = score;
    }
  }
  if (!best) return std::nullopt;
  return Answer{*best};
}

int BudgetTotal(int m, double alpha, int k) {
  return m + static_cast<int>(std::lround(alpha * m)) + m * k;
}

std::string_view BaselineName(Baseline b) {
  return b == Baseline::kDirectAnswer ? "direct_answer" : "none";
}

Baseline ParseBaseline(std::string_view name) {
  if (EqualsIgnoreCase(name, "none")) return Baseline::kNone;
  if (EqualsIgnoreCase(name, "direct_answer") || EqualsIgnoreCase(name, "direct")) {
    return Baseline::kDirectAnswer;
  }
  throw ConfigError("unknown baseline: " + std::string(name));
}

TemplateSet TemplateSet::Load(const std::string& dir, DatasetId dataset,
                              KnowledgeMode mode, Baseline baseline) {
  namespace fs = std::filesystem;
  const fs::path base = fs::path(dir) / std::string(DatasetName(dataset));
  auto load = [&base](const char* step) {
    fs::path p = base / (std::string(step) + ".txt");
    if (!fs::exists(p)) throw ConfigError("missing template: " + p.string());
    try {
      return LoadTemplate(p.string());
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  };
  TemplateSet set;
  if (baseline == Baseline::kDirectAnswer) {
    set.direct = load("direct");
    return set;
  }
  if (mode == KnowledgeMode::kOpen) {
    set.analyze = load("analyze");
    set.augment = load("augment");
  } else {
    set.extract = load("extract");
  }
  set.sql = load("sql");
  return set;
}

GenerationParams PipelineConfig::Params(Step step) const {
  GenerationParams p;
  switch (step) {
    case Step::kAnalyze:
      p = DefaultParams(step, decode(), dataset, profile);
      p.n_samples = m;
      break;
    case Step::kAugment:
      // Row-wise answers are deterministic lookups; sampling happens upstream.
      p = DefaultParams(step, DecodeMode::kGreedy, dataset, profile);
      p.n_samples = 1;
      break;
    case Step::kSql:
      p = DefaultParams(step, decode(), dataset, profile);
      p.n_samples = k;
      break;
  }
  if (!model_id.empty()) p.model_id = model_id;
  return p;
}

void PipelineConfig::Validate() const {
  if (m < 1) throw ConfigError("m must be >= 1");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (mode == KnowledgeMode::kClosed && dataset == DatasetId::kWikiTQ) {
    throw ConfigError("closed mode needs documents; wikitq has none");
  }
  Params(Step::kAnalyze).Validate();
  Params(Step::kSql).Validate();
}

std::string RenderDirectTask(const Question& question) {
  std::string table = RenderPipe(question.table).text;
  if (question.document) {
    return "Report:\n" + Trim(*question.document) + "\nTables:\n" + table +
           "\n\nQuestion: " + question.text;
  }
  std::string title = question.table.title().empty()
                          ? std::string()
                          : "Title: " + question.table.title() + "\n";
  return title + table + "\n\nQ: " + question.text;
}

Answer ParseDirectAnswer(std::string_view response) {
  std::string text;
  size_t pos = FindLast(response, "Answer:");
  if (pos != std::string::npos) {
    text = Trim(response.substr(pos + 7));
    auto nl = text.find('\n');
    if (nl != std::string::npos) text = Trim(text.substr(0, nl));
  } else {
    for (const auto& line : SplitLines(response)) {
      if (!Trim(line).empty()) text = Trim(line);
    }
  }
  Answer out;
  for (const auto& part : Split(text, " | ")) out.items.push_back(Canonicalize(part));
  return out;
}

namespace {

void RunContext(ContextRun& ctx, const Question& question, LanguageModel& model,
                const TemplateSet& templates, const PipelineConfig& config) {
  try {
    SqlTaskOptions opts;
    opts.preview_rows = config.preview_rows;
    opts.token_limit = config.token_limit;
    if (ctx.plan) {
      ctx.bundle = BuildBundle(*ctx.plan, question.table, model, *templates.augment,
                               config.Params(Step::kAugment), config.token_limit);
    } else {
      ctx.bundle = BuildBundle(ctx.extraction->extraction, question.table);
      opts.full_tables = true;
      opts.document = question.document.value_or("");
      // The TATQA step-3 demonstration shows the report on one line.
      if (question.dataset == DatasetId::kTatQA) {
        opts.document = CollapseWhitespace(opts.document);
      }
    }
    ctx.candidates = GenerateSql(question.text, *ctx.bundle, model, *templates.sql,
                                 config.Params(Step::kSql), opts);
    Session session = Session::Load(*ctx.bundle);
    for (const auto& c : ctx.candidates) {
      ctx.outcomes.push_back(session.Execute(c, config.query_timeout));
    }
  } catch (const std::exception& e) {
    ctx.error = e.what();
  }
}

ExecStatus SummaryStatus(const QuestionRun& run) {
  if (run.vote.winner) return ExecStatus::kOk;
  std::optional<ExecStatus> first;
  for (const auto& o : run.vote.outcomes) {
    if (o.outcome.status == ExecStatus::kEmptyResult) return ExecStatus::kEmptyResult;
    if (!first) first = o.outcome.status;
  }
  return first.value_or(ExecStatus::kEngineError);
}

void RunDirect(QuestionRun& run, const Question& question, LanguageModel& model,
               const TemplateSet& templates, const PipelineConfig& config) {
  GenerationParams params = DefaultParams(Step::kSql, DecodeMode::kGreedy,
                                          config.dataset, config.profile);
  if (!config.model_id.empty()) params.model_id = config.model_id;
  MessageSequence messages = BuildPrompt(*templates.direct, RenderDirectTask(question),
                                         config.token_limit, params.num_shots);
  auto responses = model.Complete(messages, params);
  run.direct_response = responses.empty() ? "" : responses.front();
  Answer a = ParseDirectAnswer(run.direct_response);
  bool empty = a.items.empty() || (a.items.size() == 1 && a.items[0].empty());
  if (!empty) run.vote.winner = a;
}

}  // namespace

QuestionRun RunEnsemble(const Question& question, std::shared_ptr<LanguageModel> model,
                        const TemplateSet& templates, const PipelineConfig& config) {
  QuestionRun run;
  run.question_id = question.id;
  run.question = question.text;
  auto counter = std::make_shared<CountingModel>(std::move(model));
  SampleBudget& budget = run.vote.budget;
  budget.m = config.m;
  budget.k = config.k;

  try {
    if (config.baseline == Baseline::kDirectAnswer) {
      budget.m = 1;
      budget.k = 0;
      RunDirect(run, question, *counter, templates, config);
    } else if (config.mode == KnowledgeMode::kOpen) {
      StepOptions step{config.preview_rows, config.token_limit};
      auto plans = PlanAugmentation(question.text, question.table, *counter,
                                    *templates.analyze, config.Params(Step::kAnalyze), step);
      size_t needing = 0;
      for (size_t i = 0; i < plans.size(); ++i) {
        ContextRun ctx;
        ctx.index = static_cast<int>(i);
        if (plans[i].needs_augmentation()) ++needing;
        ctx.plan = std::move(plans[i]);
        run.contexts.push_back(std::move(ctx));
      }
      budget.alpha_observed =
          run.contexts.empty() ? 0.0 : static_cast<double>(needing) / run.contexts.size();
    } else {
      if (!question.document) throw InputError("closed mode question has no document");
      auto extractions = ExtractClosedDomain(question.text, question.table,
                                             *question.document, *counter,
                                             *templates.extract,
                                             config.Params(Step::kAnalyze),
                                             config.token_limit);
      size_t found = 0;
      for (size_t i = 0; i < extractions.size(); ++i) {
        ContextRun ctx;
        ctx.index = static_cast<int>(i);
        if (extractions[i].extraction) ++found;
        ctx.extraction = std::move(extractions[i]);
        run.contexts.push_back(std::move(ctx));
      }
      budget.merged_steps = true;
      budget.alpha_observed =
          run.contexts.empty() ? 0.0 : static_cast<double>(found) / run.contexts.size();
    }

    std::vector<std::future<void>> pending;
    for (auto& ctx : run.contexts) {
      pending.push_back(std::async(std::launch::async, [&] {
        RunContext(ctx, question, *counter, templates, config);
      }));
    }
    for (auto& f : pending) f.get();

    std::vector<ExecutionOutcome> all;
    for (const auto& ctx : run.contexts) {
      for (size_t i = 0; i < ctx.outcomes.size(); ++i) {
        CandidateOutcome co;
        co.candidate_id = std::to_string(ctx.index) + "." + std::to_string(i);
        co.outcome = ctx.outcomes[i];
        if (co.outcome.status == ExecStatus::kOk && co.outcome.value) {
          co.answer = Canonicalize(*co.outcome.value);
          run.vote.normalized_answers.push_back(co.answer->Display());
        }
        run.vote.outcomes.push_back(std::move(co));
        all.push_back(ctx.outcomes[i]);
      }
    }
    if (config.baseline == Baseline::kNone) run.vote.winner = MajorityVote(all);
  } catch (const std::exception& e) {
    run.error = e.what();
  }

  if (config.baseline == Baseline::kDirectAnswer) {
    budget.total = 1;
  } else if (budget.merged_steps) {
    budget.total = budget.m + budget.m * budget.k;
  } else {
    budget.total = BudgetTotal(budget.m, budget.alpha_observed, budget.k);
  }
  budget.samples_issued = counter->samples();
  budget.requests_issued = counter->requests();

  ExecStatus status;
  if (!run.error.empty()) {
    status = ExecStatus::kEngineError;
  } else if (config.baseline == Baseline::kDirectAnswer) {
    status = run.vote.winner ? ExecStatus::kOk : ExecStatus::kEmptyResult;
  } else {
    status = SummaryStatus(run);
  }
  run.record = Score(question.id, question.dataset, question.gold, run.vote.winner,
                     status, RenderPipe(question.table).token_estimate,
                     question.required_cells);
  return run;
}

ordered_json TableToJson(const Table& table) {
  ordered_json j;
  j["name"] = table.name();
  ordered_json cols = ordered_json::array();
  for (const auto& c : table.columns()) {
    cols.push_back({{"name", c.name}, {"type", std::string(ColumnTypeName(c.type))}});
  }
  j["columns"] = cols;
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows()) {
    ordered_json r = ordered_json::array();
    for (const auto& cell : row) r.push_back(cell.raw);
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

namespace {

ordered_json OutcomeToJson(const ExecutionOutcome& o) {
  ordered_json j;
  j["status"] = std::string(ExecStatusName(o.status));
  if (o.value) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : *o.value) {
      ordered_json r = ordered_json::array();
      for (const auto& v : row) {
        if (IsNull(v)) r.push_back(nullptr);
        else if (const auto* i = std::get_if<std::int64_t>(&v)) r.push_back(*i);
        else if (const auto* d = std::get_if<double>(&v)) r.push_back(*d);
        else r.push_back(CellToString(v));
      }
      rows.push_back(r);
    }
    j["value"] = rows;
  } else {
    j["value"] = nullptr;
  }
  j["message"] = o.message;
  return j;
}

ordered_json ContextToJson(const ContextRun& ctx) {
  ordered_json j;
  j["index"] = ctx.index;
  if (ctx.plan) {
    ordered_json queries = ordered_json::array();
    for (const auto& q : ctx.plan->queries) {
      queries.push_back({{"new_column", q.new_column},
                         {"question", q.question},
                         {"relevant_columns", q.relevant_columns}});
    }
    j["plan"] = {{"queries", queries}, {"warnings", ctx.plan->warnings},
                 {"raw_response", ctx.plan->raw_response}};
  }
  if (ctx.extraction) {
    j["extraction"] = {{"found", ctx.extraction->extraction.has_value()},
                       {"warnings", ctx.extraction->warnings},
                       {"raw_response", ctx.extraction->raw_response}};
  }
  if (ctx.bundle) {
    j["bundle_mode"] = std::string(BundleModeName(ctx.bundle->mode));
    j["augmenting_table"] =
        ctx.bundle->augmenting ? TableToJson(*ctx.bundle->augmenting) : ordered_json();
    ordered_json dropped = ordered_json::array();
    for (const auto& d : ctx.bundle->dropped) {
      dropped.push_back({{"new_column", d.new_column}, {"reason", d.reason}});
    }
    j["dropped_queries"] = dropped;
  }
  ordered_json cands = ordered_json::array();
  for (size_t i = 0; i < ctx.candidates.size(); ++i) {
    const auto& c = ctx.candidates[i];
    ordered_json cj;
    cj["sample_index"] = c.sample_index;
    cj["valid"] = c.valid;
    cj["sql"] = c.sql;
    cj["units"] = c.units ? ordered_json(*c.units) : ordered_json();
    if (!c.error.empty()) cj["error"] = c.error;
    cj["outcome"] = i < ctx.outcomes.size() ? OutcomeToJson(ctx.outcomes[i]) : ordered_json();
    cands.push_back(cj);
  }
  j["candidates"] = cands;
  if (!ctx.error.empty()) j["error"] = ctx.error;
  return j;
}

}  // namespace

ordered_json QuestionRunToJson(const QuestionRun& run) {
  ordered_json j;
  j["question_id"] = run.question_id;
  j["question"] = run.question;
  ordered_json contexts = ordered_json::array();
  for (const auto& ctx : run.contexts) contexts.push_back(ContextToJson(ctx));
  j["contexts"] = contexts;
  if (!run.direct_response.empty()) j["direct_response"] = run.direct_response;

  const auto& v = run.vote;
  ordered_json vote;
  vote["normalized_answers"] = v.normalized_answers;
  vote["winner"] = v.winner ? ordered_json(v.winner->items) : ordered_json();
  vote["budget"] = {{"m", v.budget.m},
                    {"alpha_observed", v.budget.alpha_observed},
                    {"k", v.budget.k},
                    {"merged_steps", v.budget.merged_steps},
                    {"total", v.budget.total},
                    {"samples_issued", v.budget.samples_issued},
                    {"requests_issued", v.budget.requests_issued}};
  j["vote"] = vote;
  j["record"] = EvalRecordToJson(run.record);
  j["status"] = run.error.empty() ? std::string(ExecStatusName(run.record.outcome_status))
                                  : "engine_error";
  if (!run.error.empty()) j["error"] = run.error;
  return j;
}

}  // namespace tabaug
