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

#include "tabaug/scripted_client.h"

#include <algorithm>

#include "json.hpp"
#include "tabaug/strings.h"

namespace tabaug {

ScriptedModel::ScriptedModel(std::vector<ScriptRule> rules,
                             std::optional<std::string> fallback)
    : rules_(std::move(rules)), fallback_(std::move(fallback)) {
  for (const auto& r : rules_) {
    if (r.responses.empty()) {
      throw InputError("script rule '" + r.name + "' has no responses");
    }
  }
}

ScriptedModel ScriptedModel::FromJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad script file: ") + e.what());
  }
  std::vector<ScriptRule> rules;
  for (const auto& r : j.at("rules")) {
    ScriptRule rule;
    rule.name = r.value("name", "");
    rule.system = r.value("system", "");
    if (r.contains("user")) rule.user = r.at("user").get<std::vector<std::string>>();
    const auto& resp = r.at("responses");
    rule.responses = resp.is_string()
                         ? std::vector<std::string>{resp.get<std::string>()}
                         : resp.get<std::vector<std::string>>();
    rules.push_back(std::move(rule));
  }
  std::optional<std::string> fallback;
  if (j.contains("fallback")) fallback = j.at("fallback").get<std::string>();
  return ScriptedModel(std::move(rules), std::move(fallback));
}

ScriptedModel ScriptedModel::FromFile(const std::string& path) {
  return FromJson(ReadFile(path));
}

const ScriptRule* ScriptedModel::FindRule(const MessageSequence& messages) const {
  std::string_view system;
  if (!messages.empty() && messages.front().role == "system") {
    system = messages.front().content;
  }
  std::string_view task = messages.empty() ? std::string_view() : messages.back().content;
  for (const auto& rule : rules_) {
    if (!rule.system.empty() && system.find(rule.system) == std::string_view::npos) {
      continue;
    }
    bool all = std::all_of(rule.user.begin(), rule.user.end(), [&](const auto& u) {
      return task.find(u) != std::string_view::npos;
    });
    if (all) return &rule;
  }
  return nullptr;
}

std::optional<std::string> ScriptedModel::Match(const MessageSequence& messages) const {
  const ScriptRule* rule = FindRule(messages);
  if (rule == nullptr) return std::nullopt;
  return rule->name;
}

std::vector<std::string> ScriptedModel::Complete(const MessageSequence& messages,
                                                 const GenerationParams& params) {
  const ScriptRule* rule = FindRule(messages);
  std::vector<std::string> out;
  for (int i = 0; i < params.n_samples; ++i) {
    if (rule != nullptr) {
      size_t idx = std::min(static_cast<size_t>(i), rule->responses.size() - 1);
      out.push_back(rule->responses[idx]);
    } else if (fallback_) {
      out.push_back(*fallback_);
    } else {
      std::string task = messages.empty() ? "" : messages.back().content;
      if (task.size() > 80) task = "..." + task.substr(task.size() - 80);
      throw SourceError("no scripted response for request: " + task);
    }
  }
  return out;
}

}  // namespace tabaug
