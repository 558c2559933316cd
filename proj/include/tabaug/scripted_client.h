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

#ifndef TABAUG_SCRIPTED_CLIENT_H_
#define TABAUG_SCRIPTED_CLIENT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabaug/llmclient.h"

namespace tabaug {

// A canned response rule. A request matches when its system turn contains
// `system` and its final user turn contains every string in `user`.
struct ScriptRule {
  std::string name;
  std::string system;
  std::vector<std::string> user;
  // Sample i gets responses[min(i, size - 1)].
  std::vector<std::string> responses;
};

// Deterministic stand-in for a chat model, driven by a rule file:
//   {"rules": [{"name", "system", "user": [...], "responses": [...]}],
//    "fallback": "optional text for unmatched requests"}
// Used to author replay fixtures and to back the mock HTTP endpoint in
// tests. First matching rule wins.
class ScriptedModel : public LanguageModel {
 public:
  ScriptedModel(std::vector<ScriptRule> rules,
                std::optional<std::string> fallback = std::nullopt);
  static ScriptedModel FromJson(std::string_view text);
  static ScriptedModel FromFile(const std::string& path);

  std::vector<std::string> Complete(const MessageSequence& messages,
                                    const GenerationParams& params) override;

  // Name of the rule that would answer, or nullopt.
  std::optional<std::string> Match(const MessageSequence& messages) const;

 private:
  const ScriptRule* FindRule(const MessageSequence& messages) const;

  std::vector<ScriptRule> rules_;
  std::optional<std::string> fallback_;
};

}  // namespace tabaug

#endif  // TABAUG_SCRIPTED_CLIENT_H_
