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

#ifndef TABAUG_LIVE_CLIENT_H_
#define TABAUG_LIVE_CLIENT_H_

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>
#include <vector>

#include "tabaug/llmclient.h"

namespace tabaug {

struct LiveConfig {
  // Full URL of an OpenAI-compatible chat-completions endpoint.
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string api_key;
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{1000};
  std::chrono::seconds request_timeout{120};
  // When false, n samples are requested as n single-sample calls.
  bool supports_n = true;
  int max_in_flight = 4;
};

// Chat-completions over HTTP(S):
//   POST {"model", "messages": [{role, content}], "temperature", "top_p",
//         "max_tokens", "n"}  ->  {"choices": [{"message": {"content"}}]}
// 429 and 5xx responses and connection failures are retried with
// exponential backoff up to max_attempts.
class LiveModel : public LanguageModel {
 public:
  explicit LiveModel(LiveConfig config);
  ~LiveModel() override;

  std::vector<std::string> Complete(const MessageSequence& messages,
                                    const GenerationParams& params) override;

 private:
  std::vector<std::string> Request(const MessageSequence& messages,
                                   const GenerationParams& params, int n);

  LiveConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::counting_semaphore<1024> in_flight_;
};

// Builds the JSON request body sent by LiveModel.
std::string ChatRequestBody(const MessageSequence& messages,
                            const GenerationParams& params, int n);

// Extracts choices[*].message.content. Throws TransportError on malformed
// bodies.
std::vector<std::string> ParseChatResponse(const std::string& body);

}  // namespace tabaug

#endif  // TABAUG_LIVE_CLIENT_H_
