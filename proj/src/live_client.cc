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

#include "tabaug/live_client.h"

#include <algorithm>
#include <regex>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace tabaug {

using json = nlohmann::ordered_json;

std::string ChatRequestBody(const MessageSequence& messages,
                            const GenerationParams& params, int n) {
  json msgs = json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  json body = {
      {"model", params.model_id},
      {"messages", std::move(msgs)},
      {"temperature", params.temperature},
      {"top_p", params.top_p},
      {"max_tokens", params.max_output_tokens},
      {"n", n},
  };
  return body.dump();
}

std::vector<std::string> ParseChatResponse(const std::string& body) {
  std::vector<std::pair<int, std::string>> indexed;
  try {
    json j = json::parse(body);
    int position = 0;
    for (const auto& choice : j.at("choices")) {
      const auto& content = choice.at("message").at("content");
      int index = choice.value("index", position);
      indexed.emplace_back(index, content.is_null() ? std::string()
                                                    : content.get<std::string>());
      ++position;
    }
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed chat response: ") + e.what());
  }
  std::stable_sort(indexed.begin(), indexed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (auto& [index, text] : indexed) out.push_back(std::move(text));
  return out;
}

LiveModel::LiveModel(LiveConfig config)
    : config_(std::move(config)),
      in_flight_(std::max(1, config_.max_in_flight)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, kUrl)) {
    throw ConfigError("invalid endpoint URL: " + config_.endpoint);
  }
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/v1/chat/completions";
  if (config_.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
}

LiveModel::~LiveModel() = default;

std::vector<std::string> LiveModel::Request(const MessageSequence& messages,
                                            const GenerationParams& params,
                                            int n) {
  const std::string body = ChatRequestBody(messages, params, n);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  std::string last_error;
  bool last_rate_limited = false;
  auto backoff = config_.initial_backoff;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    in_flight_.acquire();
    httplib::Result res;
    {
      httplib::Client client(scheme_host_port_);
      client.set_connection_timeout(config_.request_timeout);
      client.set_read_timeout(config_.request_timeout);
      client.set_write_timeout(config_.request_timeout);
      res = client.Post(path_, headers, body, "application/json");
    }
    in_flight_.release();

    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      last_rate_limited = false;
      continue;
    }
    if (res->status == 200) return ParseChatResponse(res->body);
    last_error = "HTTP " + std::to_string(res->status) + ": " +
                 res->body.substr(0, 300);
    if (res->status == 429) {
      last_rate_limited = true;
      continue;
    }
    last_rate_limited = false;
    if (res->status >= 500) continue;
    throw TransportError(last_error);
  }
  std::string msg = "giving up after " + std::to_string(config_.max_attempts) +
                    " attempts: " + last_error;
  if (last_rate_limited) throw RateLimited(msg);
  throw TransportError(msg);
}

std::vector<std::string> LiveModel::Complete(const MessageSequence& messages,
                                             const GenerationParams& params) {
  params.Validate();
  std::vector<std::string> out;
  if (config_.supports_n) {
    out = Request(messages, params, params.n_samples);
    if (out.size() > static_cast<size_t>(params.n_samples)) {
      out.resize(params.n_samples);
    }
  }
  // Endpoints that ignore `n` return a single choice; top up one at a time.
  while (out.size() < static_cast<size_t>(params.n_samples)) {
    auto more = Request(messages, params, 1);
    if (more.empty()) throw TransportError("chat response had no choices");
    out.push_back(std::move(more.front()));
  }
  return out;
}

}  // namespace tabaug
