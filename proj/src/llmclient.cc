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

#include "tabaug/llmclient.h"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>

#include "json.hpp"
#include "tabaug/strings.h"

namespace tabaug {

using json = nlohmann::ordered_json;

std::string_view DatasetName(DatasetId id) {
  switch (id) {
    case DatasetId::kWikiTQ: return "wikitq";
    case DatasetId::kTatQA: return "tatqa";
    case DatasetId::kFinQA: return "finqa";
  }
  return "wikitq";
}

DatasetId ParseDatasetId(std::string_view name) {
  std::string n = ToLower(Trim(name));
  if (n == "wikitq") return DatasetId::kWikiTQ;
  if (n == "tatqa") return DatasetId::kTatQA;
  if (n == "finqa") return DatasetId::kFinQA;
  throw ConfigError("unknown dataset '" + std::string(name) +
                    "' (expected wikitq, tatqa or finqa)");
}

std::string_view KnowledgeModeName(KnowledgeMode mode) {
  return mode == KnowledgeMode::kOpen ? "open" : "closed";
}

KnowledgeMode ParseKnowledgeMode(std::string_view name) {
  std::string n = ToLower(Trim(name));
  if (n == "open") return KnowledgeMode::kOpen;
  if (n == "closed") return KnowledgeMode::kClosed;
  throw ConfigError("unknown mode '" + std::string(name) +
                    "' (expected open or closed)");
}

KnowledgeMode DefaultKnowledgeMode(DatasetId id) {
  return id == DatasetId::kWikiTQ ? KnowledgeMode::kOpen : KnowledgeMode::kClosed;
}

std::string_view StepName(Step step) {
  switch (step) {
    case Step::kAnalyze: return "analyze";
    case Step::kAugment: return "augment";
    case Step::kSql: return "sql";
  }
  return "analyze";
}

void GenerationParams::Validate() const {
  if (!(temperature >= 0)) throw ConfigError("temperature must be >= 0");
  if (!(top_p > 0 && top_p <= 1)) throw ConfigError("top_p must be in (0, 1]");
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
  if (max_output_tokens < 1) throw ConfigError("max_output_tokens must be >= 1");
}

GenerationParams DefaultParams(Step step, DecodeMode mode, DatasetId dataset,
                               ModelProfile profile) {
  GenerationParams p;
  p.top_p = 1.0;
  p.max_output_tokens = 512;
  p.num_shots = dataset == DatasetId::kFinQA ? 4 : 8;
  if (mode == DecodeMode::kGreedy) {
    p.temperature = 0.0;
    p.n_samples = 1;
    return p;
  }
  // Sampling profile. "Augmentation generation" covers the analysis step and
  // its row-wise follow-up; SQL generation is step 3.
  p.num_shots = 8;
  const bool llama = profile == ModelProfile::kLlama;
  if (llama) {
    p.max_output_tokens = 256;
    p.model_id = "llama-2-13b-chat";
  }
  if (step == Step::kSql) {
    p.temperature = 0.4;
    p.n_samples = llama ? 3 : 2;
  } else {
    p.temperature = llama ? 0.8 : 0.6;
    p.n_samples = llama ? 4 : 3;
  }
  return p;
}

namespace {

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string NowIso() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string Tail(const MessageSequence& messages, size_t n) {
  if (messages.empty()) return {};
  const std::string& last = messages.back().content;
  return last.size() <= n ? last : last.substr(last.size() - n);
}

}  // namespace

std::string RequestPayload(const MessageSequence& messages,
                           const GenerationParams& params, int sample_index) {
  json msgs = json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  json payload = {
      {"model", params.model_id},
      {"temperature", params.temperature},
      {"top_p", params.top_p},
      {"max_output_tokens", params.max_output_tokens},
      {"messages", std::move(msgs)},
      {"sample_index", sample_index},
  };
  return payload.dump();
}

std::string RequestKey(const MessageSequence& messages,
                       const GenerationParams& params, int sample_index) {
  return Sha256Hex(RequestPayload(messages, params, sample_index));
}

std::string TranscriptEntryToJson(const TranscriptEntry& e) {
  json j = {
      {"key", e.key},
      {"sample_index", e.sample_index},
      {"model_id", e.model_id},
      {"request_tail", e.request_tail},
      {"response", e.response_text},
      {"created_at", e.created_at},
  };
  return j.dump();
}

TranscriptEntry TranscriptEntryFromJson(std::string_view line) {
  json j = json::parse(line);
  TranscriptEntry e;
  e.key = j.at("key").get<std::string>();
  e.sample_index = j.value("sample_index", 0);
  e.model_id = j.value("model_id", "");
  e.request_tail = j.value("request_tail", "");
  e.response_text = j.at("response").get<std::string>();
  e.created_at = j.value("created_at", "");
  return e;
}

TranscriptStore::TranscriptStore(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    TranscriptEntry e;
    try {
      e = TranscriptEntryFromJson(line);
    } catch (const std::exception& ex) {
      throw InputError(path_ + ":" + std::to_string(lineno) +
                       ": bad transcript entry: " + ex.what());
    }
    if (index_.contains(e.key)) continue;
    index_.emplace(e.key, entries_.size());
    entries_.push_back(std::move(e));
  }
}

std::optional<std::string> TranscriptStore::Find(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].response_text;
}

void TranscriptStore::Append(const TranscriptEntry& entry) {
  std::lock_guard lock(mu_);
  if (index_.contains(entry.key)) return;
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error("cannot append to transcript " + path_);
    out << TranscriptEntryToJson(entry) << '\n';
  }
  index_.emplace(entry.key, entries_.size());
  entries_.push_back(entry);
}

size_t TranscriptStore::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::vector<TranscriptEntry> TranscriptStore::Entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

ReplayModel::ReplayModel(std::shared_ptr<const TranscriptStore> store)
    : store_(std::move(store)) {}

std::vector<std::string> ReplayModel::Complete(const MessageSequence& messages,
                                               const GenerationParams& params) {
  std::vector<std::string> out;
  for (int i = 0; i < params.n_samples; ++i) {
    std::string key = RequestKey(messages, params, i);
    auto hit = store_->Find(key);
    if (!hit) {
      throw CacheMiss("no transcript entry for request " + key.substr(0, 12) +
                      " (sample " + std::to_string(i) + ", ..." +
                      Tail(messages, 60) + ")");
    }
    out.push_back(std::move(*hit));
  }
  return out;
}

RecordingModel::RecordingModel(std::shared_ptr<LanguageModel> inner,
                               std::shared_ptr<TranscriptStore> store)
    : inner_(std::move(inner)), store_(std::move(store)) {}

std::vector<std::string> RecordingModel::Complete(
    const MessageSequence& messages, const GenerationParams& params) {
  std::vector<std::string> keys;
  std::vector<std::optional<std::string>> cached;
  bool all_cached = true;
  for (int i = 0; i < params.n_samples; ++i) {
    keys.push_back(RequestKey(messages, params, i));
    cached.push_back(store_->Find(keys.back()));
    all_cached = all_cached && cached.back().has_value();
  }
  std::vector<std::string> out;
  if (all_cached) {
    for (auto& c : cached) out.push_back(std::move(*c));
    return out;
  }
  std::vector<std::string> fresh = inner_->Complete(messages, params);
  if (fresh.size() != static_cast<size_t>(params.n_samples)) {
    throw SourceError("model returned " + std::to_string(fresh.size()) +
                      " samples, expected " + std::to_string(params.n_samples));
  }
  const std::string created = NowIso();
  const std::string tail = Tail(messages, 160);
  for (int i = 0; i < params.n_samples; ++i) {
    if (cached[i]) {
      out.push_back(std::move(*cached[i]));
      continue;
    }
    store_->Append({keys[i], i, params.model_id, fresh[i], created, tail});
    out.push_back(std::move(fresh[i]));
  }
  return out;
}

CountingModel::CountingModel(std::shared_ptr<LanguageModel> inner)
    : inner_(std::move(inner)) {}

std::vector<std::string> CountingModel::Complete(
    const MessageSequence& messages, const GenerationParams& params) {
  requests_.fetch_add(1);
  samples_.fetch_add(static_cast<size_t>(params.n_samples));
  {
    std::lock_guard lock(mu_);
    std::string head;
    if (!messages.empty() && messages.front().role == "system") {
      head = messages.front().content.substr(0, 60);
    }
    log_.push_back({head, params.n_samples, params.temperature});
    for (int i = 0; i < params.n_samples; ++i) {
      std::string payload = RequestPayload(messages, params, i);
      std::string key = RequestKey(messages, params, i);
      auto [it, inserted] = payloads_.emplace(key, payload);
      if (!inserted && it->second != payload) ++collisions_;
    }
  }
  return inner_->Complete(messages, params);
}

std::vector<CallRecord> CountingModel::log() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::map<std::string, std::string> CountingModel::keyed_payloads() const {
  std::lock_guard lock(mu_);
  return payloads_;
}

size_t CountingModel::key_collisions() const {
  std::lock_guard lock(mu_);
  return collisions_;
}

}  // namespace tabaug
