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

#ifndef TABAUG_LLMCLIENT_H_
#define TABAUG_LLMCLIENT_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tabaug/dataset_id.h"
#include "tabaug/error.h"
#include "tabaug/promptkit.h"

namespace tabaug {

enum class Step { kAnalyze, kAugment, kSql };
enum class DecodeMode { kGreedy, kEnsemble };
enum class ModelProfile { kGpt, kLlama };

std::string_view StepName(Step step);

struct GenerationParams {
  double temperature = 0.0;
  double top_p = 1.0;
  int max_output_tokens = 512;
  int n_samples = 1;
  std::string model_id = "gpt-3.5-turbo-1106";
  int num_shots = 8;

  // Throws ConfigError unless temperature >= 0, 0 < top_p <= 1, n >= 1.
  void Validate() const;
};

// Greedy decoding is temperature 0 with a single sample. Ensemble settings
// follow the sampling profile of the chosen backbone.
GenerationParams DefaultParams(Step step, DecodeMode mode, DatasetId dataset,
                               ModelProfile profile = ModelProfile::kGpt);

class SourceError : public Error {
 public:
  using Error::Error;
};

class CacheMiss : public SourceError {
 public:
  using SourceError::SourceError;
};

class TransportError : public SourceError {
 public:
  using SourceError::SourceError;
};

class RateLimited : public TransportError {
 public:
  using TransportError::TransportError;
};

// The knowledge source the pipeline queries. Implementations must be safe
// for concurrent use.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  // Returns exactly params.n_samples texts, in sample-index order.
  virtual std::vector<std::string> Complete(const MessageSequence& messages,
                                            const GenerationParams& params) = 0;
};

// Content hash (SHA-256, hex) of the request for one sample. n_samples is
// deliberately excluded so that sample i of an n=3 request and sample i of
// an n=4 request share a key.
std::string RequestKey(const MessageSequence& messages,
                       const GenerationParams& params, int sample_index);

struct TranscriptEntry {
  std::string key;
  int sample_index = 0;
  std::string model_id;
  std::string response_text;
  std::string created_at;
  // Last characters of the final user turn, for humans reading fixtures.
  std::string request_tail;
};

std::string TranscriptEntryToJson(const TranscriptEntry& entry);
TranscriptEntry TranscriptEntryFromJson(std::string_view line);

// Append-only JSON-lines store. Reads are lock-free after Load; writes are
// serialized.
class TranscriptStore {
 public:
  TranscriptStore() = default;
  // A missing file is an empty store. Later duplicate keys are ignored.
  explicit TranscriptStore(std::string path);

  std::optional<std::string> Find(const std::string& key) const;
  // Persists the entry (when backed by a file) and makes it visible.
  void Append(const TranscriptEntry& entry);
  size_t size() const;
  std::vector<TranscriptEntry> Entries() const;

 private:
  std::string path_;
  mutable std::mutex mu_;
  std::vector<TranscriptEntry> entries_;
  std::unordered_map<std::string, size_t> index_;
};

// Serves every sample from the store; a miss raises CacheMiss.
class ReplayModel : public LanguageModel {
 public:
  explicit ReplayModel(std::shared_ptr<const TranscriptStore> store);
  std::vector<std::string> Complete(const MessageSequence& messages,
                                    const GenerationParams& params) override;

 private:
  std::shared_ptr<const TranscriptStore> store_;
};

// Serves cached samples and forwards misses to `inner`, persisting every new
// sample.
class RecordingModel : public LanguageModel {
 public:
  RecordingModel(std::shared_ptr<LanguageModel> inner,
                 std::shared_ptr<TranscriptStore> store);
  std::vector<std::string> Complete(const MessageSequence& messages,
                                    const GenerationParams& params) override;

 private:
  std::shared_ptr<LanguageModel> inner_;
  std::shared_ptr<TranscriptStore> store_;
};

// One line of the call log kept by CountingModel.
struct CallRecord {
  std::string system_head;  // first characters of the system turn
  int n_samples = 0;
  double temperature = 0;
};

// Wraps a model and counts requests and generated samples.
class CountingModel : public LanguageModel {
 public:
  explicit CountingModel(std::shared_ptr<LanguageModel> inner);
  std::vector<std::string> Complete(const MessageSequence& messages,
                                    const GenerationParams& params) override;

  size_t requests() const { return requests_.load(); }
  size_t samples() const { return samples_.load(); }
  std::vector<CallRecord> log() const;
  // Every (key, request payload) pair seen, for collision audits.
  std::map<std::string, std::string> keyed_payloads() const;
  // Distinct payloads that hashed to an already-seen key.
  size_t key_collisions() const;

 private:
  std::shared_ptr<LanguageModel> inner_;
  std::atomic<size_t> requests_{0};
  std::atomic<size_t> samples_{0};
  mutable std::mutex mu_;
  std::vector<CallRecord> log_;
  std::map<std::string, std::string> payloads_;
  size_t collisions_ = 0;
};

// Canonical JSON payload that RequestKey hashes.
std::string RequestPayload(const MessageSequence& messages,
                           const GenerationParams& params, int sample_index);

}  // namespace tabaug

#endif  // TABAUG_LLMCLIENT_H_
