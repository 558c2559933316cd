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

#ifndef TABAUG_SQLEXEC_H_
#define TABAUG_SQLEXEC_H_

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabaug/augment.h"
#include "tabaug/cell.h"
#include "tabaug/sqlgen.h"

struct sqlite3;

namespace tabaug {

enum class ExecStatus {
  kOk,
  kSyntaxError,
  kMissingIdentifier,
  kTypeError,
  kEmptyResult,
  kEngineError,
};

std::string_view ExecStatusName(ExecStatus status);
std::optional<ExecStatus> ParseExecStatus(std::string_view name);

// Statuses that count towards the execution-error rate. An empty result is
// a wrong answer, not an execution error.
bool IsExecutionError(ExecStatus status);

using ResultRows = std::vector<std::vector<CellValue>>;

struct ExecutionOutcome {
  ExecStatus status = ExecStatus::kEngineError;
  std::optional<ResultRows> value;  // present iff status == kOk
  std::vector<std::string> column_names;
  std::string message;
};

// Maps an SQLite result code and message onto the status taxonomy.
ExecStatus ClassifyEngineError(int code, std::string_view message);

inline constexpr std::chrono::milliseconds kDefaultQueryTimeout{5000};

// A private in-memory database holding one question's tables. Sessions are
// not shared between threads.
class Session {
 public:
  // t1 is the joined table (open) or the base table (closed); t2 is created
  // when an augmenting table is present in closed mode. After loading the
  // connection only admits read-only statements.
  static Session Load(const TableBundle& bundle);

  Session(Session&&) noexcept;
  Session& operator=(Session&&) noexcept;
  ~Session();

  ExecutionOutcome Execute(std::string_view sql,
                           std::chrono::milliseconds timeout = kDefaultQueryTimeout);
  ExecutionOutcome Execute(const SqlCandidate& candidate,
                           std::chrono::milliseconds timeout = kDefaultQueryTimeout);

  std::vector<std::string> TableNames();

 private:
  Session();
  void CreateTable(const Table& table, const std::string& sql_name);
  void Seal();

  struct Closer {
    void operator()(sqlite3* db) const;
  };
  std::unique_ptr<sqlite3, Closer> db_;
};

}  // namespace tabaug

#endif  // TABAUG_SQLEXEC_H_
