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

#include "tabaug/sqlexec.h"

#include <sqlite3.h>

#include <array>
#include <utility>

#include "tabaug/strings.h"

namespace tabaug {

std::string_view ExecStatusName(ExecStatus status) {
  switch (status) {
    case ExecStatus::kOk: return "ok";
    case ExecStatus::kSyntaxError: return "syntax_error";
    case ExecStatus::kMissingIdentifier: return "missing_identifier";
    case ExecStatus::kTypeError: return "type_error";
    case ExecStatus::kEmptyResult: return "empty_result";
    case ExecStatus::kEngineError: return "engine_error";
  }
  return "engine_error";
}

std::optional<ExecStatus> ParseExecStatus(std::string_view name) {
  for (auto s : {ExecStatus::kOk, ExecStatus::kSyntaxError,
                 ExecStatus::kMissingIdentifier, ExecStatus::kTypeError,
                 ExecStatus::kEmptyResult, ExecStatus::kEngineError}) {
    if (ExecStatusName(s) == name) return s;
  }
  return std::nullopt;
}

bool IsExecutionError(ExecStatus status) {
  return status != ExecStatus::kOk && status != ExecStatus::kEmptyResult;
}

ExecStatus ClassifyEngineError(int code, std::string_view message) {
  const std::string msg = ToLower(message);
  auto has = [&msg](std::string_view s) { return msg.find(s) != std::string::npos; };
  const int primary = code & 0xff;
  if (primary == SQLITE_INTERRUPT) return ExecStatus::kEngineError;
  if (primary == SQLITE_AUTH || has("not authorized") || has("read-only") ||
      has("readonly")) {
    return ExecStatus::kSyntaxError;
  }
  if (has("no such column") || has("no such table") || has("no such function") ||
      has("ambiguous column name") || has("no such collation") ||
      has("term out of range")) {
    return ExecStatus::kMissingIdentifier;
  }
  if (has("syntax error") || has("incomplete input") || has("unrecognized token")) {
    return ExecStatus::kSyntaxError;
  }
  if (primary == SQLITE_MISMATCH || has("datatype mismatch") ||
      has("wrong number of arguments") || has("misuse of") ||
      has("sub-select returns") || has("row value misused") ||
      has("integer overflow") || has("do not have the same number of result columns") ||
      has("not allowed in the group by")) {
    return ExecStatus::kTypeError;
  }
  if (primary == SQLITE_ERROR && has("near \"")) return ExecStatus::kSyntaxError;
  return ExecStatus::kEngineError;
}

namespace {

std::string QuoteIdentifier(std::string_view name) {
  return "\"" + ReplaceAll(std::string(name), "\"", "\"\"") + "\"";
}

std::string_view StorageType(ColumnType type) {
  switch (type) {
    case ColumnType::kInt: return "INTEGER";
    case ColumnType::kReal: return "REAL";
    default: return "TEXT";
  }
}

// Only plain reads are admitted once a session is sealed.
int ReadOnlyAuthorizer(void*, int action, const char*, const char*, const char*,
                       const char*) {
  switch (action) {
    case SQLITE_SELECT:
    case SQLITE_READ:
    case SQLITE_FUNCTION:
    case SQLITE_RECURSIVE:
      return SQLITE_OK;
    default:
      return SQLITE_DENY;
  }
}

struct Deadline {
  std::chrono::steady_clock::time_point at;
};

int ProgressCheck(void* arg) {
  auto* deadline = static_cast<Deadline*>(arg);
  return std::chrono::steady_clock::now() > deadline->at ? 1 : 0;
}

struct StmtCloser {
  void operator()(sqlite3_stmt* s) const { sqlite3_finalize(s); }
};
using Stmt = std::unique_ptr<sqlite3_stmt, StmtCloser>;

ExecutionOutcome Failure(ExecStatus status, std::string message) {
  ExecutionOutcome out;
  out.status = status;
  out.message = message.empty() ? std::string(ExecStatusName(status)) : std::move(message);
  return out;
}

}  // namespace

void Session::Closer::operator()(sqlite3* db) const { sqlite3_close_v2(db); }

Session::Session() {
  sqlite3* raw = nullptr;
  int rc = sqlite3_open_v2(":memory:", &raw,
                           SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE |
                               SQLITE_OPEN_NOMUTEX,
                           nullptr);
  db_.reset(raw);
  if (rc != SQLITE_OK) {
    throw Error(std::string("cannot open in-memory database: ") +
                (raw ? sqlite3_errmsg(raw) : "out of memory"));
  }
}

Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;
Session::~Session() = default;

void Session::CreateTable(const Table& table, const std::string& sql_name) {
  sqlite3* db = db_.get();
  std::string ddl = "CREATE TABLE " + QuoteIdentifier(sql_name) + " (";
  for (size_t c = 0; c < table.column_count(); ++c) {
    if (c > 0) ddl += ", ";
    ddl += QuoteIdentifier(table.columns()[c].name) + " ";
    ddl += StorageType(table.columns()[c].type);
  }
  ddl += ")";
  char* err = nullptr;
  if (sqlite3_exec(db, ddl.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw Error("cannot create table " + sql_name + ": " + msg);
  }

  std::string insert = "INSERT INTO " + QuoteIdentifier(sql_name) + " VALUES (";
  for (size_t c = 0; c < table.column_count(); ++c) insert += c ? ", ?" : "?";
  insert += ")";
  sqlite3_stmt* raw = nullptr;
  if (sqlite3_prepare_v2(db, insert.c_str(), -1, &raw, nullptr) != SQLITE_OK) {
    throw Error(std::string("cannot prepare insert: ") + sqlite3_errmsg(db));
  }
  Stmt stmt(raw);
  sqlite3_exec(db, "BEGIN", nullptr, nullptr, nullptr);
  for (const auto& row : table.rows()) {
    sqlite3_reset(stmt.get());
    sqlite3_clear_bindings(stmt.get());
    for (size_t c = 0; c < row.size(); ++c) {
      const int idx = static_cast<int>(c) + 1;
      const CellValue& v = row[c].value;
      if (IsNull(v)) {
        sqlite3_bind_null(stmt.get(), idx);
      } else if (const auto* i = std::get_if<std::int64_t>(&v)) {
        sqlite3_bind_int64(stmt.get(), idx, *i);
      } else if (const auto* d = std::get_if<double>(&v)) {
        sqlite3_bind_double(stmt.get(), idx, *d);
      } else {
        std::string text = CellToString(v);
        sqlite3_bind_text(stmt.get(), idx, text.c_str(),
                          static_cast<int>(text.size()), SQLITE_TRANSIENT);
      }
    }
    if (sqlite3_step(stmt.get()) != SQLITE_DONE) {
      std::string msg = sqlite3_errmsg(db);
      sqlite3_exec(db, "ROLLBACK", nullptr, nullptr, nullptr);
      throw Error("cannot load table " + sql_name + ": " + msg);
    }
  }
  sqlite3_exec(db, "COMMIT", nullptr, nullptr, nullptr);
}

void Session::Seal() {
  sqlite3_exec(db_.get(), "PRAGMA query_only = 1", nullptr, nullptr, nullptr);
  sqlite3_set_authorizer(db_.get(), ReadOnlyAuthorizer, nullptr);
}

Session Session::Load(const TableBundle& bundle) {
  Session session;
  session.CreateTable(bundle.primary(), "t1");
  if (bundle.mode == BundleMode::kClosedSeparate && bundle.augmenting) {
    session.CreateTable(*bundle.augmenting, "t2");
  }
  session.Seal();
  return session;
}

std::vector<std::string> Session::TableNames() {
  sqlite3_set_authorizer(db_.get(), nullptr, nullptr);
  std::vector<std::string> names;
  sqlite3_stmt* raw = nullptr;
  if (sqlite3_prepare_v2(db_.get(),
                         "SELECT name FROM sqlite_master WHERE type = 'table' "
                         "ORDER BY name",
                         -1, &raw, nullptr) == SQLITE_OK) {
    Stmt stmt(raw);
    while (sqlite3_step(stmt.get()) == SQLITE_ROW) {
      names.emplace_back(
          reinterpret_cast<const char*>(sqlite3_column_text(stmt.get(), 0)));
    }
  }
  sqlite3_set_authorizer(db_.get(), ReadOnlyAuthorizer, nullptr);
  return names;
}

ExecutionOutcome Session::Execute(const SqlCandidate& candidate,
                                  std::chrono::milliseconds timeout) {
  if (!candidate.valid) {
    return Failure(ExecStatus::kSyntaxError,
                   "no executable SQL: " + candidate.error);
  }
  return Execute(candidate.sql, timeout);
}

ExecutionOutcome Session::Execute(std::string_view sql,
                                  std::chrono::milliseconds timeout) {
  sqlite3* db = db_.get();
  std::string text(sql);
  sqlite3_stmt* raw = nullptr;
  const char* tail = nullptr;
  int rc = sqlite3_prepare_v2(db, text.c_str(), static_cast<int>(text.size()),
                              &raw, &tail);
  Stmt stmt(raw);
  if (rc != SQLITE_OK) {
    std::string msg = sqlite3_errmsg(db);
    return Failure(ClassifyEngineError(sqlite3_extended_errcode(db), msg), msg);
  }
  if (!stmt) return Failure(ExecStatus::kSyntaxError, "empty statement");
  std::string_view rest = TrimView(tail ? std::string_view(tail) : std::string_view());
  while (!rest.empty() && rest.front() == ';') rest = TrimView(rest.substr(1));
  if (!rest.empty()) {
    return Failure(ExecStatus::kSyntaxError, "multiple statements are not allowed");
  }
  if (!sqlite3_stmt_readonly(stmt.get())) {
    return Failure(ExecStatus::kSyntaxError, "write statements are not allowed");
  }

  Deadline deadline{std::chrono::steady_clock::now() + timeout};
  sqlite3_progress_handler(db, 1000, ProgressCheck, &deadline);

  ExecutionOutcome out;
  const int ncols = sqlite3_column_count(stmt.get());
  for (int c = 0; c < ncols; ++c) {
    const char* name = sqlite3_column_name(stmt.get(), c);
    out.column_names.emplace_back(name ? name : "");
  }
  ResultRows rows;
  while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    std::vector<CellValue> row;
    row.reserve(ncols);
    for (int c = 0; c < ncols; ++c) {
      switch (sqlite3_column_type(stmt.get(), c)) {
        case SQLITE_INTEGER:
          row.emplace_back(static_cast<std::int64_t>(sqlite3_column_int64(stmt.get(), c)));
          break;
        case SQLITE_FLOAT:
          row.emplace_back(sqlite3_column_double(stmt.get(), c));
          break;
        case SQLITE_NULL:
          row.emplace_back(std::monostate{});
          break;
        default: {
          const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt.get(), c));
          int n = sqlite3_column_bytes(stmt.get(), c);
          row.emplace_back(std::string(p ? p : "", static_cast<size_t>(n)));
        }
      }
    }
    rows.push_back(std::move(row));
  }
  sqlite3_progress_handler(db, 0, nullptr, nullptr);

  if (rc != SQLITE_DONE) {
    int code = sqlite3_extended_errcode(db);
    if ((code & 0xff) == SQLITE_INTERRUPT) {
      return Failure(ExecStatus::kEngineError,
                     "query timed out after " + std::to_string(timeout.count()) + " ms");
    }
    std::string msg = sqlite3_errmsg(db);
    return Failure(ClassifyEngineError(code, msg), msg);
  }
  if (rows.empty()) {
    out.status = ExecStatus::kEmptyResult;
    out.message = "query returned no rows";
    return out;
  }
  out.status = ExecStatus::kOk;
  out.value = std::move(rows);
  return out;
}

}  // namespace tabaug
