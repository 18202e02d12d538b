#include <sqlite3.h>

#include <cmath>
#include <cstdio>
#include <mutex>
#include <random>
#include <set>

#include "dfbench/error.hpp"
#include "dfbench/store.hpp"

namespace dfbench {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS config (
  key   TEXT NOT NULL,
  suite TEXT NOT NULL,
  value TEXT NOT NULL,
  PRIMARY KEY (key, suite)
);
CREATE TABLE IF NOT EXISTS ground_truth (
  id                 INTEGER PRIMARY KEY AUTOINCREMENT,
  test_case          TEXT NOT NULL,
  cftt_task          TEXT NOT NULL,
  type               TEXT,
  os                 TEXT,
  file_name          TEXT,
  size               INTEGER,
  access_time_stamp  TEXT,
  modify_time_stamp  TEXT,
  change_time_stamp  TEXT,
  deleted_time_stamp TEXT,
  dfr_blocks         TEXT,
  carve_type         TEXT,
  payload            TEXT NOT NULL DEFAULT '',
  natural_key        TEXT NOT NULL,
  UNIQUE (cftt_task, test_case, natural_key)
);
CREATE INDEX IF NOT EXISTS ground_truth_case
  ON ground_truth (cftt_task, test_case);
CREATE TABLE IF NOT EXISTS test_results (
  id         INTEGER PRIMARY KEY AUTOINCREMENT,
  test_case  TEXT NOT NULL,
  tool       TEXT NOT NULL,
  job_id     TEXT NOT NULL,
  tp         INTEGER NOT NULL,
  fp         INTEGER NOT NULL,
  fn         INTEGER NOT NULL,
  f1         REAL NOT NULL,
  created_at TEXT NOT NULL
);
CREATE TRIGGER IF NOT EXISTS test_results_no_update
  BEFORE UPDATE ON test_results
  BEGIN SELECT RAISE(ABORT, 'test_results is append-only'); END;
CREATE TRIGGER IF NOT EXISTS test_results_no_delete
  BEFORE DELETE ON test_results
  BEGIN SELECT RAISE(ABORT, 'test_results is append-only'); END;
)sql";

constexpr const char* kGroundTruthColumns =
    "id, test_case, cftt_task, type, os, file_name, size, access_time_stamp, "
    "modify_time_stamp, change_time_stamp, deleted_time_stamp, dfr_blocks, "
    "carve_type, payload";

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      Fail(ErrorKind::kStorage, sqlite3_errmsg(db));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  void Bind(int i, const std::string& v) {
    Check(sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()),
                            SQLITE_TRANSIENT));
  }
  void Bind(int i, std::int64_t v) { Check(sqlite3_bind_int64(stmt_, i, v)); }
  void Bind(int i, double v) { Check(sqlite3_bind_double(stmt_, i, v)); }
  void BindNull(int i) { Check(sqlite3_bind_null(stmt_, i)); }
  template <typename T, typename F>
  void BindOpt(int i, const std::optional<T>& v, F&& render) {
    if (v) {
      Bind(i, render(*v));
    } else {
      BindNull(i);
    }
  }

  // True when a row is available.
  bool Step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    const int ext = sqlite3_extended_errcode(db_);
    if (ext == SQLITE_CONSTRAINT_UNIQUE || ext == SQLITE_CONSTRAINT_PRIMARYKEY) {
      Fail(ErrorKind::kDuplicateGroundTruth, sqlite3_errmsg(db_));
    }
    Fail(ErrorKind::kStorage, sqlite3_errmsg(db_));
  }
  void Reset() {
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
  }

  bool IsNull(int c) const { return sqlite3_column_type(stmt_, c) == SQLITE_NULL; }
  std::string Text(int c) const {
    const auto* p = sqlite3_column_text(stmt_, c);
    return p ? std::string(reinterpret_cast<const char*>(p),
                           static_cast<std::size_t>(sqlite3_column_bytes(stmt_, c)))
             : std::string();
  }
  std::optional<std::string> OptText(int c) const {
    if (IsNull(c)) return std::nullopt;
    return Text(c);
  }
  std::int64_t Int(int c) const { return sqlite3_column_int64(stmt_, c); }
  double Real(int c) const { return sqlite3_column_double(stmt_, c); }

 private:
  void Check(int rc) {
    if (rc != SQLITE_OK) Fail(ErrorKind::kStorage, sqlite3_errmsg(db_));
  }

  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

std::optional<Timestamp> OptTimestamp(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  return ParseTimestamp(*s);
}

class SqliteStore final : public Store {
 public:
  explicit SqliteStore(const std::string& path) {
    const int flags = SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE |
                      SQLITE_OPEN_FULLMUTEX;
    if (sqlite3_open_v2(path.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
      const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      Fail(ErrorKind::kStorage, "cannot open store '" + path + "': " + msg);
    }
    sqlite3_busy_timeout(db_, 5000);
    Exec(kSchema);
  }
  ~SqliteStore() override { sqlite3_close(db_); }

  void SetConfig(const ConfigEntry& e) override {
    std::lock_guard lock(mu_);
    Statement st(db_,
                 "INSERT INTO config (key, suite, value) VALUES (?, ?, ?) "
                 "ON CONFLICT (key, suite) DO UPDATE SET value = excluded.value");
    st.Bind(1, e.key);
    st.Bind(2, e.scope);
    st.Bind(3, e.value);
    st.Step();
  }

  std::optional<std::string> GetConfig(const std::string& key,
                                       const std::string& scope) override {
    std::lock_guard lock(mu_);
    Statement st(db_, "SELECT value FROM config WHERE key = ? AND suite = ?");
    st.Bind(1, key);
    st.Bind(2, scope);
    if (!st.Step()) return std::nullopt;
    return st.Text(0);
  }

  std::vector<ConfigEntry> ListConfig() override {
    std::lock_guard lock(mu_);
    Statement st(db_, "SELECT key, value, suite FROM config ORDER BY suite, key");
    std::vector<ConfigEntry> out;
    while (st.Step()) out.push_back({st.Text(0), st.Text(1), st.Text(2)});
    return out;
  }

  std::int64_t InsertGroundTruth(const GroundTruthRecord& record) override {
    return InsertGroundTruthBatch(std::span(&record, 1)).front();
  }

  std::vector<std::int64_t> InsertGroundTruthBatch(
      std::span<const GroundTruthRecord> records) override {
    std::set<std::string> batch_keys;
    for (const auto& r : records) {
      ValidateGroundTruth(r);
      std::string key = std::string(SuiteName(r.cftt_task)) + '\x1e' +
                        r.test_case + '\x1e' + NaturalKey(r);
      if (!batch_keys.insert(std::move(key)).second) {
        Fail(ErrorKind::kDuplicateGroundTruth,
             "duplicate ground truth for '" + r.test_case + "' within batch");
      }
    }

    std::lock_guard lock(mu_);
    std::vector<std::int64_t> ids;
    ids.reserve(records.size());
    Exec("BEGIN IMMEDIATE");
    try {
      Statement st(db_,
                   "INSERT INTO ground_truth (test_case, cftt_task, type, os, "
                   "file_name, size, access_time_stamp, modify_time_stamp, "
                   "change_time_stamp, deleted_time_stamp, dfr_blocks, "
                   "carve_type, payload, natural_key) VALUES "
                   "(?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)");
      const auto id = [](const std::string& s) { return s; };
      const auto ts = [](const Timestamp& t) { return FormatTimestamp(t); };
      for (const auto& r : records) {
        st.Bind(1, r.test_case);
        st.Bind(2, std::string(SuiteName(r.cftt_task)));
        st.BindOpt(3, r.type,
                   [](FileStatus s) { return std::string(FileStatusName(s)); });
        st.BindOpt(4, r.os, id);
        st.BindOpt(5, r.file_name, id);
        if (r.size) {
          st.Bind(6, static_cast<std::int64_t>(*r.size));
        } else {
          st.BindNull(6);
        }
        st.BindOpt(7, r.access_time_stamp, ts);
        st.BindOpt(8, r.modify_time_stamp, ts);
        st.BindOpt(9, r.change_time_stamp, ts);
        st.BindOpt(10, r.deleted_time_stamp, ts);
        st.BindOpt(11, r.dfr_blocks, FormatBlockRanges);
        st.BindOpt(12, r.carve_type,
                   [](CarveType t) { return std::string(CarveTypeName(t)); });
        st.Bind(13, r.payload);
        st.Bind(14, NaturalKey(r));
        try {
          st.Step();
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::kDuplicateGroundTruth) {
            Fail(ErrorKind::kDuplicateGroundTruth,
                 "ground truth for '" + r.test_case + "' already present");
          }
          throw;
        }
        ids.push_back(sqlite3_last_insert_rowid(db_));
        st.Reset();
      }
      Exec("COMMIT");
    } catch (...) {
      Exec("ROLLBACK");
      throw;
    }
    return ids;
  }

  std::vector<GroundTruthRecord> QueryGroundTruth(const std::string& test_case,
                                                  Suite suite) override {
    std::lock_guard lock(mu_);
    const std::string sql = std::string("SELECT ") + kGroundTruthColumns +
                            " FROM ground_truth WHERE test_case = ? AND "
                            "cftt_task = ? ORDER BY id";
    Statement st(db_, sql.c_str());
    st.Bind(1, test_case);
    st.Bind(2, std::string(SuiteName(suite)));
    std::vector<GroundTruthRecord> out;
    while (st.Step()) {
      GroundTruthRecord r;
      r.id = st.Int(0);
      r.test_case = st.Text(1);
      r.cftt_task = ParseSuite(st.Text(2)).value_or(suite);
      if (auto t = st.OptText(3)) r.type = ParseFileStatus(*t);
      r.os = st.OptText(4);
      r.file_name = st.OptText(5);
      if (!st.IsNull(6)) r.size = static_cast<std::uint64_t>(st.Int(6));
      r.access_time_stamp = OptTimestamp(st.OptText(7));
      r.modify_time_stamp = OptTimestamp(st.OptText(8));
      r.change_time_stamp = OptTimestamp(st.OptText(9));
      r.deleted_time_stamp = OptTimestamp(st.OptText(10));
      if (auto b = st.OptText(11)) r.dfr_blocks = ParseBlockRanges(*b);
      if (auto c = st.OptText(12)) r.carve_type = ParseCarveType(*c);
      r.payload = st.Text(13);
      out.push_back(std::move(r));
    }
    return out;
  }

  std::vector<std::string> ListTestCases(Suite suite) override {
    std::lock_guard lock(mu_);
    Statement st(db_,
                 "SELECT test_case FROM ground_truth WHERE cftt_task = ? "
                 "GROUP BY test_case ORDER BY MIN(id)");
    st.Bind(1, std::string(SuiteName(suite)));
    std::vector<std::string> out;
    while (st.Step()) out.push_back(st.Text(0));
    return out;
  }

  std::size_t CountGroundTruth(std::optional<Suite> suite) override {
    std::lock_guard lock(mu_);
    if (suite) {
      Statement st(db_, "SELECT COUNT(*) FROM ground_truth WHERE cftt_task = ?");
      st.Bind(1, std::string(SuiteName(*suite)));
      st.Step();
      return static_cast<std::size_t>(st.Int(0));
    }
    Statement st(db_, "SELECT COUNT(*) FROM ground_truth");
    st.Step();
    return static_cast<std::size_t>(st.Int(0));
  }

  std::int64_t RecordResult(const TestResultRecord& result) override {
    const double expected = ComputeMetrics(result.counts).f1;
    if (!(std::fabs(expected - result.f1) <= 1e-9)) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "f1 %.9g inconsistent with counts (expected %.9g)",
                    result.f1, expected);
      Fail(ErrorKind::kConsistencyViolation, buf);
    }
    std::lock_guard lock(mu_);
    Statement st(db_,
                 "INSERT INTO test_results (test_case, tool, job_id, tp, fp, fn, "
                 "f1, created_at) VALUES (?, ?, ?, ?, ?, ?, ?, ?)");
    st.Bind(1, result.test_case);
    st.Bind(2, result.tool.empty() ? std::string("unspecified") : result.tool);
    st.Bind(3, result.job_id.empty() ? NewJobId() : result.job_id);
    st.Bind(4, static_cast<std::int64_t>(result.counts.tp));
    st.Bind(5, static_cast<std::int64_t>(result.counts.fp));
    st.Bind(6, static_cast<std::int64_t>(result.counts.fn));
    st.Bind(7, result.f1);
    st.Bind(8, FormatTimestamp(result.created_at.seconds == 0 ? Now()
                                                              : result.created_at));
    st.Step();
    return sqlite3_last_insert_rowid(db_);
  }

  std::vector<TestResultRecord> ListResults(const ResultFilter& filter) override {
    std::string sql =
        "SELECT id, test_case, tool, job_id, tp, fp, fn, f1, created_at "
        "FROM test_results WHERE 1 = 1";
    if (filter.test_case) sql += " AND test_case = ?";
    if (filter.tool) sql += " AND tool = ?";
    if (filter.job_id) sql += " AND job_id = ?";
    sql += " ORDER BY id";

    std::lock_guard lock(mu_);
    Statement st(db_, sql.c_str());
    int i = 1;
    if (filter.test_case) st.Bind(i++, *filter.test_case);
    if (filter.tool) st.Bind(i++, *filter.tool);
    if (filter.job_id) st.Bind(i++, *filter.job_id);
    std::vector<TestResultRecord> out;
    while (st.Step()) {
      TestResultRecord r;
      r.id = st.Int(0);
      r.test_case = st.Text(1);
      r.tool = st.Text(2);
      r.job_id = st.Text(3);
      r.counts = {static_cast<std::uint64_t>(st.Int(4)),
                  static_cast<std::uint64_t>(st.Int(5)),
                  static_cast<std::uint64_t>(st.Int(6))};
      r.f1 = st.Real(7);
      r.created_at = ParseTimestamp(st.Text(8)).value_or(Timestamp{});
      out.push_back(std::move(r));
    }
    return out;
  }

 private:
  void Exec(const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown error";
      sqlite3_free(err);
      Fail(ErrorKind::kStorage, msg);
    }
  }

  sqlite3* db_ = nullptr;
  std::mutex mu_;
};

}  // namespace

std::unique_ptr<Store> OpenSqliteStore(const std::string& path) {
  return std::make_unique<SqliteStore>(path);
}

std::string NewJobId() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char buf[33];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

}  // namespace dfbench
