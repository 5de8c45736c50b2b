#include "xenomon/store.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "xenomon/error.hpp"
#include "xenomon/formats.hpp"

namespace xenomon::store {
namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE events (
  global_event_id INTEGER PRIMARY KEY,
  day INTEGER NOT NULL,
  a1_code TEXT, a1_name TEXT, a1_country TEXT, a1_type1 TEXT, a1_type2 TEXT, a1_type3 TEXT,
  a2_code TEXT, a2_name TEXT, a2_country TEXT, a2_type1 TEXT, a2_type2 TEXT, a2_type3 TEXT,
  is_root INTEGER NOT NULL,
  event_code TEXT NOT NULL,
  event_base_code TEXT NOT NULL,
  event_root_code TEXT NOT NULL,
  quad_class INTEGER NOT NULL,
  goldstein REAL NOT NULL,
  num_mentions INTEGER NOT NULL,
  num_sources INTEGER NOT NULL,
  num_articles INTEGER NOT NULL,
  avg_tone REAL NOT NULL,
  geo_present INTEGER NOT NULL,
  geo_lat REAL, geo_long REAL, geo_country TEXT, geo_name TEXT,
  date_added INTEGER NOT NULL,
  source_url TEXT NOT NULL
);
CREATE INDEX events_day ON events(day);
CREATE INDEX events_a2_code ON events(a2_code);

CREATE TABLE mentions (
  global_event_id INTEGER NOT NULL,
  mention_identifier TEXT NOT NULL,
  event_time INTEGER NOT NULL,
  mention_time INTEGER NOT NULL,
  mention_type INTEGER NOT NULL,
  source_name TEXT NOT NULL,
  sentence_id INTEGER NOT NULL,
  confidence INTEGER NOT NULL,
  doc_tone REAL NOT NULL,
  PRIMARY KEY (global_event_id, mention_identifier)
);
CREATE INDEX mentions_identifier ON mentions(mention_identifier);

CREATE TABLE gkg (
  gkg_record_id TEXT PRIMARY KEY,
  date INTEGER NOT NULL,
  document_identifier TEXT NOT NULL,
  themes TEXT NOT NULL,
  tone TEXT,
  locations_raw TEXT NOT NULL,
  gcam_raw TEXT NOT NULL
);
CREATE INDEX gkg_document ON gkg(document_identifier);

CREATE TABLE ingest_files (
  name TEXT PRIMARY KEY,
  kind TEXT NOT NULL,
  rows_total INTEGER NOT NULL,
  rows_ok INTEGER NOT NULL,
  rows_skipped INTEGER NOT NULL,
  inserted INTEGER NOT NULL,
  updated INTEGER NOT NULL,
  ingested_at INTEGER NOT NULL
);

CREATE TABLE meta (key TEXT PRIMARY KEY, value TEXT NOT NULL);

CREATE TABLE doc_volume (
  query TEXT NOT NULL,
  date INTEGER NOT NULL,
  matched INTEGER NOT NULL,
  total INTEGER NOT NULL,
  PRIMARY KEY (query, date)
);
)sql";

constexpr const char* kEventColumns =
    "global_event_id, day, a1_code, a1_name, a1_country, a1_type1, a1_type2, a1_type3, "
    "a2_code, a2_name, a2_country, a2_type1, a2_type2, a2_type3, is_root, event_code, event_base_code, "
    "event_root_code, quad_class, goldstein, num_mentions, num_sources, num_articles, avg_tone, geo_present, "
    "geo_lat, geo_long, geo_country, geo_name, date_added, source_url";
constexpr int kEventColumnCount = 31;

constexpr const char* kMentionColumns =
    "global_event_id, mention_identifier, event_time, mention_time, mention_type, source_name, sentence_id, "
    "confidence, doc_tone";

constexpr const char* kGkgColumns = "gkg_record_id, date, document_identifier, themes, tone, locations_raw, gcam_raw";

[[noreturn]] void fail(sqlite3* db, const std::string& what) {
  throw IoError(what + ": " + (db ? sqlite3_errmsg(db) : "no database"));
}

class Statement {
 public:
  Statement(sqlite3* db, const std::string& sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK) fail(db, "prepare '" + sql + "'");
  }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  ~Statement() { sqlite3_finalize(stmt_); }

  Statement& bind(int i, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_, i, v));
    return *this;
  }
  Statement& bind(int i, double v) {
    check(sqlite3_bind_double(stmt_, i, v));
    return *this;
  }
  Statement& bind(int i, std::string_view v) {
    check(sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    return *this;
  }
  Statement& bind_null(int i) {
    check(sqlite3_bind_null(stmt_, i));
    return *this;
  }
  Statement& bind(int i, const std::optional<std::string>& v) { return v ? bind(i, std::string_view{*v}) : bind_null(i); }
  Statement& bind(int i, const std::optional<double>& v) { return v ? bind(i, *v) : bind_null(i); }

  // True when a row is available.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    fail(db_, "step");
  }
  void run() {
    while (step()) {
    }
  }
  void reset() {
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
  }

  bool is_null(int i) const { return sqlite3_column_type(stmt_, i) == SQLITE_NULL; }
  std::int64_t i64(int i) const { return sqlite3_column_int64(stmt_, i); }
  double real(int i) const { return sqlite3_column_double(stmt_, i); }
  std::string text(int i) const {
    const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, i));
    return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, i))) : std::string();
  }
  std::optional<std::string> opt_text(int i) const {
    if (is_null(i)) return std::nullopt;
    return text(i);
  }
  std::optional<double> opt_real(int i) const {
    if (is_null(i)) return std::nullopt;
    return real(i);
  }

 private:
  void check(int rc) {
    if (rc != SQLITE_OK) fail(db_, "bind");
  }

  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

void exec(sqlite3* db, const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw IoError(std::string("sqlite: ") + msg);
  }
}

// Commits on success, rolls back when unwinding.
class Transaction {
 public:
  explicit Transaction(sqlite3* db) : db_(db) { exec(db_, "BEGIN IMMEDIATE"); }
  Transaction(const Transaction&) = delete;
  Transaction& operator=(const Transaction&) = delete;
  ~Transaction() {
    if (!done_) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
  }
  void commit() {
    exec(db_, "COMMIT");
    done_ = true;
  }

 private:
  sqlite3* db_;
  bool done_ = false;
};

Timestamp timestamp_from(std::int64_t v) {
  const auto ts = Timestamp::from_yyyymmddhhmmss(v);
  if (!ts) throw IoError("corrupt timestamp in store: " + std::to_string(v));
  return *ts;
}

Date date_from(std::int64_t v) {
  const auto d = Date::from_yyyymmdd(v);
  if (!d) throw IoError("corrupt date in store: " + std::to_string(v));
  return *d;
}

void bind_actor(Statement& s, int first, const std::optional<ActorRef>& a) {
  if (!a) {
    for (int i = 0; i < 6; ++i) s.bind_null(first + i);
    return;
  }
  s.bind(first, std::string_view{a->code});
  s.bind(first + 1, a->name);
  s.bind(first + 2, a->country_code);
  for (int i = 0; i < 3; ++i) {
    if (static_cast<std::size_t>(i) < a->type_codes.size()) s.bind(first + 3 + i, std::string_view{a->type_codes[i]});
    else s.bind_null(first + 3 + i);
  }
}

std::optional<ActorRef> read_actor(const Statement& s, int first) {
  if (s.is_null(first)) return std::nullopt;
  ActorRef a;
  a.code = s.text(first);
  a.name = s.opt_text(first + 1);
  a.country_code = s.opt_text(first + 2);
  for (int i = 0; i < 3; ++i) {
    if (!s.is_null(first + 3 + i)) a.type_codes.push_back(s.text(first + 3 + i));
  }
  return a;
}

void bind_event(Statement& s, const EventRecord& e) {
  s.bind(1, e.global_event_id);
  s.bind(2, e.day.yyyymmdd());
  bind_actor(s, 3, e.actor1);
  bind_actor(s, 9, e.actor2);
  s.bind(15, std::int64_t{e.is_root_event ? 1 : 0});
  s.bind(16, std::string_view{e.event_code});
  s.bind(17, std::string_view{e.event_base_code});
  s.bind(18, std::string_view{e.event_root_code});
  s.bind(19, std::int64_t{e.quad_class});
  s.bind(20, e.goldstein_scale);
  s.bind(21, e.num_mentions);
  s.bind(22, e.num_sources);
  s.bind(23, e.num_articles);
  s.bind(24, e.avg_tone);
  s.bind(25, std::int64_t{e.action_geo ? 1 : 0});
  if (e.action_geo) {
    s.bind(26, e.action_geo->latitude);
    s.bind(27, e.action_geo->longitude);
    s.bind(28, e.action_geo->country_code);
    s.bind(29, e.action_geo->full_name);
  } else {
    for (int i = 26; i <= 29; ++i) s.bind_null(i);
  }
  s.bind(30, e.date_added.yyyymmddhhmmss());
  s.bind(31, std::string_view{e.source_url});
}

EventRecord read_event(const Statement& s) {
  EventRecord e;
  e.global_event_id = s.i64(0);
  e.day = date_from(s.i64(1));
  e.actor1 = read_actor(s, 2);
  e.actor2 = read_actor(s, 8);
  e.is_root_event = s.i64(14) != 0;
  e.event_code = s.text(15);
  e.event_base_code = s.text(16);
  e.event_root_code = s.text(17);
  e.quad_class = static_cast<int>(s.i64(18));
  e.goldstein_scale = s.real(19);
  e.num_mentions = s.i64(20);
  e.num_sources = s.i64(21);
  e.num_articles = s.i64(22);
  e.avg_tone = s.real(23);
  if (s.i64(24) != 0) {
    e.action_geo = GeoPoint{s.opt_real(25), s.opt_real(26), s.opt_text(27), s.opt_text(28)};
  }
  e.date_added = timestamp_from(s.i64(29));
  e.source_url = s.text(30);
  return e;
}

void bind_mention(Statement& s, const MentionRecord& m) {
  s.bind(1, m.global_event_id);
  s.bind(2, std::string_view{m.mention_identifier});
  s.bind(3, m.event_time.yyyymmddhhmmss());
  s.bind(4, m.mention_time.yyyymmddhhmmss());
  s.bind(5, std::int64_t{m.mention_type});
  s.bind(6, std::string_view{m.mention_source_name});
  s.bind(7, std::int64_t{m.sentence_id});
  s.bind(8, std::int64_t{m.confidence});
  s.bind(9, m.mention_doc_tone);
}

MentionRecord read_mention(const Statement& s) {
  MentionRecord m;
  m.global_event_id = s.i64(0);
  m.mention_identifier = s.text(1);
  m.event_time = timestamp_from(s.i64(2));
  m.mention_time = timestamp_from(s.i64(3));
  m.mention_type = static_cast<int>(s.i64(4));
  m.mention_source_name = s.text(5);
  m.sentence_id = static_cast<int>(s.i64(6));
  m.confidence = static_cast<int>(s.i64(7));
  m.mention_doc_tone = s.real(8);
  return m;
}

void bind_gkg(Statement& s, const GkgRecord& g) {
  s.bind(1, std::string_view{g.gkg_record_id});
  s.bind(2, g.date.yyyymmddhhmmss());
  s.bind(3, std::string_view{g.document_identifier});
  s.bind(4, std::string_view{formats::render_v2themes(g.themes)});
  if (g.v2_tone) s.bind(5, std::string_view{formats::render_tone(*g.v2_tone)});
  else s.bind_null(5);
  s.bind(6, std::string_view{g.locations_raw});
  s.bind(7, std::string_view{g.gcam_raw});
}

GkgRecord read_gkg(const Statement& s) {
  GkgRecord g;
  g.gkg_record_id = s.text(0);
  g.date = timestamp_from(s.i64(1));
  g.document_identifier = s.text(2);
  g.themes = formats::parse_v2themes(s.text(3));
  if (!s.is_null(4)) g.v2_tone = formats::parse_tone_cell(s.text(4));
  g.locations_raw = s.text(5);
  g.gcam_raw = s.text(6);
  return g;
}

// Keeps the last row per key, in order of that last occurrence.
template <class Record, class KeyFn>
std::vector<const Record*> last_per_key(std::span<const Record> batch, KeyFn key, std::size_t& duplicates) {
  using Key = decltype(key(batch.front()));
  std::map<Key, std::size_t> last;
  for (std::size_t i = 0; i < batch.size(); ++i) last[key(batch[i])] = i;
  duplicates = batch.size() - last.size();
  std::vector<std::size_t> order;
  order.reserve(last.size());
  for (const auto& [k, i] : last) order.push_back(i);
  std::sort(order.begin(), order.end());
  std::vector<const Record*> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(&batch[i]);
  return out;
}

std::string placeholders(std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += i ? ",?" : "?";
  return out;
}

}  // namespace

Store::Store(const std::filesystem::path& path) { open(path.string()); }

Store Store::in_memory() {
  Store s;
  s.open(":memory:");
  return s;
}

Store::Store(Store&& other) noexcept : db_(std::exchange(other.db_, nullptr)), mutex_(std::move(other.mutex_)) {}

Store& Store::operator=(Store&& other) noexcept {
  if (this != &other) {
    if (db_) sqlite3_close(db_);
    db_ = std::exchange(other.db_, nullptr);
    mutex_ = std::move(other.mutex_);
  }
  return *this;
}

Store::~Store() {
  if (db_) sqlite3_close(db_);
}

void Store::open(const std::string& uri) {
  if (sqlite3_open_v2(uri.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                      nullptr) != SQLITE_OK) {
    const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    throw IoError("cannot open store " + uri + ": " + msg);
  }
  sqlite3_busy_timeout(db_, 5000);
  if (uri != ":memory:") exec(db_, "PRAGMA journal_mode=WAL");
  exec(db_, "PRAGMA synchronous=NORMAL");
  migrate();
}

void Store::migrate() {
  Statement probe(db_, "SELECT count(*) FROM sqlite_master WHERE type='table' AND name='schema_version'");
  probe.step();
  if (probe.i64(0) == 0) {
    Transaction tx(db_);
    exec(db_, kSchema);
    exec(db_, "CREATE TABLE schema_version (version INTEGER NOT NULL)");
    Statement ins(db_, "INSERT INTO schema_version(version) VALUES (?)");
    ins.bind(1, std::int64_t{kSchemaVersion}).run();
    tx.commit();
    return;
  }
  Statement version(db_, "SELECT version FROM schema_version");
  if (!version.step()) throw IoError("store has an empty schema_version table");
  if (version.i64(0) != kSchemaVersion) {
    throw IoError("store schema version " + std::to_string(version.i64(0)) + " is not supported (expected " +
                  std::to_string(kSchemaVersion) + ")");
  }
}

UpsertCounts Store::upsert_events(std::span<const EventRecord> batch) {
  std::lock_guard lock(*mutex_);
  UpsertCounts counts;
  if (batch.empty()) return counts;
  const auto rows =
      last_per_key(batch, [](const EventRecord& e) { return e.global_event_id; }, counts.duplicates_in_batch);
  Transaction tx(db_);
  Statement upsert(db_, std::string("INSERT OR REPLACE INTO events(") + kEventColumns + ") VALUES (" +
                            placeholders(kEventColumnCount) + ")");
  for (const auto* e : rows) {
    const auto existing = get_event(e->global_event_id);
    if (existing) {
      // Later publication wins; an older re-publication leaves the row alone.
      if (*existing == *e || existing->date_added > e->date_added) {
        ++counts.unchanged;
        continue;
      }
      ++counts.updated;
    } else {
      ++counts.inserted;
    }
    upsert.reset();
    bind_event(upsert, *e);
    upsert.run();
  }
  tx.commit();
  return counts;
}

UpsertCounts Store::upsert_mentions(std::span<const MentionRecord> batch) {
  std::lock_guard lock(*mutex_);
  UpsertCounts counts;
  if (batch.empty()) return counts;
  const auto rows = last_per_key(
      batch, [](const MentionRecord& m) { return std::pair{m.global_event_id, m.mention_identifier}; },
      counts.duplicates_in_batch);
  Transaction tx(db_);
  Statement find(db_, std::string("SELECT ") + kMentionColumns +
                          " FROM mentions WHERE global_event_id=? AND mention_identifier=?");
  Statement upsert(db_, std::string("INSERT OR REPLACE INTO mentions(") + kMentionColumns + ") VALUES (" +
                            placeholders(9) + ")");
  for (const auto* m : rows) {
    find.reset();
    find.bind(1, m->global_event_id).bind(2, std::string_view{m->mention_identifier});
    if (find.step()) {
      if (read_mention(find) == *m) {
        ++counts.unchanged;
        continue;
      }
      ++counts.updated;
    } else {
      ++counts.inserted;
    }
    upsert.reset();
    bind_mention(upsert, *m);
    upsert.run();
  }
  tx.commit();
  return counts;
}

UpsertCounts Store::upsert_gkg(std::span<const GkgRecord> batch) {
  std::lock_guard lock(*mutex_);
  UpsertCounts counts;
  if (batch.empty()) return counts;
  const auto rows =
      last_per_key(batch, [](const GkgRecord& g) { return g.gkg_record_id; }, counts.duplicates_in_batch);
  Transaction tx(db_);
  Statement find(db_, std::string("SELECT ") + kGkgColumns + " FROM gkg WHERE gkg_record_id=?");
  Statement upsert(db_,
                   std::string("INSERT OR REPLACE INTO gkg(") + kGkgColumns + ") VALUES (" + placeholders(7) + ")");
  for (const auto* g : rows) {
    find.reset();
    find.bind(1, std::string_view{g->gkg_record_id});
    if (find.step()) {
      if (read_gkg(find) == *g) {
        ++counts.unchanged;
        continue;
      }
      ++counts.updated;
    } else {
      ++counts.inserted;
    }
    upsert.reset();
    bind_gkg(upsert, *g);
    upsert.run();
  }
  tx.commit();
  return counts;
}

std::optional<EventRecord> Store::get_event(std::int64_t global_event_id) const {
  std::lock_guard lock(*mutex_);
  Statement s(db_, std::string("SELECT ") + kEventColumns + " FROM events WHERE global_event_id=?");
  s.bind(1, global_event_id);
  if (!s.step()) return std::nullopt;
  return read_event(s);
}

std::vector<MentionRecord> Store::mentions_for(std::int64_t global_event_id) const {
  Statement s(db_, std::string("SELECT ") + kMentionColumns +
                       " FROM mentions WHERE global_event_id=? ORDER BY mention_identifier");
  s.bind(1, global_event_id);
  std::vector<MentionRecord> out;
  while (s.step()) out.push_back(read_mention(s));
  return out;
}

std::vector<GkgRecord> Store::documents_for(const std::vector<MentionRecord>& mentions) const {
  std::set<std::string> identifiers;
  for (const auto& m : mentions) identifiers.insert(m.mention_identifier);
  std::map<std::string, GkgRecord> by_id;
  Statement s(db_, std::string("SELECT ") + kGkgColumns + " FROM gkg WHERE document_identifier=?");
  for (const auto& id : identifiers) {
    s.reset();
    s.bind(1, std::string_view{id});
    while (s.step()) {
      auto g = read_gkg(s);
      by_id.emplace(g.gkg_record_id, std::move(g));
    }
  }
  std::vector<GkgRecord> out;
  out.reserve(by_id.size());
  for (auto& [id, g] : by_id) out.push_back(std::move(g));
  return out;
}

std::optional<EventWithContext> Store::get_event_with_context(std::int64_t global_event_id) const {
  std::lock_guard lock(*mutex_);
  auto event = get_event(global_event_id);
  if (!event) return std::nullopt;
  EventWithContext ctx;
  ctx.event = std::move(*event);
  ctx.mentions = mentions_for(global_event_id);
  ctx.documents = documents_for(ctx.mentions);
  return ctx;
}

std::vector<EventWithContext> Store::scan_impl(const query::QueryCriteria& criteria, std::size_t offset,
                                               std::optional<std::size_t> limit) const {
  criteria.validate();
  std::lock_guard lock(*mutex_);

  // Push the cheap clauses into SQL; matches() below stays the source of truth.
  std::string sql = std::string("SELECT ") + kEventColumns + " FROM events WHERE 1=1";
  std::vector<std::string> text_args;
  std::vector<std::int64_t> day_args;
  if (criteria.date_range) sql += " AND day BETWEEN ? AND ?";
  if (criteria.actor2_refugee) {
    if (criteria.refugee_mode == cameo::RefugeeMode::exact) {
      sql += " AND a2_code = 'REF'";
    } else {
      sql += " AND (a2_code = 'REF' OR a2_type1 = 'REF' OR a2_type2 = 'REF' OR a2_type3 = 'REF')";
    }
  }
  if (criteria.event_root_codes) {
    sql += " AND event_root_code IN (" + placeholders(criteria.event_root_codes->size()) + ")";
  }
  if (criteria.actor1_country) {
    sql += " AND a1_country IN (" + placeholders(criteria.actor1_country->size()) + ")";
  }
  sql += " ORDER BY day, global_event_id";

  Statement s(db_, sql);
  int i = 1;
  if (criteria.date_range) {
    s.bind(i++, criteria.date_range->start.yyyymmdd());
    s.bind(i++, criteria.date_range->end.yyyymmdd());
  }
  if (criteria.event_root_codes) {
    for (const auto& c : *criteria.event_root_codes) s.bind(i++, std::string_view{c});
  }
  if (criteria.actor1_country) {
    for (const auto& c : *criteria.actor1_country) s.bind(i++, std::string_view{c});
  }

  std::vector<EventWithContext> out;
  std::size_t skipped = 0;
  while (s.step()) {
    if (limit && out.size() >= *limit) break;
    EventWithContext ctx;
    ctx.event = read_event(s);
    ctx.mentions = mentions_for(ctx.event.global_event_id);
    ctx.documents = documents_for(ctx.mentions);
    if (!query::matches(criteria, ctx)) continue;
    if (skipped < offset) {
      ++skipped;
      continue;
    }
    out.push_back(std::move(ctx));
  }
  return out;
}

std::vector<EventWithContext> Store::scan(const query::QueryCriteria& criteria) const {
  return scan_impl(criteria, 0, std::nullopt);
}

std::vector<EventWithContext> Store::scan_page(const query::QueryCriteria& criteria, std::size_t offset,
                                               std::size_t limit) const {
  return scan_impl(criteria, offset, limit);
}

std::vector<EventRecord> Store::all_events() const {
  std::lock_guard lock(*mutex_);
  Statement s(db_, std::string("SELECT ") + kEventColumns + " FROM events ORDER BY day, global_event_id");
  std::vector<EventRecord> out;
  while (s.step()) out.push_back(read_event(s));
  return out;
}

std::vector<MentionRecord> Store::all_mentions() const {
  std::lock_guard lock(*mutex_);
  Statement s(db_, std::string("SELECT ") + kMentionColumns +
                       " FROM mentions ORDER BY global_event_id, mention_identifier");
  std::vector<MentionRecord> out;
  while (s.step()) out.push_back(read_mention(s));
  return out;
}

std::vector<GkgRecord> Store::all_gkg() const {
  std::lock_guard lock(*mutex_);
  Statement s(db_, std::string("SELECT ") + kGkgColumns + " FROM gkg ORDER BY gkg_record_id");
  std::vector<GkgRecord> out;
  while (s.step()) out.push_back(read_gkg(s));
  return out;
}

std::vector<MentionRecord> Store::orphan_mentions() const {
  std::lock_guard lock(*mutex_);
  Statement s(db_,
              "SELECT m.global_event_id, m.mention_identifier, m.event_time, m.mention_time, m.mention_type, "
              "m.source_name, m.sentence_id, m.confidence, m.doc_tone FROM mentions m "
              "LEFT JOIN events e ON e.global_event_id = m.global_event_id WHERE e.global_event_id IS NULL "
              "ORDER BY m.global_event_id, m.mention_identifier");
  std::vector<MentionRecord> out;
  while (s.step()) out.push_back(read_mention(s));
  return out;
}

TableCounts Store::counts() const {
  std::lock_guard lock(*mutex_);
  auto count = [this](const char* sql) {
    Statement s(db_, sql);
    s.step();
    return s.i64(0);
  };
  return TableCounts{count("SELECT count(*) FROM events"), count("SELECT count(*) FROM mentions"),
                     count("SELECT count(*) FROM gkg")};
}

void Store::record_ingested_file(const IngestedFile& f) {
  std::lock_guard lock(*mutex_);
  Statement s(db_,
              "INSERT OR REPLACE INTO ingest_files(name, kind, rows_total, rows_ok, rows_skipped, inserted, updated, "
              "ingested_at) VALUES (?,?,?,?,?,?,?,?)");
  s.bind(1, std::string_view{f.name})
      .bind(2, std::string_view{f.kind})
      .bind(3, f.rows_total)
      .bind(4, f.rows_ok)
      .bind(5, f.rows_skipped)
      .bind(6, f.inserted)
      .bind(7, f.updated)
      .bind(8, f.ingested_at.yyyymmddhhmmss())
      .run();
}

void Store::set_last_poll(Timestamp t) {
  std::lock_guard lock(*mutex_);
  Statement s(db_, "INSERT OR REPLACE INTO meta(key, value) VALUES ('last_poll', ?)");
  s.bind(1, std::string_view{std::to_string(t.yyyymmddhhmmss())}).run();
}

IngestStatus Store::ingest_status() const {
  std::lock_guard lock(*mutex_);
  IngestStatus status;
  {
    Statement s(db_, "SELECT value FROM meta WHERE key='last_poll'");
    if (s.step()) status.last_poll = Timestamp::parse(s.text(0));
  }
  Statement s(db_,
              "SELECT name, kind, rows_total, rows_ok, rows_skipped, inserted, updated, ingested_at FROM ingest_files "
              "ORDER BY name");
  while (s.step()) {
    status.files.push_back(IngestedFile{s.text(0), s.text(1), s.i64(2), s.i64(3), s.i64(4), s.i64(5), s.i64(6),
                                        timestamp_from(s.i64(7))});
  }
  status.file_count = static_cast<std::int64_t>(status.files.size());
  status.rows = counts();
  return status;
}

void Store::save_volume(const std::string& query, std::span<const StoredVolumePoint> points) {
  std::lock_guard lock(*mutex_);
  Transaction tx(db_);
  Statement s(db_, "INSERT OR REPLACE INTO doc_volume(query, date, matched, total) VALUES (?,?,?,?)");
  for (const auto& p : points) {
    s.reset();
    s.bind(1, std::string_view{query}).bind(2, p.date.yyyymmdd()).bind(3, p.matched).bind(4, p.total).run();
  }
  tx.commit();
}

std::vector<StoredVolumePoint> Store::volume(const std::string& query) const {
  std::lock_guard lock(*mutex_);
  Statement s(db_, "SELECT date, matched, total FROM doc_volume WHERE query=? ORDER BY date");
  s.bind(1, std::string_view{query});
  std::vector<StoredVolumePoint> out;
  while (s.step()) out.push_back(StoredVolumePoint{date_from(s.i64(0)), s.i64(1), s.i64(2)});
  return out;
}

}  // namespace xenomon::store
