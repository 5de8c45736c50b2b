#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xenomon/date.hpp"
#include "xenomon/query.hpp"
#include "xenomon/records.hpp"

struct sqlite3;

namespace xenomon::store {

inline constexpr int kSchemaVersion = 1;

struct UpsertCounts {
  std::size_t inserted = 0;
  std::size_t updated = 0;
  std::size_t unchanged = 0;
  std::size_t duplicates_in_batch = 0;  // earlier rows replaced by a later row with the same key

  friend bool operator==(const UpsertCounts&, const UpsertCounts&) = default;
};

struct TableCounts {
  std::int64_t events = 0;
  std::int64_t mentions = 0;
  std::int64_t gkg = 0;
};

// One ingested export file.
struct IngestedFile {
  std::string name;
  std::string kind;
  std::int64_t rows_total = 0;
  std::int64_t rows_ok = 0;
  std::int64_t rows_skipped = 0;
  std::int64_t inserted = 0;
  std::int64_t updated = 0;
  Timestamp ingested_at;
};

struct IngestStatus {
  std::optional<Timestamp> last_poll;
  std::int64_t file_count = 0;
  TableCounts rows;
  std::vector<IngestedFile> files;  // ordered by name
};

// Matched/total article volume for a DOC API query, persisted for percent-of-total charts.
struct StoredVolumePoint {
  Date date;
  std::int64_t matched = 0;
  std::int64_t total = 0;
};

// Embedded SQLite store mirroring the Events 1-N Mentions, Mentions 1-0..1 GKG
// topology. Writes are batched transactions; the connection is shared behind a
// mutex, and WAL mode lets other processes read during ingestion.
class Store {
 public:
  // Opens or creates the database file. Throws IoError on failure and when the
  // file's schema version differs from kSchemaVersion.
  explicit Store(const std::filesystem::path& path);
  static Store in_memory();

  Store(Store&&) noexcept;
  Store& operator=(Store&&) noexcept;
  ~Store();

  // Idempotent by primary key. A re-published event replaces the stored row
  // unless the stored row has a later date_added.
  UpsertCounts upsert_events(std::span<const EventRecord> batch);
  UpsertCounts upsert_mentions(std::span<const MentionRecord> batch);
  UpsertCounts upsert_gkg(std::span<const GkgRecord> batch);

  std::optional<EventRecord> get_event(std::int64_t global_event_id) const;
  std::optional<EventWithContext> get_event_with_context(std::int64_t global_event_id) const;

  // Events passing `criteria`, each with full context, ordered by (day, global_event_id).
  std::vector<EventWithContext> scan(const query::QueryCriteria& criteria) const;
  // One page of scan() results; `offset` counts matching events.
  std::vector<EventWithContext> scan_page(const query::QueryCriteria& criteria, std::size_t offset,
                                          std::size_t limit) const;

  // Ordered by (day, global_event_id), like scan().
  std::vector<EventRecord> all_events() const;
  std::vector<MentionRecord> all_mentions() const;
  std::vector<GkgRecord> all_gkg() const;
  // Mentions whose event row has not arrived (yet).
  std::vector<MentionRecord> orphan_mentions() const;

  TableCounts counts() const;

  void record_ingested_file(const IngestedFile& file);
  void set_last_poll(Timestamp t);
  IngestStatus ingest_status() const;

  void save_volume(const std::string& query, std::span<const StoredVolumePoint> points);
  std::vector<StoredVolumePoint> volume(const std::string& query) const;

 private:
  Store() = default;
  void open(const std::string& uri);
  void migrate();
  std::vector<EventWithContext> scan_impl(const query::QueryCriteria& criteria, std::size_t offset,
                                          std::optional<std::size_t> limit) const;
  std::vector<MentionRecord> mentions_for(std::int64_t global_event_id) const;
  std::vector<GkgRecord> documents_for(const std::vector<MentionRecord>& mentions) const;

  sqlite3* db_ = nullptr;
  std::unique_ptr<std::recursive_mutex> mutex_ = std::make_unique<std::recursive_mutex>();
};

}  // namespace xenomon::store
