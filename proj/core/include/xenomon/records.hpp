#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xenomon/date.hpp"

namespace xenomon {

// A coded actor as it appears in the Actor1*/Actor2* column groups.
struct ActorRef {
  std::string code;  // composite CAMEO code, e.g. "REF", "SYRREF"
  std::optional<std::string> name;
  std::optional<std::string> country_code;
  std::vector<std::string> type_codes;  // at most 3

  friend bool operator==(const ActorRef&, const ActorRef&) = default;
};

struct GeoPoint {
  std::optional<double> latitude;
  std::optional<double> longitude;
  std::optional<std::string> country_code;
  std::optional<std::string> full_name;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// One row of the GDELT 2.0 Events table.
struct EventRecord {
  std::int64_t global_event_id = 0;
  Date day;
  std::optional<ActorRef> actor1;
  std::optional<ActorRef> actor2;
  bool is_root_event = false;
  std::string event_code;       // 3-4 digit CAMEO action code
  std::string event_base_code;
  std::string event_root_code;  // always event_code.substr(0, 2)
  int quad_class = 1;
  double goldstein_scale = 0.0;
  std::int64_t num_mentions = 0;
  std::int64_t num_sources = 0;
  std::int64_t num_articles = 0;
  double avg_tone = 0.0;
  std::optional<GeoPoint> action_geo;
  Timestamp date_added;
  std::string source_url;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

// One row of the Mentions table: an appearance of an event in one document.
struct MentionRecord {
  std::int64_t global_event_id = 0;
  Timestamp event_time;
  Timestamp mention_time;
  int mention_type = 1;  // 1 web, 2 citation-only, 3 core, 4 dtic, 5 jstor, 6 non-textual
  std::string mention_source_name;
  std::string mention_identifier;
  int sentence_id = 0;
  int confidence = 0;  // 0-100
  double mention_doc_tone = 0.0;

  friend bool operator==(const MentionRecord&, const MentionRecord&) = default;
};

struct ThemeHit {
  std::string theme;
  std::int64_t char_offset = 0;

  friend bool operator==(const ThemeHit&, const ThemeHit&) = default;
};

// V1.5Tone cell. The first four values are named; GDELT appends reference
// densities and a word count, kept in `extra`.
struct ToneTuple {
  double tone = 0.0;
  double positive = 0.0;
  double negative = 0.0;
  double polarity = 0.0;
  std::vector<double> extra;

  friend bool operator==(const ToneTuple&, const ToneTuple&) = default;
};

// One row of the GKG 2.1 table.
struct GkgRecord {
  std::string gkg_record_id;
  Timestamp date;
  std::string document_identifier;
  std::vector<ThemeHit> themes;
  std::optional<ToneTuple> v2_tone;
  std::string locations_raw;
  std::string gcam_raw;

  friend bool operator==(const GkgRecord&, const GkgRecord&) = default;
};

struct RowError {
  std::size_t line = 0;  // 1-based
  std::string reason;

  friend bool operator==(const RowError&, const RowError&) = default;
};

struct ParseDiagnostics {
  static constexpr std::size_t kMaxErrors = 20;

  std::size_t rows_total = 0;
  std::size_t rows_ok = 0;
  std::size_t rows_skipped = 0;
  std::vector<RowError> first_errors;

  void record_ok() {
    ++rows_total;
    ++rows_ok;
  }
  void record_skip(std::size_t line, std::string reason) {
    ++rows_total;
    ++rows_skipped;
    if (first_errors.size() < kMaxErrors) first_errors.push_back({line, std::move(reason)});
  }
};

// An event with its mentions and the GKG documents those mentions point at.
// Every document matches at least one mention identifier.
struct EventWithContext {
  EventRecord event;
  std::vector<MentionRecord> mentions;  // ordered by mention_identifier
  std::vector<GkgRecord> documents;     // ordered by gkg_record_id

  friend bool operator==(const EventWithContext&, const EventWithContext&) = default;
};

template <class Record>
struct ParseResult {
  std::vector<Record> records;
  ParseDiagnostics diagnostics;
};

}  // namespace xenomon
