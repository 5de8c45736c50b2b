#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xenomon/records.hpp"

namespace xenomon::formats {

// Column positions from the GDELT 2.0 Event codebook (61 columns).
struct EventLayout {
  static constexpr std::size_t kGlobalEventId = 0;
  static constexpr std::size_t kDay = 1;
  static constexpr std::size_t kMonthYear = 2;
  static constexpr std::size_t kYear = 3;
  static constexpr std::size_t kFractionDate = 4;
  // Actor groups are 10 columns wide starting here.
  static constexpr std::size_t kActor1 = 5;
  static constexpr std::size_t kActor2 = 15;
  static constexpr std::size_t kActorCode = 0;
  static constexpr std::size_t kActorName = 1;
  static constexpr std::size_t kActorCountryCode = 2;
  static constexpr std::size_t kActorType1Code = 7;
  static constexpr std::size_t kIsRootEvent = 25;
  static constexpr std::size_t kEventCode = 26;
  static constexpr std::size_t kEventBaseCode = 27;
  static constexpr std::size_t kEventRootCode = 28;
  static constexpr std::size_t kQuadClass = 29;
  static constexpr std::size_t kGoldsteinScale = 30;
  static constexpr std::size_t kNumMentions = 31;
  static constexpr std::size_t kNumSources = 32;
  static constexpr std::size_t kNumArticles = 33;
  static constexpr std::size_t kAvgTone = 34;
  // Geo groups are 8 columns wide: Type, FullName, CountryCode, ADM1, ADM2, Lat, Long, FeatureID.
  static constexpr std::size_t kActor1Geo = 35;
  static constexpr std::size_t kActor2Geo = 43;
  static constexpr std::size_t kActionGeo = 51;
  static constexpr std::size_t kGeoFullName = 1;
  static constexpr std::size_t kGeoCountryCode = 2;
  static constexpr std::size_t kGeoLat = 5;
  static constexpr std::size_t kGeoLong = 6;
  static constexpr std::size_t kDateAdded = 59;
  static constexpr std::size_t kSourceUrl = 60;
  static constexpr std::size_t kColumnCount = 61;
};

// GDELT 2.0 Mentions codebook (16 columns).
struct MentionLayout {
  static constexpr std::size_t kGlobalEventId = 0;
  static constexpr std::size_t kEventTime = 1;
  static constexpr std::size_t kMentionTime = 2;
  static constexpr std::size_t kMentionType = 3;
  static constexpr std::size_t kMentionSourceName = 4;
  static constexpr std::size_t kMentionIdentifier = 5;
  static constexpr std::size_t kSentenceId = 6;
  static constexpr std::size_t kConfidence = 11;
  static constexpr std::size_t kMentionDocTone = 13;
  static constexpr std::size_t kColumnCount = 16;
};

// GKG 2.1 codebook (27 columns). Only V2 variants are read.
struct GkgLayout {
  static constexpr std::size_t kRecordId = 0;
  static constexpr std::size_t kDate = 1;
  static constexpr std::size_t kDocumentIdentifier = 4;
  static constexpr std::size_t kV2Themes = 8;
  static constexpr std::size_t kV2Locations = 10;
  static constexpr std::size_t kV15Tone = 15;
  static constexpr std::size_t kV2Gcam = 17;
  static constexpr std::size_t kColumnCount = 27;
};

// Parsers read one record per line. Malformed lines are skipped and counted.
// Throws IoError for an unreadable stream and FormatError when a non-empty
// input yields no parseable row.
ParseResult<EventRecord> parse_events(std::istream& in);
ParseResult<EventRecord> parse_events(std::string_view text);
ParseResult<MentionRecord> parse_mentions(std::istream& in);
ParseResult<MentionRecord> parse_mentions(std::string_view text);
ParseResult<GkgRecord> parse_gkg(std::istream& in);
ParseResult<GkgRecord> parse_gkg(std::string_view text);

// "THEME,offset;THEME,offset;" -> hits. Entries without a comma get offset 0.
std::vector<ThemeHit> parse_v2themes(std::string_view raw);
std::string render_v2themes(std::span<const ThemeHit> hits);

// V1.5Tone cell "tone,positive,negative,polarity[,extra...]". parse_tone_cell
// returns nullopt for an empty cell and throws FormatError for a malformed one.
std::optional<ToneTuple> parse_tone_cell(std::string_view cell);
std::string render_tone(const ToneTuple& tone);

// Writers emit a full codebook-width line without the trailing newline.
// Columns the record does not model are left empty.
std::string format_event_line(const EventRecord& record);
std::string format_mention_line(const MentionRecord& record);
std::string format_gkg_line(const GkgRecord& record);

// Shortest decimal text that reads back to the same double.
std::string format_real(double value);

// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view text);

enum class FileKind { events, mentions, gkg };

std::string_view to_string(FileKind kind);
// Infers the table from a GDELT file name ("...export.CSV.zip", "...mentions.CSV.zip",
// "...gkg.csv.zip", with or without .zip). Case-insensitive.
std::optional<FileKind> kind_from_filename(std::string_view name);

// Single-member zip archive -> member bytes. Throws FormatError for corrupt or
// multi-member archives.
std::string open_export_container(std::span<const std::byte> archive);
std::string open_export_container(std::string_view archive);

// Builds a single-member deflate zip archive.
std::string write_export_container(std::string_view member_name, std::string_view contents);

// Reads a GDELT export file from disk, unwrapping the zip container when the
// file starts with a zip signature.
std::string read_export_file(const std::filesystem::path& path);

}  // namespace xenomon::formats
