#include "xenomon/formats.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "xenomon/error.hpp"

namespace xenomon::formats {
namespace {

using Cells = std::vector<std::string_view>;

Cells split(std::string_view line, char sep) {
  Cells out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Row-level failure; caught per line and turned into a diagnostic.
struct RowReject {
  std::string reason;
};

[[noreturn]] void reject(std::string reason) { throw RowReject{std::move(reason)}; }

std::int64_t parse_int(std::string_view cell, std::string_view field) {
  std::int64_t v = 0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc{} || ptr != end) {
    reject(std::string(field) + ": not an integer '" + std::string(cell) + "'");
  }
  return v;
}

double parse_double(std::string_view cell, std::string_view field) {
  double v = 0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    reject(std::string(field) + ": not a number '" + std::string(cell) + "'");
  }
  return v;
}

std::optional<double> parse_optional_double(std::string_view cell, std::string_view field) {
  if (cell.empty()) return std::nullopt;
  return parse_double(cell, field);
}

std::optional<std::string> optional_text(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  return std::string(cell);
}

Timestamp parse_timestamp(std::string_view cell, std::string_view field) {
  const auto ts = Timestamp::from_yyyymmddhhmmss(parse_int(cell, field));
  if (!ts || cell.size() != 14) reject(std::string(field) + ": invalid timestamp '" + std::string(cell) + "'");
  return *ts;
}

bool is_code_token(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || (c >= 'A' && c <= 'Z');
  });
}

std::optional<ActorRef> parse_actor(const Cells& cells, std::size_t base) {
  using L = EventLayout;
  const auto code = cells[base + L::kActorCode];
  const auto name = cells[base + L::kActorName];
  const auto country = cells[base + L::kActorCountryCode];
  std::vector<std::string> types;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto t = cells[base + L::kActorType1Code + i];
    if (t.empty()) continue;
    if (!is_code_token(t)) reject("actor type code not uppercase alphanumeric '" + std::string(t) + "'");
    types.emplace_back(t);
  }
  if (code.empty() && name.empty() && country.empty() && types.empty()) return std::nullopt;
  if (!code.empty() && !is_code_token(code)) {
    reject("actor code not uppercase alphanumeric '" + std::string(code) + "'");
  }
  return ActorRef{std::string(code), optional_text(name), optional_text(country), std::move(types)};
}

std::optional<GeoPoint> parse_geo(const Cells& cells, std::size_t base) {
  using L = EventLayout;
  GeoPoint geo;
  geo.full_name = optional_text(cells[base + L::kGeoFullName]);
  geo.country_code = optional_text(cells[base + L::kGeoCountryCode]);
  geo.latitude = parse_optional_double(cells[base + L::kGeoLat], "ActionGeo_Lat");
  geo.longitude = parse_optional_double(cells[base + L::kGeoLong], "ActionGeo_Long");
  if (!geo.full_name && !geo.country_code && !geo.latitude && !geo.longitude) return std::nullopt;
  if (geo.latitude && (*geo.latitude < -90.0 || *geo.latitude > 90.0)) reject("latitude out of range");
  if (geo.longitude && (*geo.longitude < -180.0 || *geo.longitude > 180.0)) reject("longitude out of range");
  return geo;
}

void require_columns(const Cells& cells, std::size_t expected) {
  if (cells.size() != expected) {
    reject("expected " + std::to_string(expected) + " columns, found " + std::to_string(cells.size()));
  }
}

EventRecord parse_event_cells(const Cells& c) {
  using L = EventLayout;
  require_columns(c, L::kColumnCount);
  EventRecord r;
  r.global_event_id = parse_int(c[L::kGlobalEventId], "GLOBALEVENTID");
  if (r.global_event_id < 0) reject("GLOBALEVENTID negative");
  const auto day = Date::from_yyyymmdd(parse_int(c[L::kDay], "SQLDATE"));
  if (!day || c[L::kDay].size() != 8) reject("SQLDATE: invalid date '" + std::string(c[L::kDay]) + "'");
  r.day = *day;
  r.actor1 = parse_actor(c, L::kActor1);
  r.actor2 = parse_actor(c, L::kActor2);

  const auto root_flag = c[L::kIsRootEvent];
  if (root_flag != "0" && root_flag != "1") reject("IsRootEvent must be 0 or 1");
  r.is_root_event = root_flag == "1";

  const auto code = c[L::kEventCode];
  if (code.size() < 3 || code.size() > 4 ||
      !std::all_of(code.begin(), code.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
    reject("EventCode must be 3-4 digits, got '" + std::string(code) + "'");
  }
  r.event_code = std::string(code);
  r.event_root_code = r.event_code.substr(0, 2);
  if (!c[L::kEventRootCode].empty() && c[L::kEventRootCode] != r.event_root_code) {
    reject("EventRootCode '" + std::string(c[L::kEventRootCode]) + "' disagrees with EventCode");
  }
  r.event_base_code = c[L::kEventBaseCode].empty() ? r.event_code.substr(0, 3) : std::string(c[L::kEventBaseCode]);

  const auto quad = parse_int(c[L::kQuadClass], "QuadClass");
  if (quad < 1 || quad > 4) reject("QuadClass out of range");
  r.quad_class = static_cast<int>(quad);
  r.goldstein_scale = parse_double(c[L::kGoldsteinScale], "GoldsteinScale");
  if (r.goldstein_scale < -10.0 || r.goldstein_scale > 10.0) reject("GoldsteinScale out of range");
  r.num_mentions = parse_int(c[L::kNumMentions], "NumMentions");
  r.num_sources = parse_int(c[L::kNumSources], "NumSources");
  r.num_articles = parse_int(c[L::kNumArticles], "NumArticles");
  if (r.num_mentions < 0 || r.num_sources < 0 || r.num_articles < 0) reject("negative count");
  r.avg_tone = parse_double(c[L::kAvgTone], "AvgTone");
  r.action_geo = parse_geo(c, L::kActionGeo);
  r.date_added = parse_timestamp(c[L::kDateAdded], "DATEADDED");
  r.source_url = std::string(c[L::kSourceUrl]);
  return r;
}

MentionRecord parse_mention_cells(const Cells& c) {
  using L = MentionLayout;
  require_columns(c, L::kColumnCount);
  MentionRecord r;
  r.global_event_id = parse_int(c[L::kGlobalEventId], "GLOBALEVENTID");
  if (r.global_event_id < 0) reject("GLOBALEVENTID negative");
  r.event_time = parse_timestamp(c[L::kEventTime], "EventTimeDate");
  r.mention_time = parse_timestamp(c[L::kMentionTime], "MentionTimeDate");
  r.mention_type = static_cast<int>(parse_int(c[L::kMentionType], "MentionType"));
  r.mention_source_name = std::string(c[L::kMentionSourceName]);
  r.mention_identifier = std::string(c[L::kMentionIdentifier]);
  if (r.mention_identifier.empty()) reject("MentionIdentifier empty");
  r.sentence_id = static_cast<int>(parse_int(c[L::kSentenceId], "SentenceID"));
  const auto confidence = parse_int(c[L::kConfidence], "Confidence");
  if (confidence < 0 || confidence > 100) reject("Confidence outside 0-100");
  r.confidence = static_cast<int>(confidence);
  r.mention_doc_tone = parse_double(c[L::kMentionDocTone], "MentionDocTone");
  return r;
}

std::optional<ToneTuple> parse_tone(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  const auto parts = split(cell, ',');
  if (parts.size() < 4) reject("V1.5Tone needs at least 4 values");
  ToneTuple t;
  t.tone = parse_double(parts[0], "Tone");
  t.positive = parse_double(parts[1], "PositiveScore");
  t.negative = parse_double(parts[2], "NegativeScore");
  t.polarity = parse_double(parts[3], "Polarity");
  for (std::size_t i = 4; i < parts.size(); ++i) t.extra.push_back(parse_double(parts[i], "Tone"));
  return t;
}

GkgRecord parse_gkg_cells(const Cells& c) {
  using L = GkgLayout;
  require_columns(c, L::kColumnCount);
  GkgRecord r;
  r.gkg_record_id = std::string(c[L::kRecordId]);
  if (r.gkg_record_id.empty()) reject("GKGRECORDID empty");
  r.date = parse_timestamp(c[L::kDate], "V2.1DATE");
  r.document_identifier = std::string(c[L::kDocumentIdentifier]);
  if (r.document_identifier.empty()) reject("DocumentIdentifier empty");
  r.themes = parse_v2themes(c[L::kV2Themes]);
  r.v2_tone = parse_tone(c[L::kV15Tone]);
  r.locations_raw = std::string(c[L::kV2Locations]);
  r.gcam_raw = std::string(c[L::kV2Gcam]);
  return r;
}

template <class Record, class RowParser>
ParseResult<Record> parse_lines(std::istream& in, RowParser parse_row) {
  if (!in.good() && !in.eof()) throw IoError("input stream is not readable");
  ParseResult<Record> result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // blank lines are not rows
    const std::string clean = sanitize_utf8(line);
    try {
      result.records.push_back(parse_row(split(clean, '\t')));
      result.diagnostics.record_ok();
    } catch (const RowReject& e) {
      result.diagnostics.record_skip(line_no, e.reason);
    }
  }
  if (in.bad()) throw IoError("read error after line " + std::to_string(line_no));
  const auto& d = result.diagnostics;
  if (d.rows_total > 0 && d.rows_ok == 0) {
    throw FormatError("no parseable rows in " + std::to_string(d.rows_total) + " lines; first error at line " +
                      std::to_string(d.first_errors.front().line) + ": " + d.first_errors.front().reason);
  }
  return result;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += '\t';
    out += cells[i];
  }
  return out;
}

void write_actor(std::vector<std::string>& cells, std::size_t base, const std::optional<ActorRef>& actor) {
  if (!actor) return;
  using L = EventLayout;
  cells[base + L::kActorCode] = actor->code;
  cells[base + L::kActorName] = actor->name.value_or("");
  cells[base + L::kActorCountryCode] = actor->country_code.value_or("");
  for (std::size_t i = 0; i < actor->type_codes.size() && i < 3; ++i) {
    cells[base + L::kActorType1Code + i] = actor->type_codes[i];
  }
}

}  // namespace

ParseResult<EventRecord> parse_events(std::istream& in) {
  return parse_lines<EventRecord>(in, parse_event_cells);
}
ParseResult<EventRecord> parse_events(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_events(in);
}
ParseResult<MentionRecord> parse_mentions(std::istream& in) {
  return parse_lines<MentionRecord>(in, parse_mention_cells);
}
ParseResult<MentionRecord> parse_mentions(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_mentions(in);
}
ParseResult<GkgRecord> parse_gkg(std::istream& in) { return parse_lines<GkgRecord>(in, parse_gkg_cells); }
ParseResult<GkgRecord> parse_gkg(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_gkg(in);
}

std::vector<ThemeHit> parse_v2themes(std::string_view raw) {
  std::vector<ThemeHit> hits;
  for (const auto entry : split(raw, ';')) {
    if (entry.empty()) continue;
    const auto comma = entry.rfind(',');
    ThemeHit hit;
    if (comma == std::string_view::npos) {
      hit.theme = std::string(entry);
    } else {
      hit.theme = std::string(entry.substr(0, comma));
      const auto digits = entry.substr(comma + 1);
      std::int64_t offset = 0;
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), offset);
      if (ec == std::errc{} && ptr == digits.data() + digits.size() && offset >= 0) hit.char_offset = offset;
    }
    if (!hit.theme.empty()) hits.push_back(std::move(hit));
  }
  return hits;
}

std::string render_v2themes(std::span<const ThemeHit> hits) {
  std::string out;
  for (const auto& h : hits) {
    out += h.theme;
    out += ',';
    out += std::to_string(h.char_offset);
    out += ';';
  }
  return out;
}

std::string format_real(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::optional<ToneTuple> parse_tone_cell(std::string_view cell) {
  try {
    return parse_tone(cell);
  } catch (const RowReject& e) {
    throw FormatError(e.reason);
  }
}

std::string render_tone(const ToneTuple& t) {
  std::string tone = format_real(t.tone) + "," + format_real(t.positive) + "," + format_real(t.negative) + "," +
                     format_real(t.polarity);
  for (double x : t.extra) tone += "," + format_real(x);
  return tone;
}

std::string format_event_line(const EventRecord& r) {
  using L = EventLayout;
  std::vector<std::string> c(L::kColumnCount);
  c[L::kGlobalEventId] = std::to_string(r.global_event_id);
  c[L::kDay] = std::to_string(r.day.yyyymmdd());
  c[L::kMonthYear] = std::to_string(r.day.year() * 100 + static_cast<int>(r.day.month()));
  c[L::kYear] = std::to_string(r.day.year());
  {
    char buf[32];
    const double fraction = r.day.year() + (r.day.month() * 30.0 + r.day.day()) / 365.0;
    std::snprintf(buf, sizeof buf, "%.4f", fraction);
    c[L::kFractionDate] = buf;
  }
  write_actor(c, L::kActor1, r.actor1);
  write_actor(c, L::kActor2, r.actor2);
  c[L::kIsRootEvent] = r.is_root_event ? "1" : "0";
  c[L::kEventCode] = r.event_code;
  c[L::kEventBaseCode] = r.event_base_code;
  c[L::kEventRootCode] = r.event_root_code;
  c[L::kQuadClass] = std::to_string(r.quad_class);
  c[L::kGoldsteinScale] = format_real(r.goldstein_scale);
  c[L::kNumMentions] = std::to_string(r.num_mentions);
  c[L::kNumSources] = std::to_string(r.num_sources);
  c[L::kNumArticles] = std::to_string(r.num_articles);
  c[L::kAvgTone] = format_real(r.avg_tone);
  if (r.action_geo) {
    const auto& g = *r.action_geo;
    c[L::kActionGeo + L::kGeoFullName] = g.full_name.value_or("");
    c[L::kActionGeo + L::kGeoCountryCode] = g.country_code.value_or("");
    if (g.latitude) c[L::kActionGeo + L::kGeoLat] = format_real(*g.latitude);
    if (g.longitude) c[L::kActionGeo + L::kGeoLong] = format_real(*g.longitude);
  }
  c[L::kDateAdded] = std::to_string(r.date_added.yyyymmddhhmmss());
  c[L::kSourceUrl] = r.source_url;
  return join(c);
}

std::string format_mention_line(const MentionRecord& r) {
  using L = MentionLayout;
  std::vector<std::string> c(L::kColumnCount);
  c[L::kGlobalEventId] = std::to_string(r.global_event_id);
  c[L::kEventTime] = std::to_string(r.event_time.yyyymmddhhmmss());
  c[L::kMentionTime] = std::to_string(r.mention_time.yyyymmddhhmmss());
  c[L::kMentionType] = std::to_string(r.mention_type);
  c[L::kMentionSourceName] = r.mention_source_name;
  c[L::kMentionIdentifier] = r.mention_identifier;
  c[L::kSentenceId] = std::to_string(r.sentence_id);
  c[L::kConfidence] = std::to_string(r.confidence);
  c[L::kMentionDocTone] = format_real(r.mention_doc_tone);
  return join(c);
}

std::string format_gkg_line(const GkgRecord& r) {
  using L = GkgLayout;
  std::vector<std::string> c(L::kColumnCount);
  c[L::kRecordId] = r.gkg_record_id;
  c[L::kDate] = std::to_string(r.date.yyyymmddhhmmss());
  c[L::kDocumentIdentifier] = r.document_identifier;
  c[L::kV2Themes] = render_v2themes(r.themes);
  c[L::kV2Locations] = r.locations_raw;
  if (r.v2_tone) c[L::kV15Tone] = render_tone(*r.v2_tone);
  c[L::kV2Gcam] = r.gcam_raw;
  return join(c);
}

std::string sanitize_utf8(std::string_view text) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  if (std::all_of(text.begin(), text.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; })) {
    return std::string(text);
  }
  std::string out;
  out.reserve(text.size());
  const auto* p = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char b = p[i];
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (b < 0x80) {
      out += static_cast<char>(b);
      ++i;
      continue;
    } else if ((b & 0xE0) == 0xC0) {
      len = 2;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
      cp = b & 0x07;
    }
    bool ok = len != 0 && i + len <= n;
    for (std::size_t k = 1; ok && k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) ok = false;
      else cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    // Reject overlong encodings, surrogates and values past U+10FFFF.
    if (ok) {
      static constexpr std::uint32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
      ok = cp >= kMin[len] && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
    }
    if (ok) {
      out.append(text.substr(i, len));
      i += len;
    } else {
      out += kReplacement;
      ++i;
    }
  }
  return out;
}

std::string_view to_string(FileKind kind) {
  switch (kind) {
    case FileKind::events:
      return "events";
    case FileKind::mentions:
      return "mentions";
    case FileKind::gkg:
      return "gkg";
  }
  return "unknown";
}

std::optional<FileKind> kind_from_filename(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (const auto slash = lower.find_last_of('/'); slash != std::string::npos) lower.erase(0, slash + 1);
  if (lower.ends_with(".zip")) lower.resize(lower.size() - 4);
  if (lower.ends_with(".export.csv")) return FileKind::events;
  if (lower.ends_with(".mentions.csv")) return FileKind::mentions;
  if (lower.ends_with(".gkg.csv")) return FileKind::gkg;
  return std::nullopt;
}

}  // namespace xenomon::formats
