#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "xenomon/analytics.hpp"
#include "xenomon/records.hpp"
#include "xenomon/store.hpp"

// JSON and CSV encodings shared by the HTTP API and the CLI. Dates are
// ISO-8601; JSON key order is fixed so output is byte-stable.
namespace xenomon::serialize {

using Json = nlohmann::ordered_json;

Json to_json(const ActorRef& actor);
Json to_json(const EventRecord& event);
Json to_json(const MentionRecord& mention);
Json to_json(const GkgRecord& document);
Json to_json(const EventWithContext& ctx);
Json to_json(const analytics::TimelineSeries& series);
Json to_json(const analytics::ToneSeries& series);
Json to_json(const analytics::CountryFrequency& freq);
Json to_json(const analytics::Choropleth& map);
Json to_json(const analytics::SpikeReport& report);
Json to_json(const store::IngestStatus& status);
Json to_json(const ParseDiagnostics& diagnostics);

// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

// RFC 4180: fields holding a comma, quote, CR or LF are quoted, quotes doubled.
std::string csv_field(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

std::string to_csv(const analytics::TimelineSeries& series);
std::string to_csv(const analytics::ToneSeries& series);
std::string to_csv(const analytics::CountryFrequency& freq);
std::string to_csv(const analytics::Choropleth& map);
std::string to_csv(const analytics::SpikeReport& report);

// Frozen column order for event exports.
extern const std::vector<std::string> kEventCsvColumns;
std::string events_to_csv(std::span<const EventWithContext> contexts);

}  // namespace xenomon::serialize
