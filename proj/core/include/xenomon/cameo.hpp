#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xenomon/records.hpp"

namespace xenomon::cameo {

// Label rendered for codes absent from the shipped tables.
inline constexpr std::string_view kUnknown = "Unknown";

struct CountryInfo {
  std::string name;
  std::string iso_alpha2;  // empty for CAMEO regional codes (e.g. "EUR")
  std::string iso_alpha3;

  friend bool operator==(const CountryInfo&, const CountryInfo&) = default;
};

// Immutable CAMEO lookup tables. Lookups return nullopt for unknown codes.
class CameoTables {
 public:
  // Tables compiled into the library from data/cameo/*.tsv.
  static const CameoTables& builtin();
  // Loads eventcodes.tsv, countries.tsv and actortypes.tsv from `dir`.
  static CameoTables load(const std::filesystem::path& dir);
  // Builds tables from the text of the three files. Throws FormatError on bad rows.
  static CameoTables from_text(std::string_view event_codes, std::string_view countries,
                               std::string_view actor_types);

  std::optional<std::string_view> describe_event(std::string_view code) const;
  std::optional<std::string_view> describe_event_root(std::string_view root_code) const;
  std::optional<std::string_view> country_name(std::string_view code) const;
  const CountryInfo* country(std::string_view code) const;
  std::optional<std::string_view> actor_type(std::string_view code) const;

  // Root codes "01".."20" with descriptions, in code order.
  std::vector<std::pair<std::string, std::string>> event_roots() const;

  const std::map<std::string, std::string, std::less<>>& event_descriptions() const { return events_; }
  const std::map<std::string, CountryInfo, std::less<>>& countries() const { return countries_; }
  const std::map<std::string, std::string, std::less<>>& actor_types() const { return actor_types_; }

 private:
  std::map<std::string, std::string, std::less<>> events_;
  std::map<std::string, CountryInfo, std::less<>> countries_;
  std::map<std::string, std::string, std::less<>> actor_types_;
};

// Lookup result or kUnknown.
inline std::string_view label_or_unknown(std::optional<std::string_view> label) {
  return label.value_or(kUnknown);
}

enum class RefugeeMode { exact, contains_type };

std::string_view to_string(RefugeeMode mode);
std::optional<RefugeeMode> refugee_mode_from_string(std::string_view text);

inline constexpr std::string_view kRefugeeCode = "REF";

// exact: actor code is "REF". contains_type: code is "REF" or any type code is "REF".
bool is_refugee_actor(const std::optional<ActorRef>& actor, RefugeeMode mode = RefugeeMode::exact);

}  // namespace xenomon::cameo
