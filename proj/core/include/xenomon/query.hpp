#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "xenomon/cameo.hpp"
#include "xenomon/date.hpp"
#include "xenomon/records.hpp"

namespace xenomon::query {

enum class ThemeMode { exact_set, prefix };

std::string_view to_string(ThemeMode mode);
std::optional<ThemeMode> theme_mode_from_string(std::string_view text);

// Matches V2Themes tokens by exact equality or by prefix. Case-sensitive.
struct ThemeMatcher {
  ThemeMode mode = ThemeMode::exact_set;
  std::set<std::string, std::less<>> tokens;

  bool matches(std::string_view theme) const;
  bool matches_any(const std::vector<GkgRecord>& documents) const;

  friend bool operator==(const ThemeMatcher&, const ThemeMatcher&) = default;
};

// The eight refugee-related discrimination themes, in publication order.
inline constexpr std::array<std::string_view, 8> kRefugeeThemes = {
    "DISCRIMINATION_IMMIGRATION_XENOPHOBIA",
    "DISCRIMINATION_IMMIGRATION_ANTIIMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_OPPOSED_TO_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_AGAINST_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_ATTACKS_ON_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_ATTACKS_AGAINST_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_XENOPHOBE",
    "DISCRIMINATION_IMMIGRATION_XENOPHOBES",
};
inline constexpr std::string_view kRefugeeThemePrefix = "DISCRIMINATION_IMMIGRATION";

using CodeSet = std::set<std::string, std::less<>>;

// Conjunction of optional clauses over an EventWithContext.
struct QueryCriteria {
  bool actor2_refugee = false;
  cameo::RefugeeMode refugee_mode = cameo::RefugeeMode::exact;
  std::optional<ThemeMatcher> themes;
  std::optional<DateRange> date_range;  // on EventRecord::day, inclusive
  std::optional<CodeSet> event_root_codes;
  std::optional<CodeSet> actor1_country;

  // Throws DateRangeError for an inverted range and ValidationError for
  // empty or lowercase theme tokens.
  void validate() const;

  friend bool operator==(const QueryCriteria&, const QueryCriteria&) = default;
};

// Events whose Actor2Code is REF.
QueryCriteria criteria1();
// criteria1 plus a refugee-theme clause on the linked GKG documents.
QueryCriteria criteria2(ThemeMode mode = ThemeMode::exact_set);

// Theme clause holds when ANY linked document carries ANY matching theme.
bool matches(const QueryCriteria& criteria, const EventWithContext& ctx);

// JSON form used by the HTTP API and the CLI.
nlohmann::ordered_json to_json(const QueryCriteria& criteria);
QueryCriteria criteria_from_json(const nlohmann::json& j);

using QueryParams = std::vector<std::pair<std::string, std::string>>;

// Query-string form. `criteria` may be a preset ("1", "2") or a JSON object;
// the remaining keys override individual clauses:
//   refugee_mode, theme_mode, themes, from, to, roots, actor1_country, actor2_refugee
QueryParams to_query_params(const QueryCriteria& criteria);
QueryCriteria criteria_from_query_params(const QueryParams& params);

std::string url_encode(std::string_view text);
std::string to_query_string(const QueryParams& params);

// Splits "01,14" into {"01","14"}; blanks dropped.
CodeSet split_codes(std::string_view text);

}  // namespace xenomon::query
