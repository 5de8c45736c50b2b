#include "xenomon/query.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "xenomon/error.hpp"

namespace xenomon::query {
namespace {

bool is_theme_token(std::string_view t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
  });
}

Date parse_date_param(std::string_view key, std::string_view value) {
  const auto d = Date::parse(value);
  if (!d) throw DateRangeError("invalid date for '" + std::string(key) + "': '" + std::string(value) + "'");
  return *d;
}

bool parse_bool_param(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw ValidationError("invalid boolean for '" + std::string(key) + "': '" + std::string(value) + "'");
}

std::optional<std::string> param(const QueryParams& params, std::string_view key) {
  std::optional<std::string> found;
  for (const auto& [k, v] : params) {
    if (k == key) found = v;
  }
  return found;
}

std::string join_codes(const CodeSet& codes) {
  std::string out;
  for (const auto& c : codes) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

CodeSet codes_from_json(const nlohmann::json& j, std::string_view field) {
  if (!j.is_array()) throw ValidationError(std::string(field) + " must be an array of strings");
  CodeSet out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ValidationError(std::string(field) + " must be an array of strings");
    out.insert(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string_view to_string(ThemeMode mode) { return mode == ThemeMode::exact_set ? "exact" : "prefix"; }

std::optional<ThemeMode> theme_mode_from_string(std::string_view text) {
  if (text == "exact" || text == "exact-set") return ThemeMode::exact_set;
  if (text == "prefix") return ThemeMode::prefix;
  return std::nullopt;
}

bool ThemeMatcher::matches(std::string_view theme) const {
  if (mode == ThemeMode::exact_set) return tokens.contains(theme);
  return std::any_of(tokens.begin(), tokens.end(),
                     [theme](const std::string& prefix) { return theme.starts_with(prefix); });
}

bool ThemeMatcher::matches_any(const std::vector<GkgRecord>& documents) const {
  for (const auto& doc : documents) {
    for (const auto& hit : doc.themes) {
      if (matches(hit.theme)) return true;
    }
  }
  return false;
}

void QueryCriteria::validate() const {
  if (date_range && date_range->end < date_range->start) {
    throw DateRangeError("date range start " + date_range->start.iso() + " is after end " + date_range->end.iso());
  }
  if (themes) {
    if (themes->tokens.empty()) throw ValidationError("theme matcher needs at least one token");
    for (const auto& t : themes->tokens) {
      if (!is_theme_token(t)) throw ValidationError("theme token must be uppercase: '" + t + "'");
    }
  }
}

QueryCriteria criteria1() {
  QueryCriteria c;
  c.actor2_refugee = true;
  c.refugee_mode = cameo::RefugeeMode::exact;
  return c;
}

QueryCriteria criteria2(ThemeMode mode) {
  QueryCriteria c = criteria1();
  ThemeMatcher m;
  m.mode = mode;
  if (mode == ThemeMode::exact_set) {
    m.tokens.insert(kRefugeeThemes.begin(), kRefugeeThemes.end());
  } else {
    m.tokens.insert(std::string(kRefugeeThemePrefix));
  }
  c.themes = std::move(m);
  return c;
}

bool matches(const QueryCriteria& criteria, const EventWithContext& ctx) {
  const auto& e = ctx.event;
  if (criteria.actor2_refugee && !cameo::is_refugee_actor(e.actor2, criteria.refugee_mode)) return false;
  if (criteria.date_range && !criteria.date_range->contains(e.day)) return false;
  if (criteria.event_root_codes && !criteria.event_root_codes->contains(e.event_root_code)) return false;
  if (criteria.actor1_country) {
    if (!e.actor1 || !e.actor1->country_code || !criteria.actor1_country->contains(*e.actor1->country_code)) {
      return false;
    }
  }
  if (criteria.themes && !criteria.themes->matches_any(ctx.documents)) return false;
  return true;
}

nlohmann::ordered_json to_json(const QueryCriteria& c) {
  nlohmann::ordered_json j;
  j["actor2_refugee"] = c.actor2_refugee;
  j["refugee_mode"] = cameo::to_string(c.refugee_mode);
  if (c.themes) {
    j["themes"] = {{"mode", to_string(c.themes->mode)},
                   {"tokens", std::vector<std::string>(c.themes->tokens.begin(), c.themes->tokens.end())}};
  } else {
    j["themes"] = nullptr;
  }
  if (c.date_range) {
    j["date_range"] = {{"start", c.date_range->start.iso()}, {"end", c.date_range->end.iso()}};
  } else {
    j["date_range"] = nullptr;
  }
  auto codes = [](const std::optional<CodeSet>& s) -> nlohmann::ordered_json {
    if (!s) return nullptr;
    return std::vector<std::string>(s->begin(), s->end());
  };
  j["event_root_codes"] = codes(c.event_root_codes);
  j["actor1_country"] = codes(c.actor1_country);
  return j;
}

QueryCriteria criteria_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("criteria must be a JSON object");
  QueryCriteria c;
  try {
    if (j.contains("actor2_refugee")) c.actor2_refugee = j.at("actor2_refugee").get<bool>();
    if (j.contains("refugee_mode")) {
      const auto mode = cameo::refugee_mode_from_string(j.at("refugee_mode").get<std::string>());
      if (!mode) throw ValidationError("unknown refugee_mode");
      c.refugee_mode = *mode;
    }
    if (j.contains("themes") && !j.at("themes").is_null()) {
      const auto& t = j.at("themes");
      ThemeMatcher m;
      const auto mode = theme_mode_from_string(t.value("mode", std::string("exact")));
      if (!mode) throw ValidationError("unknown theme mode");
      m.mode = *mode;
      for (const auto& token : codes_from_json(t.at("tokens"), "themes.tokens")) m.tokens.insert(token);
      c.themes = std::move(m);
    }
    if (j.contains("date_range") && !j.at("date_range").is_null()) {
      const auto& r = j.at("date_range");
      c.date_range = DateRange{parse_date_param("start", r.at("start").get<std::string>()),
                               parse_date_param("end", r.at("end").get<std::string>())};
    }
    if (j.contains("event_root_codes") && !j.at("event_root_codes").is_null()) {
      c.event_root_codes = codes_from_json(j.at("event_root_codes"), "event_root_codes");
    }
    if (j.contains("actor1_country") && !j.at("actor1_country").is_null()) {
      c.actor1_country = codes_from_json(j.at("actor1_country"), "actor1_country");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed criteria JSON: ") + e.what());
  }
  c.validate();
  return c;
}

QueryParams to_query_params(const QueryCriteria& c) {
  QueryParams p;
  p.emplace_back("actor2_refugee", c.actor2_refugee ? "1" : "0");
  p.emplace_back("refugee_mode", std::string(cameo::to_string(c.refugee_mode)));
  if (c.themes) {
    p.emplace_back("themes", join_codes(c.themes->tokens));
    p.emplace_back("theme_mode", std::string(to_string(c.themes->mode)));
  }
  if (c.date_range) {
    p.emplace_back("from", c.date_range->start.iso());
    p.emplace_back("to", c.date_range->end.iso());
  }
  if (c.event_root_codes) p.emplace_back("roots", join_codes(*c.event_root_codes));
  if (c.actor1_country) p.emplace_back("actor1_country", join_codes(*c.actor1_country));
  return p;
}

QueryCriteria criteria_from_query_params(const QueryParams& params) {
  QueryCriteria c;
  const auto theme_mode_text = param(params, "theme_mode");
  std::optional<ThemeMode> theme_mode;
  if (theme_mode_text) {
    theme_mode = theme_mode_from_string(*theme_mode_text);
    if (!theme_mode) throw ValidationError("unknown theme_mode '" + *theme_mode_text + "'");
  }

  if (const auto preset = param(params, "criteria")) {
    if (*preset == "1") {
      c = criteria1();
    } else if (*preset == "2") {
      c = criteria2(theme_mode.value_or(ThemeMode::exact_set));
    } else if (!preset->empty() && preset->front() == '{') {
      const auto j = nlohmann::json::parse(*preset, nullptr, false);
      if (j.is_discarded()) throw ValidationError("criteria is not valid JSON");
      c = criteria_from_json(j);
    } else {
      throw ValidationError("criteria must be 1, 2 or a JSON object, got '" + *preset + "'");
    }
  }

  if (const auto v = param(params, "actor2_refugee")) c.actor2_refugee = parse_bool_param("actor2_refugee", *v);
  if (const auto v = param(params, "refugee_mode")) {
    const auto mode = cameo::refugee_mode_from_string(*v);
    if (!mode) throw ValidationError("unknown refugee_mode '" + *v + "'");
    c.refugee_mode = *mode;
  }
  if (const auto v = param(params, "themes")) {
    ThemeMatcher m;
    m.mode = theme_mode.value_or(ThemeMode::exact_set);
    m.tokens = split_codes(*v);
    c.themes = std::move(m);
  } else if (theme_mode && c.themes) {
    c.themes->mode = *theme_mode;
  }

  const auto from = param(params, "from");
  const auto to = param(params, "to");
  if (from || to) {
    if (!(from && to) && !c.date_range) throw ValidationError("'from' and 'to' must be given together");
    DateRange r = c.date_range.value_or(DateRange{});
    if (from) r.start = parse_date_param("from", *from);
    if (to) r.end = parse_date_param("to", *to);
    c.date_range = r;
  }
  if (const auto v = param(params, "roots")) {
    auto codes = split_codes(*v);
    if (codes.empty() || codes.contains("all")) c.event_root_codes.reset();
    else c.event_root_codes = std::move(codes);
  }
  if (const auto v = param(params, "actor1_country")) {
    auto codes = split_codes(*v);
    if (codes.empty()) c.actor1_country.reset();
    else c.actor1_country = std::move(codes);
  }
  c.validate();
  return c;
}

std::string url_encode(std::string_view text) {
  std::string out;
  for (unsigned char ch : text) {
    if (std::isalnum(ch) || ch == '-' || ch == '_' || ch == '.' || ch == '~') {
      out += static_cast<char>(ch);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", ch);
      out += buf;
    }
  }
  return out;
}

std::string to_query_string(const QueryParams& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += '&';
    out += url_encode(k);
    out += '=';
    out += url_encode(v);
  }
  return out;
}

CodeSet split_codes(std::string_view text) {
  CodeSet out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto token = text.substr(start, end - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) out.emplace(token);
    start = end + 1;
  }
  return out;
}

}  // namespace xenomon::query
