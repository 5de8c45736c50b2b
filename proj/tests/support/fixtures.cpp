#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "xenomon/formats.hpp"

namespace xenomon::testing {
namespace {

const std::vector<std::string> kActorCodes = {"REF", "SYRREF", "GOV", "USA", "ESP", "ITA", "DEU",
                                              "TUR", "CVL", "ESPGOV", "MIL", "AFGREF", "IGOUNO"};
const std::vector<std::string> kCountries = {"ESP", "USA", "ITA", "DEU", "TUR", "SYR", "GRC",
                                             "FRA", "GBR", "IRQ", "AFG", "EUR", "ZZZ"};
const std::vector<std::string> kTypes = {"REF", "GOV", "CVL", "MIL", "MED", "EDU"};
const std::vector<std::string> kNames = {"SPAIN",          "UNITED STATES", "REFUGEE",    "São Paulo",
                                         "Ελλάδα",         "Smith, \"Jr\"", "MIGRANT",    "GOVERNMENT",
                                         "Köln Police",    "ANKARA",        "CIVILIAN",   "東京"};
const std::vector<std::string> kEventCodes = {"010",  "0211", "036", "043", "057",  "0871", "110", "112", "120",
                                              "1246", "130",  "141", "1411", "145", "173",  "180", "190", "200"};
const std::vector<std::string> kSources = {"example.com", "news.example.org", "bbc.co.uk", "elpais.com"};
const std::vector<std::string> kThemes = {
    "DISCRIMINATION_IMMIGRATION_XENOPHOBIA",
    "DISCRIMINATION_IMMIGRATION_ANTIIMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_ATTACKS_ON_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_XENOPHOBES",
    "DISCRIMINATION_IMMIGRATION_OTHER",  // prefix match only
    "DISCRIMINATION_IMMIGRATIONPOLICY",  // prefix match only
    "REFUGEES",
    "TAX_FNCACT_REFUGEE",
    "WB_2433_CONFLICT",
    "IMMIGRATION"};

double fine_real(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.unit(); }
double coarse_real(Rng& rng, int lo_tenths, int hi_tenths) {
  return static_cast<double>(rng.between(lo_tenths, hi_tenths)) / 10.0;
}

Date day_in(Rng& rng, const DateRange& days) {
  const auto span = (days.end.days() - days.start.days()).count();
  return Date{days.start.days() + std::chrono::days{rng.between(0, span)}};
}

Timestamp plus_seconds(Timestamp t, std::int64_t s) { return Timestamp{t.time() + std::chrono::seconds{s}}; }

std::optional<ActorRef> random_actor(Rng& rng, double refugee_share) {
  if (rng.chance(0.12)) return std::nullopt;
  ActorRef a;
  a.code = rng.chance(refugee_share) ? "REF" : rng.pick(kActorCodes);
  if (rng.chance(0.7)) a.name = rng.pick(kNames);
  if (rng.chance(0.75)) a.country_code = rng.pick(kCountries);
  const auto n_types = rng.below(4);
  for (std::uint64_t i = 0; i < n_types; ++i) a.type_codes.push_back(rng.pick(kTypes));
  if (rng.chance(0.03) && (a.name || a.country_code)) a.code.clear();
  return a;
}

template <class Record, class Fn>
std::string join_lines(const std::vector<Record>& records, Fn fn) {
  std::string out;
  for (const auto& r : records) {
    out += fn(r);
    out += '\n';
  }
  return out;
}

EventRecord make_event(std::int64_t id, Date day, const std::string& actor1_country, bool refugee_target,
                       const std::string& code, double tone) {
  EventRecord e;
  e.global_event_id = id;
  e.day = day;
  e.actor1 = ActorRef{actor1_country + "GOV", std::nullopt, actor1_country, {"GOV"}};
  e.actor2 = refugee_target ? ActorRef{"REF", std::string("REFUGEE"), std::nullopt, {"REF"}}
                            : ActorRef{"GOV", std::string("GOVERNMENT"), std::nullopt, {"GOV"}};
  e.is_root_event = true;
  e.event_code = code;
  e.event_base_code = code.substr(0, 3);
  e.event_root_code = code.substr(0, 2);
  e.quad_class = 1;
  e.goldstein_scale = 1.0;
  e.num_mentions = 1;
  e.num_sources = 1;
  e.num_articles = 1;
  e.avg_tone = tone;
  e.date_added = plus_seconds(Timestamp::start_of(day), 900);
  e.source_url = "https://fixture.example/e/" + std::to_string(id);
  return e;
}

MentionRecord make_mention(const EventRecord& e, const std::string& identifier) {
  MentionRecord m;
  m.global_event_id = e.global_event_id;
  m.event_time = Timestamp::start_of(e.day);
  m.mention_time = e.date_added;
  m.mention_type = 1;
  m.mention_source_name = "fixture.example";
  m.mention_identifier = identifier;
  m.sentence_id = 1;
  m.confidence = 50;
  m.mention_doc_tone = e.avg_tone;
  return m;
}

GkgRecord make_doc(const std::string& id, const std::string& identifier, Timestamp date,
                   std::vector<std::string> themes) {
  GkgRecord g;
  g.gkg_record_id = id;
  g.date = date;
  g.document_identifier = identifier;
  std::int64_t offset = 10;
  for (auto& t : themes) {
    g.themes.push_back(ThemeHit{std::move(t), offset});
    offset += 37;
  }
  g.v2_tone = ToneTuple{-2.5, 1.5, 4.0, 5.5, {20.0, 1.25, 350.0}};
  return g;
}

}  // namespace

EventRecord random_event(Rng& rng, std::int64_t id, const DateRange& days) {
  EventRecord e;
  e.global_event_id = id;
  e.day = day_in(rng, days);
  e.actor1 = random_actor(rng, 0.05);
  e.actor2 = random_actor(rng, 0.35);
  e.is_root_event = rng.chance(0.5);
  e.event_code = rng.pick(kEventCodes);
  e.event_root_code = e.event_code.substr(0, 2);
  e.event_base_code = e.event_code.substr(0, 3);
  e.quad_class = static_cast<int>(rng.between(1, 4));
  e.goldstein_scale = coarse_real(rng, -100, 100);
  e.num_mentions = rng.between(0, 60);
  e.num_sources = rng.between(0, 20);
  e.num_articles = rng.between(0, 60);
  e.avg_tone = rng.chance(0.5) ? fine_real(rng, -20.0, 10.0) : coarse_real(rng, -200, 100);
  if (rng.chance(0.7)) {
    GeoPoint g;
    if (rng.chance(0.9)) g.latitude = fine_real(rng, -90.0, 90.0);
    if (rng.chance(0.9)) g.longitude = fine_real(rng, -180.0, 180.0);
    if (rng.chance(0.8)) g.country_code = rng.pick(kCountries);
    if (rng.chance(0.8)) g.full_name = rng.pick(kNames);
    if (!g.latitude && !g.longitude && !g.country_code && !g.full_name) g.country_code = "SP";
    e.action_geo = g;
  }
  e.date_added = plus_seconds(Timestamp::start_of(e.day), rng.between(0, 2 * 86400 - 1));
  e.source_url = "https://news.example/story/" + std::to_string(id) + "?ref=a,b";
  return e;
}

MentionRecord random_mention(Rng& rng, const EventRecord& event, std::string identifier) {
  MentionRecord m;
  m.global_event_id = event.global_event_id;
  m.event_time = Timestamp::start_of(event.day);
  m.mention_time = plus_seconds(event.date_added, rng.between(0, 86400));
  m.mention_type = static_cast<int>(rng.between(1, 6));
  m.mention_source_name = rng.pick(kSources);
  m.mention_identifier = std::move(identifier);
  m.sentence_id = static_cast<int>(rng.between(0, 40));
  m.confidence = static_cast<int>(rng.between(0, 100));
  m.mention_doc_tone = fine_real(rng, -15.0, 15.0);
  return m;
}

GkgRecord random_gkg(Rng& rng, std::string id, std::string document_identifier) {
  GkgRecord g;
  g.gkg_record_id = std::move(id);
  g.date = plus_seconds(Timestamp::start_of(Date::from_ymd(2015, 1, 1)), rng.between(0, 7LL * 365 * 86400));
  g.document_identifier = std::move(document_identifier);
  const auto n = rng.below(6);
  for (std::uint64_t i = 0; i < n; ++i) g.themes.push_back(ThemeHit{rng.pick(kThemes), rng.between(0, 5000)});
  if (rng.chance(0.9)) {
    ToneTuple t{fine_real(rng, -10, 10), fine_real(rng, 0, 10), fine_real(rng, 0, 10), fine_real(rng, 0, 20), {}};
    const auto extra = rng.below(4);
    for (std::uint64_t i = 0; i < extra; ++i) t.extra.push_back(coarse_real(rng, 0, 5000));
    g.v2_tone = t;
  }
  if (rng.chance(0.5)) g.locations_raw = "1#Spain#SP#SP#40#-4#SP;4#Madrid, Madrid, Spain#SP#SP29#40.4#-3.68#-390625";
  if (rng.chance(0.5)) g.gcam_raw = "wc:" + std::to_string(rng.between(10, 3000)) + ",c12.1:4,v19.1:3.5";
  return g;
}

std::string corrupt_line(Rng& rng, const std::string& line) {
  std::string out = line;
  switch (rng.below(3)) {
    case 0: {  // merge two columns
      const auto tab = out.find('\t', rng.below(out.size() / 2));
      out.erase(tab == std::string::npos ? out.find('\t') : tab, 1);
      break;
    }
    case 1:  // extra column
      out += "\tEXTRA";
      break;
    default:  // tabs lost in transit: a single column
      std::replace(out.begin(), out.end(), '\t', ' ');
      break;
  }
  return out;
}

Corpus random_corpus(Rng& rng, std::size_t events, std::size_t mentions, std::size_t gkg, const DateRange& days) {
  Corpus c;
  for (std::size_t i = 0; i < events; ++i) {
    c.events.push_back(random_event(rng, 1000 + static_cast<std::int64_t>(i) * 7, days));
  }
  const std::size_t doc_pool = gkg + gkg / 5 + 1;
  auto doc_url = [](std::uint64_t k) { return "https://doc.example/a/" + std::to_string(k); };
  std::set<std::pair<std::int64_t, std::string>> keys;
  std::size_t orphan_serial = 0;
  while (c.mentions.size() < mentions) {
    const auto url = doc_url(rng.below(doc_pool));
    if (rng.chance(0.05) || c.events.empty()) {
      EventRecord ghost = random_event(rng, 900000000 + static_cast<std::int64_t>(orphan_serial++), days);
      c.mentions.push_back(random_mention(rng, ghost, url));
      continue;
    }
    const auto& e = c.events[rng.below(c.events.size())];
    if (!keys.emplace(e.global_event_id, url).second) continue;
    c.mentions.push_back(random_mention(rng, e, url));
  }
  for (std::size_t i = 0; i < gkg; ++i) {
    // A few documents share an identifier with another record.
    const auto k = rng.chance(0.03) && i > 0 ? rng.below(i) : i;
    c.gkg.push_back(random_gkg(rng, "G" + std::to_string(100000 + i), doc_url(k)));
  }
  return c;
}

void load(store::Store& store, const Corpus& corpus) {
  store.upsert_events(corpus.events);
  store.upsert_mentions(corpus.mentions);
  store.upsert_gkg(corpus.gkg);
}

std::vector<EventWithContext> oracle_join(const Corpus& corpus) {
  std::vector<EventWithContext> out;
  for (const auto& e : corpus.events) {
    EventWithContext ctx;
    ctx.event = e;
    for (const auto& m : corpus.mentions) {
      if (m.global_event_id == e.global_event_id) ctx.mentions.push_back(m);
    }
    std::sort(ctx.mentions.begin(), ctx.mentions.end(),
              [](const MentionRecord& a, const MentionRecord& b) { return a.mention_identifier < b.mention_identifier; });
    for (const auto& g : corpus.gkg) {
      const bool cited = std::any_of(ctx.mentions.begin(), ctx.mentions.end(), [&](const MentionRecord& m) {
        return m.mention_identifier == g.document_identifier;
      });
      if (cited) ctx.documents.push_back(g);
    }
    std::sort(ctx.documents.begin(), ctx.documents.end(),
              [](const GkgRecord& a, const GkgRecord& b) { return a.gkg_record_id < b.gkg_record_id; });
    out.push_back(std::move(ctx));
  }
  std::sort(out.begin(), out.end(), [](const EventWithContext& a, const EventWithContext& b) {
    if (a.event.day != b.event.day) return a.event.day < b.event.day;
    return a.event.global_event_id < b.event.global_event_id;
  });
  return out;
}

bool oracle_matches(const query::QueryCriteria& c, const EventWithContext& ctx) {
  const EventRecord& e = ctx.event;
  if (c.actor2_refugee) {
    if (!e.actor2) return false;
    bool refugee = e.actor2->code == "REF";
    if (c.refugee_mode == cameo::RefugeeMode::contains_type) {
      for (const auto& t : e.actor2->type_codes) refugee = refugee || t == "REF";
    }
    if (!refugee) return false;
  }
  if (c.date_range && (e.day < c.date_range->start || c.date_range->end < e.day)) return false;
  if (c.event_root_codes && c.event_root_codes->count(e.event_root_code) == 0) return false;
  if (c.actor1_country) {
    if (!e.actor1 || !e.actor1->country_code) return false;
    if (c.actor1_country->count(*e.actor1->country_code) == 0) return false;
  }
  if (c.themes) {
    bool hit = false;
    for (const auto& doc : ctx.documents) {
      for (const auto& th : doc.themes) {
        for (const auto& token : c.themes->tokens) {
          if (c.themes->mode == query::ThemeMode::exact_set) {
            hit = hit || th.theme == token;
          } else {
            hit = hit || th.theme.compare(0, token.size(), token) == 0;
          }
        }
      }
    }
    if (!hit) return false;
  }
  return true;
}

namespace {

query::CodeSet random_subset(Rng& rng, const std::vector<std::string>& pool) {
  query::CodeSet out;
  const auto n = rng.between(1, 4);
  for (std::int64_t i = 0; i < n; ++i) out.insert(rng.pick(pool));
  return out;
}

}  // namespace

query::QueryCriteria random_criteria(Rng& rng, const DateRange& days) {
  static const std::vector<std::string> roots = {"01", "02", "03", "04", "05", "08", "11",
                                                 "12", "13", "14", "17", "18", "19", "20"};
  static const std::vector<std::string> tokens(query::kRefugeeThemes.begin(), query::kRefugeeThemes.end());
  query::QueryCriteria c;
  c.actor2_refugee = rng.chance(0.5);
  c.refugee_mode = rng.chance(0.5) ? cameo::RefugeeMode::exact : cameo::RefugeeMode::contains_type;
  if (rng.chance(0.5)) {
    query::ThemeMatcher m;
    m.mode = rng.chance(0.5) ? query::ThemeMode::exact_set : query::ThemeMode::prefix;
    m.tokens = random_subset(rng, tokens);
    if (m.mode == query::ThemeMode::prefix && rng.chance(0.5)) m.tokens.insert(std::string(query::kRefugeeThemePrefix));
    c.themes = std::move(m);
  }
  if (rng.chance(0.5)) {
    const auto a = day_in(rng, days);
    const auto b = day_in(rng, days);
    c.date_range = DateRange{std::min(a, b), std::max(a, b)};
  }
  if (rng.chance(0.4)) c.event_root_codes = random_subset(rng, roots);
  if (rng.chance(0.4)) c.actor1_country = random_subset(rng, kCountries);
  return c;
}

std::vector<EventWithContext> oracle_scan(const Corpus& corpus, const query::QueryCriteria& criteria) {
  std::vector<EventWithContext> out;
  for (auto& ctx : oracle_join(corpus)) {
    if (oracle_matches(criteria, ctx)) out.push_back(std::move(ctx));
  }
  return out;
}

Corpus kurdi_fixture() {
  Rng rng(20150902);
  Corpus c;
  std::int64_t id = 500000;
  auto add = [&](Date day, bool refugee, const std::string& country) {
    const double tone = coarse_real(rng, -90, 20);
    auto e = make_event(id++, day, country, refugee, rng.pick(kEventCodes), tone);
    const auto n_mentions = rng.between(1, 3);
    for (std::int64_t j = 0; j < n_mentions; ++j) {
      c.mentions.push_back(make_mention(e, "https://kurdi.example/" + std::to_string(e.global_event_id) + "/" +
                                               std::to_string(j)));
    }
    c.events.push_back(std::move(e));
  };
  for (Date month = Date::from_ymd(2015, 3, 1); month <= Date::from_ymd(2016, 3, 1); month = month.next_month()) {
    const bool surge = month == Date::from_ymd(2015, 9, 1);
    const auto refugee_events = surge ? 140 : rng.between(15, 35);
    const DateRange days{month, month.last_of_month()};
    for (std::int64_t i = 0; i < refugee_events; ++i) add(day_in(rng, days), true, rng.pick(kCountries));
    for (int i = 0; i < 40; ++i) add(day_in(rng, days), false, rng.pick(kCountries));
  }
  // Out-of-window refugee coverage larger than the surge must not leak in.
  for (int i = 0; i < 200; ++i) add(Date::from_ymd(2016, 5, 10), true, "DEU");
  for (int i = 0; i < 200; ++i) add(Date::from_ymd(2015, 1, 15), true, "DEU");
  return c;
}

Corpus march2021_fixture() {
  Rng rng(20210301);
  Corpus c;
  std::int64_t id = 700000;
  const DateRange march{Date::from_ymd(2021, 3, 1), Date::from_ymd(2021, 3, 31)};
  const std::vector<std::string> roots = {"010", "0211", "043", "120", "141", "173", "190"};
  auto add = [&](Date day, const std::string& country, bool refugee, std::vector<std::string> themes) {
    auto e = make_event(id++, day, country, refugee, rng.pick(roots), coarse_real(rng, -80, 10));
    const auto url = "https://march.example/" + std::to_string(e.global_event_id);
    c.mentions.push_back(make_mention(e, url));
    if (!themes.empty()) {
      c.gkg.push_back(make_doc("M" + std::to_string(e.global_event_id), url, e.date_added, std::move(themes)));
    }
    c.events.push_back(std::move(e));
  };
  const std::vector<std::pair<std::string, int>> weights = {{"ESP", 42}, {"USA", 27}, {"ITA", 16}, {"DEU", 9},
                                                            {"GRC", 7},  {"TUR", 5},  {"FRA", 3}};
  for (const auto& [country, n] : weights) {
    for (int i = 0; i < n; ++i) {
      add(day_in(rng, march), country, true, {rng.pick(std::vector<std::string>(kThemes.begin(), kThemes.begin() + 4))});
    }
  }
  // Decoys: refugee target without a listed theme, listed theme without a
  // refugee target, and criteria-2 events outside March.
  for (int i = 0; i < 80; ++i) add(day_in(rng, march), "USA", true, {"DISCRIMINATION_IMMIGRATION_OTHER"});
  for (int i = 0; i < 60; ++i) add(day_in(rng, march), "ITA", true, {});
  for (int i = 0; i < 70; ++i) add(day_in(rng, march), "ITA", false, {"DISCRIMINATION_IMMIGRATION_XENOPHOBIA"});
  for (int i = 0; i < 90; ++i) add(Date::from_ymd(2021, 4, 2), "USA", true, {"DISCRIMINATION_IMMIGRATION_XENOPHOBIA"});
  return c;
}

Corpus frozen_fixture() {
  Rng rng(424242);
  auto c = random_corpus(rng, 50, 150, 90, DateRange{Date::from_ymd(2021, 3, 1), Date::from_ymd(2021, 3, 20)});
  // One fully hand-checked event.
  auto e = make_event(42, Date::from_ymd(2021, 3, 5), "ESP", true, "0871", -3.25);
  c.mentions.push_back(make_mention(e, "http://ex.org/a"));
  c.gkg.push_back(make_doc("20210305000000-1", "http://ex.org/a", e.date_added,
                           {"DISCRIMINATION_IMMIGRATION_XENOPHOBIA", "REFUGEES"}));
  c.events.push_back(std::move(e));
  return c;
}

Corpus spike_fixture() {
  Corpus c;
  std::int64_t id = 1;
  Date day = Date::from_ymd(2021, 1, 1);
  for (int d = 0; d < 30; ++d, day = day.next_day()) {
    const int n = d == 24 ? 40 : 4 + d % 3;
    for (int i = 0; i < n; ++i) c.events.push_back(make_event(id++, day, "ESP", true, "043", -1.0 - d % 5));
  }
  return c;
}

std::string to_lines(const std::vector<EventRecord>& records) {
  return join_lines(records, [](const EventRecord& r) { return formats::format_event_line(r); });
}
std::string to_lines(const std::vector<MentionRecord>& records) {
  return join_lines(records, [](const MentionRecord& r) { return formats::format_mention_line(r); });
}
std::string to_lines(const std::vector<GkgRecord>& records) {
  return join_lines(records, [](const GkgRecord& r) { return formats::format_gkg_line(r); });
}

}  // namespace xenomon::testing
