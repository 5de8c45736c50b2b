#include "xenomon/serialize.hpp"

#include "xenomon/formats.hpp"

namespace xenomon::serialize {
namespace {

template <class T>
Json opt(const std::optional<T>& v) {
  if (!v) return nullptr;
  return *v;
}

std::string opt_text(const std::optional<std::string>& v) { return v.value_or(""); }
std::string opt_real(const std::optional<double>& v) { return v ? formats::format_real(*v) : ""; }

}  // namespace

Json to_json(const ActorRef& a) {
  Json j;
  j["code"] = a.code;
  j["name"] = opt(a.name);
  j["country_code"] = opt(a.country_code);
  j["type_codes"] = a.type_codes;
  return j;
}

Json to_json(const EventRecord& e) {
  Json j;
  j["global_event_id"] = e.global_event_id;
  j["day"] = e.day.iso();
  j["actor1"] = e.actor1 ? to_json(*e.actor1) : Json(nullptr);
  j["actor2"] = e.actor2 ? to_json(*e.actor2) : Json(nullptr);
  j["is_root_event"] = e.is_root_event;
  j["event_code"] = e.event_code;
  j["event_base_code"] = e.event_base_code;
  j["event_root_code"] = e.event_root_code;
  j["quad_class"] = e.quad_class;
  j["goldstein_scale"] = e.goldstein_scale;
  j["num_mentions"] = e.num_mentions;
  j["num_sources"] = e.num_sources;
  j["num_articles"] = e.num_articles;
  j["avg_tone"] = e.avg_tone;
  if (e.action_geo) {
    const auto& g = *e.action_geo;
    j["action_geo"] = Json{{"latitude", opt(g.latitude)},
                           {"longitude", opt(g.longitude)},
                           {"country_code", opt(g.country_code)},
                           {"full_name", opt(g.full_name)}};
  } else {
    j["action_geo"] = nullptr;
  }
  j["date_added"] = e.date_added.iso();
  j["source_url"] = e.source_url;
  return j;
}

Json to_json(const MentionRecord& m) {
  Json j;
  j["global_event_id"] = m.global_event_id;
  j["event_time"] = m.event_time.iso();
  j["mention_time"] = m.mention_time.iso();
  j["mention_type"] = m.mention_type;
  j["mention_source_name"] = m.mention_source_name;
  j["mention_identifier"] = m.mention_identifier;
  j["sentence_id"] = m.sentence_id;
  j["confidence"] = m.confidence;
  j["mention_doc_tone"] = m.mention_doc_tone;
  return j;
}

Json to_json(const GkgRecord& g) {
  Json j;
  j["gkg_record_id"] = g.gkg_record_id;
  j["date"] = g.date.iso();
  j["document_identifier"] = g.document_identifier;
  Json themes = Json::array();
  for (const auto& t : g.themes) themes.push_back(Json{{"theme", t.theme}, {"char_offset", t.char_offset}});
  j["themes"] = std::move(themes);
  if (g.v2_tone) {
    const auto& t = *g.v2_tone;
    j["v2_tone"] = Json{{"tone", t.tone},
                        {"positive", t.positive},
                        {"negative", t.negative},
                        {"polarity", t.polarity},
                        {"extra", t.extra}};
  } else {
    j["v2_tone"] = nullptr;
  }
  j["locations_raw"] = g.locations_raw;
  j["gcam_raw"] = g.gcam_raw;
  return j;
}

Json to_json(const EventWithContext& ctx) {
  Json j;
  j["event"] = to_json(ctx.event);
  Json mentions = Json::array();
  for (const auto& m : ctx.mentions) mentions.push_back(to_json(m));
  j["mentions"] = std::move(mentions);
  Json documents = Json::array();
  for (const auto& d : ctx.documents) documents.push_back(to_json(d));
  j["documents"] = std::move(documents);
  return j;
}

Json to_json(const analytics::TimelineSeries& s) {
  Json j;
  j["granularity"] = analytics::to_string(s.granularity);
  j["unit"] = analytics::to_string(s.unit);
  j["range"] = Json{{"start", s.range.start.iso()}, {"end", s.range.end.iso()}};
  Json points = Json::array();
  for (const auto& p : s.points) {
    Json pj{{"bucket", p.bucket.iso()}, {"count", p.count}};
    if (p.share) {
      pj["total"] = p.share->total;
      pj["percent"] = p.share->percent;
      pj["zero_denominator"] = p.share->zero_denominator;
    }
    points.push_back(std::move(pj));
  }
  j["points"] = std::move(points);
  return j;
}

Json to_json(const analytics::ToneSeries& s) {
  Json j;
  j["granularity"] = analytics::to_string(s.granularity);
  Json points = Json::array();
  for (const auto& p : s.points) {
    points.push_back(
        Json{{"bucket", p.bucket.iso()}, {"min", p.min}, {"median", p.median}, {"max", p.max}, {"n", p.n}});
  }
  j["points"] = std::move(points);
  return j;
}

Json to_json(const analytics::CountryFrequency& f) {
  Json j;
  j["which"] = analytics::to_string(f.which);
  Json entries = Json::array();
  for (const auto& e : f.entries) entries.push_back(Json{{"code", e.code}, {"count", e.count}});
  j["entries"] = std::move(entries);
  return j;
}

Json to_json(const analytics::Choropleth& m) {
  Json j;
  j["which"] = analytics::to_string(m.which);
  if (m.roots) j["roots"] = std::vector<std::string>(m.roots->begin(), m.roots->end());
  else j["roots"] = nullptr;
  j["total"] = m.total;
  Json entries = Json::array();
  for (const auto& e : m.entries) {
    entries.push_back(Json{{"code", e.code},
                           {"count", e.count},
                           {"name", e.name},
                           {"iso_alpha2", e.iso_alpha2},
                           {"iso_alpha3", e.iso_alpha3}});
  }
  j["entries"] = std::move(entries);
  Json options = Json::array();
  for (const auto& o : m.root_options) {
    options.push_back(Json{{"code", o.code}, {"description", o.description}, {"count", o.count}});
  }
  j["root_options"] = std::move(options);
  return j;
}

Json to_json(const analytics::SpikeReport& r) {
  Json j;
  j["window"] = r.window;
  j["k"] = r.k;
  Json flagged = Json::array();
  for (const auto& f : r.flagged) {
    flagged.push_back(Json{{"bucket", f.bucket.iso()},
                           {"value", f.value},
                           {"baseline_mean", f.baseline_mean},
                           {"baseline_std", f.baseline_std},
                           {"z_score", f.z_score}});
  }
  j["flagged"] = std::move(flagged);
  return j;
}

Json to_json(const store::IngestStatus& s) {
  Json j;
  j["last_poll"] = s.last_poll ? Json(s.last_poll->iso()) : Json(nullptr);
  j["file_count"] = s.file_count;
  j["rows"] = Json{{"events", s.rows.events}, {"mentions", s.rows.mentions}, {"gkg", s.rows.gkg}};
  Json files = Json::array();
  for (const auto& f : s.files) {
    files.push_back(Json{{"name", f.name},
                         {"kind", f.kind},
                         {"rows_total", f.rows_total},
                         {"rows_ok", f.rows_ok},
                         {"rows_skipped", f.rows_skipped},
                         {"inserted", f.inserted},
                         {"updated", f.updated},
                         {"ingested_at", f.ingested_at.iso()}});
  }
  j["files"] = std::move(files);
  return j;
}

Json to_json(const ParseDiagnostics& d) {
  Json j;
  j["rows_total"] = d.rows_total;
  j["rows_ok"] = d.rows_ok;
  j["rows_skipped"] = d.rows_skipped;
  Json errors = Json::array();
  for (const auto& e : d.first_errors) errors.push_back(Json{{"line", e.line}, {"reason", e.reason}});
  j["first_errors"] = std::move(errors);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
  return out;
}

std::string to_csv(const analytics::TimelineSeries& s) {
  const bool with_share = !s.points.empty() && s.points.front().share.has_value();
  std::string out = with_share ? csv_row({"bucket", "count", "total", "percent", "zero_denominator"})
                               : csv_row({"bucket", "count"});
  for (const auto& p : s.points) {
    if (with_share && p.share) {
      out += csv_row({p.bucket.iso(), std::to_string(p.count), std::to_string(p.share->total),
                      formats::format_real(p.share->percent), p.share->zero_denominator ? "1" : "0"});
    } else {
      out += csv_row({p.bucket.iso(), std::to_string(p.count)});
    }
  }
  return out;
}

std::string to_csv(const analytics::ToneSeries& s) {
  std::string out = csv_row({"bucket", "min", "median", "max", "n"});
  for (const auto& p : s.points) {
    out += csv_row({p.bucket.iso(), formats::format_real(p.min), formats::format_real(p.median),
                    formats::format_real(p.max), std::to_string(p.n)});
  }
  return out;
}

std::string to_csv(const analytics::CountryFrequency& f) {
  std::string out = csv_row({"rank", "code", "count"});
  for (std::size_t i = 0; i < f.entries.size(); ++i) {
    out += csv_row({std::to_string(i + 1), f.entries[i].code, std::to_string(f.entries[i].count)});
  }
  return out;
}

std::string to_csv(const analytics::Choropleth& m) {
  std::string out = csv_row({"code", "name", "iso_alpha3", "count"});
  for (const auto& e : m.entries) out += csv_row({e.code, e.name, e.iso_alpha3, std::to_string(e.count)});
  return out;
}

std::string to_csv(const analytics::SpikeReport& r) {
  std::string out = csv_row({"bucket", "value", "baseline_mean", "baseline_std", "z_score"});
  for (const auto& f : r.flagged) {
    out += csv_row({f.bucket.iso(), formats::format_real(f.value), formats::format_real(f.baseline_mean),
                    formats::format_real(f.baseline_std), formats::format_real(f.z_score)});
  }
  return out;
}

const std::vector<std::string> kEventCsvColumns = {
    "global_event_id", "day",          "actor1_code",    "actor1_name",   "actor1_country_code",
    "actor2_code",     "actor2_name",  "actor2_country_code", "event_code", "event_root_code",
    "quad_class",      "goldstein_scale", "num_mentions", "num_sources",  "num_articles",
    "avg_tone",        "action_geo_country_code", "action_geo_lat", "action_geo_long", "date_added",
    "source_url",      "mention_count", "document_count"};

std::string events_to_csv(std::span<const EventWithContext> contexts) {
  std::string out = csv_row(kEventCsvColumns);
  for (const auto& ctx : contexts) {
    const auto& e = ctx.event;
    auto actor_cells = [](const std::optional<ActorRef>& a) -> std::array<std::string, 3> {
      if (!a) return {"", "", ""};
      return {a->code, opt_text(a->name), opt_text(a->country_code)};
    };
    const auto a1 = actor_cells(e.actor1);
    const auto a2 = actor_cells(e.actor2);
    out += csv_row({std::to_string(e.global_event_id), e.day.iso(), a1[0], a1[1], a1[2], a2[0], a2[1], a2[2],
                    e.event_code, e.event_root_code, std::to_string(e.quad_class),
                    formats::format_real(e.goldstein_scale), std::to_string(e.num_mentions),
                    std::to_string(e.num_sources), std::to_string(e.num_articles), formats::format_real(e.avg_tone),
                    e.action_geo ? opt_text(e.action_geo->country_code) : "",
                    e.action_geo ? opt_real(e.action_geo->latitude) : "",
                    e.action_geo ? opt_real(e.action_geo->longitude) : "", e.date_added.iso(), e.source_url,
                    std::to_string(ctx.mentions.size()), std::to_string(ctx.documents.size())});
  }
  return out;
}

}  // namespace xenomon::serialize
