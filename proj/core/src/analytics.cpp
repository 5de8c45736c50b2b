#include "xenomon/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "xenomon/error.hpp"

namespace xenomon::analytics {
namespace {

bool blank(const std::optional<std::string>& code) {
  return !code || std::all_of(code->begin(), code->end(), [](char c) { return c == ' '; });
}

const std::optional<std::string>* country_of(const EventRecord& e, ActorSide which) {
  const auto& actor = which == ActorSide::actor1 ? e.actor1 : e.actor2;
  return actor ? &actor->country_code : nullptr;
}

std::string join_buckets(const std::vector<Date>& buckets) {
  std::string out;
  for (const auto& b : buckets) {
    if (!out.empty()) out += ", ";
    out += b.iso();
  }
  return out;
}

}  // namespace

std::string_view to_string(Granularity g) { return g == Granularity::day ? "day" : "month"; }
std::string_view to_string(CountUnit u) { return u == CountUnit::events ? "events" : "distinct-articles"; }
std::string_view to_string(ActorSide s) { return s == ActorSide::actor1 ? "actor1" : "actor2"; }

std::optional<Granularity> granularity_from_string(std::string_view text) {
  if (text == "day") return Granularity::day;
  if (text == "month") return Granularity::month;
  return std::nullopt;
}

std::optional<CountUnit> count_unit_from_string(std::string_view text) {
  if (text == "events") return CountUnit::events;
  if (text == "distinct-articles") return CountUnit::distinct_articles;
  return std::nullopt;
}

std::optional<ActorSide> actor_side_from_string(std::string_view text) {
  if (text == "actor1") return ActorSide::actor1;
  if (text == "actor2") return ActorSide::actor2;
  return std::nullopt;
}

Date bucket_of(Date d, Granularity g) { return g == Granularity::day ? d : d.first_of_month(); }

std::vector<Date> buckets_in(const DateRange& range, Granularity g) {
  std::vector<Date> out;
  const Date last = bucket_of(range.end, g);
  for (Date b = bucket_of(range.start, g); b <= last; b = g == Granularity::day ? b.next_day() : b.next_month()) {
    out.push_back(b);
  }
  return out;
}

CountUnit default_count_unit(std::span<const EventWithContext> contexts) {
  const bool any_mentions =
      std::any_of(contexts.begin(), contexts.end(), [](const EventWithContext& c) { return !c.mentions.empty(); });
  return any_mentions ? CountUnit::distinct_articles : CountUnit::events;
}

TimelineSeries article_count_timeline(std::span<const EventWithContext> contexts, const DateRange& range,
                                      Granularity granularity, CountUnit unit) {
  if (range.end < range.start) throw DateRangeError("timeline range start is after end");
  TimelineSeries series{granularity, unit, range, {}};
  std::map<Date, std::int64_t> events;
  std::map<Date, std::set<std::string_view>> articles;
  for (const auto& ctx : contexts) {
    if (!range.contains(ctx.event.day)) continue;
    const Date b = bucket_of(ctx.event.day, granularity);
    ++events[b];
    auto& ids = articles[b];
    for (const auto& m : ctx.mentions) ids.insert(m.mention_identifier);
  }
  for (const Date b : buckets_in(range, granularity)) {
    std::int64_t count = 0;
    if (unit == CountUnit::events) {
      if (const auto it = events.find(b); it != events.end()) count = it->second;
    } else if (const auto it = articles.find(b); it != articles.end()) {
      count = static_cast<std::int64_t>(it->second.size());
    }
    series.points.push_back(TimelinePoint{b, count, std::nullopt});
  }
  return series;
}

TimelineSeries percent_of_total(const TimelineSeries& matched, std::span<const VolumeSample> totals) {
  std::map<Date, std::int64_t> per_bucket;
  for (const auto& s : totals) per_bucket[bucket_of(s.date, matched.granularity)] += s.total;

  std::vector<Date> missing_total;
  std::set<Date> matched_buckets;
  for (const auto& p : matched.points) {
    matched_buckets.insert(p.bucket);
    if (!per_bucket.contains(p.bucket)) missing_total.push_back(p.bucket);
  }
  std::vector<Date> unmatched_total;
  for (const auto& [b, t] : per_bucket) {
    if (!matched_buckets.contains(b)) unmatched_total.push_back(b);
  }
  if (!missing_total.empty() || !unmatched_total.empty()) {
    std::string msg = "series buckets are misaligned";
    if (!missing_total.empty()) msg += "; no total for: " + join_buckets(missing_total);
    if (!unmatched_total.empty()) msg += "; total without matched bucket: " + join_buckets(unmatched_total);
    throw AlignmentError(msg);
  }

  TimelineSeries out = matched;
  for (auto& p : out.points) {
    PercentOfTotal share;
    share.total = per_bucket.at(p.bucket);
    if (share.total == 0) {
      share.zero_denominator = true;
    } else {
      // 100 * count is exact in int64; the single division rounds once.
      share.percent = static_cast<double>(100 * p.count) / static_cast<double>(share.total);
    }
    p.share = share;
  }
  return out;
}

TimelineSeries volume_share_series(std::span<const VolumeSample> samples, const DateRange& range,
                                   Granularity granularity) {
  TimelineSeries matched{granularity, CountUnit::distinct_articles, range, {}};
  std::map<Date, std::int64_t> counts;
  std::vector<VolumeSample> in_range;
  for (const auto& s : samples) {
    if (!range.contains(s.date)) continue;
    counts[bucket_of(s.date, granularity)] += s.matched;
    in_range.push_back(s);
  }
  for (const Date b : buckets_in(range, granularity)) {
    const auto it = counts.find(b);
    matched.points.push_back(TimelinePoint{b, it == counts.end() ? 0 : it->second, std::nullopt});
  }
  return percent_of_total(matched, in_range);
}

ToneSeries tone_stats(std::span<const EventWithContext> contexts, Granularity granularity) {
  std::map<Date, std::vector<double>> tones;
  for (const auto& ctx : contexts) tones[bucket_of(ctx.event.day, granularity)].push_back(ctx.event.avg_tone);
  ToneSeries series{granularity, {}};
  for (auto& [bucket, values] : tones) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const double median = n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    series.points.push_back(TonePoint{bucket, values.front(), median, values.back(), static_cast<std::int64_t>(n)});
  }
  return series;
}

CountryFrequency top_country_frequencies(std::span<const EventWithContext> contexts, std::size_t n,
                                         ActorSide which) {
  if (n < 1) throw ValidationError("n must be at least 1");
  std::map<std::string, std::int64_t> counts;
  for (const auto& ctx : contexts) {
    const auto* code = country_of(ctx.event, which);
    if (code && !blank(*code)) ++counts[**code];
  }
  CountryFrequency freq{which, {}};
  for (const auto& [code, count] : counts) freq.entries.push_back(CountryCount{code, count});
  std::stable_sort(freq.entries.begin(), freq.entries.end(),
                   [](const CountryCount& a, const CountryCount& b) { return a.count > b.count; });
  if (freq.entries.size() > n) freq.entries.resize(n);
  return freq;
}

Choropleth choropleth_counts(std::span<const EventWithContext> contexts, const std::optional<query::CodeSet>& roots,
                             const cameo::CameoTables& tables, ActorSide which) {
  Choropleth out{which, roots, {}, {}, 0};
  std::map<std::string, std::int64_t> counts;
  std::map<std::string, std::int64_t> per_root;
  for (const auto& ctx : contexts) {
    const auto* code = country_of(ctx.event, which);
    if (!code || blank(*code)) continue;
    ++per_root[ctx.event.event_root_code];
    if (roots && !roots->contains(ctx.event.event_root_code)) continue;
    ++counts[**code];
  }
  for (const auto& [code, count] : counts) {
    ChoroplethEntry entry{code, count, std::string(cameo::kUnknown), "", ""};
    if (const auto* info = tables.country(code)) {
      entry.name = info->name;
      entry.iso_alpha2 = info->iso_alpha2;
      entry.iso_alpha3 = info->iso_alpha3;
    }
    out.total += count;
    out.entries.push_back(std::move(entry));
  }
  for (const auto& [root, count] : per_root) {
    out.root_options.push_back(
        RootOption{root, std::string(cameo::label_or_unknown(tables.describe_event_root(root))), count});
  }
  return out;
}

SpikeReport detect_spikes(std::span<const Date> buckets, std::span<const double> values, std::size_t window,
                          double k) {
  if (buckets.size() != values.size()) throw ValidationError("buckets and values differ in length");
  if (window < 3) throw ValidationError("spike window must be at least 3");
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("spike threshold k must be a positive number");
  if (values.size() < window) {
    throw ValidationError("series has " + std::to_string(values.size()) + " points; window " +
                          std::to_string(window) + " needs at least that many");
  }
  SpikeReport report{window, k, {}};
  for (std::size_t i = window; i < values.size(); ++i) {
    const auto baseline = values.subspan(i - window, window);
    double sum = 0.0;
    for (double v : baseline) sum += v;
    const double mean = sum / static_cast<double>(window);
    double sq = 0.0;
    for (double v : baseline) sq += (v - mean) * (v - mean);
    const double stddev = std::sqrt(sq / static_cast<double>(window));
    if (stddev <= 0.0) continue;
    const double z = (values[i] - mean) / stddev;
    if (z >= k) report.flagged.push_back(SpikeEntry{buckets[i], values[i], mean, stddev, z});
  }
  return report;
}

SpikeReport detect_spikes(const TimelineSeries& series, std::size_t window, double k) {
  std::vector<Date> buckets;
  std::vector<double> values;
  buckets.reserve(series.points.size());
  values.reserve(series.points.size());
  for (const auto& p : series.points) {
    buckets.push_back(p.bucket);
    values.push_back(static_cast<double>(p.count));
  }
  return detect_spikes(buckets, values, window, k);
}

}  // namespace xenomon::analytics
