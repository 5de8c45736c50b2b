#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xenomon/cameo.hpp"
#include "xenomon/date.hpp"
#include "xenomon/query.hpp"
#include "xenomon/records.hpp"

namespace xenomon::analytics {

enum class Granularity { day, month };
enum class CountUnit { events, distinct_articles };
enum class ActorSide { actor1, actor2 };

std::string_view to_string(Granularity g);
std::string_view to_string(CountUnit u);
std::string_view to_string(ActorSide s);
std::optional<Granularity> granularity_from_string(std::string_view text);
std::optional<CountUnit> count_unit_from_string(std::string_view text);
std::optional<ActorSide> actor_side_from_string(std::string_view text);

// Start of the UTC day or month containing `d`.
Date bucket_of(Date d, Granularity g);
// Every bucket start from bucket_of(range.start) through bucket_of(range.end).
std::vector<Date> buckets_in(const DateRange& range, Granularity g);

struct PercentOfTotal {
  std::int64_t total = 0;
  double percent = 0.0;            // 100 * count / total; 0 when total is 0
  bool zero_denominator = false;

  friend bool operator==(const PercentOfTotal&, const PercentOfTotal&) = default;
};

struct TimelinePoint {
  Date bucket;
  std::int64_t count = 0;
  std::optional<PercentOfTotal> share;

  friend bool operator==(const TimelinePoint&, const TimelinePoint&) = default;
};

// Contiguous, zero-filled, strictly increasing buckets over `range`.
struct TimelineSeries {
  Granularity granularity = Granularity::day;
  CountUnit unit = CountUnit::events;
  DateRange range;
  std::vector<TimelinePoint> points;

  friend bool operator==(const TimelineSeries&, const TimelineSeries&) = default;
};

struct TonePoint {
  Date bucket;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  std::int64_t n = 0;

  friend bool operator==(const TonePoint&, const TonePoint&) = default;
};

// Buckets with no events are omitted.
struct ToneSeries {
  Granularity granularity = Granularity::day;
  std::vector<TonePoint> points;

  friend bool operator==(const ToneSeries&, const ToneSeries&) = default;
};

struct CountryCount {
  std::string code;
  std::int64_t count = 0;

  friend bool operator==(const CountryCount&, const CountryCount&) = default;
};

// Sorted by count descending, ties by code ascending.
struct CountryFrequency {
  ActorSide which = ActorSide::actor1;
  std::vector<CountryCount> entries;

  friend bool operator==(const CountryFrequency&, const CountryFrequency&) = default;
};

struct ChoroplethEntry {
  std::string code;  // CAMEO country code
  std::int64_t count = 0;
  std::string name;  // tooltip label, "Unknown" for codes outside the table
  std::string iso_alpha2;
  std::string iso_alpha3;

  friend bool operator==(const ChoroplethEntry&, const ChoroplethEntry&) = default;
};

struct RootOption {
  std::string code;
  std::string description;
  std::int64_t count = 0;  // events with this root before the root filter

  friend bool operator==(const RootOption&, const RootOption&) = default;
};

struct Choropleth {
  ActorSide which = ActorSide::actor1;
  std::optional<query::CodeSet> roots;  // nullopt = all roots
  std::vector<ChoroplethEntry> entries;  // ordered by code
  std::vector<RootOption> root_options;  // checkbox labels, ordered by code
  std::int64_t total = 0;                // sum of entry counts

  friend bool operator==(const Choropleth&, const Choropleth&) = default;
};

struct SpikeEntry {
  Date bucket;
  double value = 0.0;
  double baseline_mean = 0.0;
  double baseline_std = 0.0;
  double z_score = 0.0;

  friend bool operator==(const SpikeEntry&, const SpikeEntry&) = default;
};

struct SpikeReport {
  std::size_t window = 0;
  double k = 0.0;
  std::vector<SpikeEntry> flagged;

  friend bool operator==(const SpikeReport&, const SpikeReport&) = default;
};

// Unit used for "number of articles" charts: distinct articles when any
// context carries mentions, events otherwise.
CountUnit default_count_unit(std::span<const EventWithContext> contexts);

// Counts per bucket of EventRecord::day. Events outside `range` are ignored.
// distinct_articles counts distinct mention identifiers per bucket.
TimelineSeries article_count_timeline(std::span<const EventWithContext> contexts, const DateRange& range,
                                      Granularity granularity, CountUnit unit);

struct VolumeSample {
  Date date;
  std::int64_t matched = 0;
  std::int64_t total = 0;
};

// Attaches 100 * matched / total to every point. Totals are summed per bucket
// of `matched`'s granularity; throws AlignmentError naming the buckets present
// on only one side.
TimelineSeries percent_of_total(const TimelineSeries& matched, std::span<const VolumeSample> totals);

// Builds a series from matched counts alone (e.g. DOC API volume) then applies percent_of_total.
TimelineSeries volume_share_series(std::span<const VolumeSample> samples, const DateRange& range,
                                   Granularity granularity);

// Per-bucket min/median/max of EventRecord::avg_tone; even counts take the mean of the central pair.
ToneSeries tone_stats(std::span<const EventWithContext> contexts, Granularity granularity);

// Top `n` country codes of the chosen actor; blank codes excluded. Throws ValidationError for n < 1.
CountryFrequency top_country_frequencies(std::span<const EventWithContext> contexts, std::size_t n,
                                         ActorSide which = ActorSide::actor1);

// Per-country event counts restricted to `roots` (nullopt = all roots).
Choropleth choropleth_counts(std::span<const EventWithContext> contexts, const std::optional<query::CodeSet>& roots,
                             const cameo::CameoTables& tables, ActorSide which = ActorSide::actor1);

// Flags bucket i (i >= window) when the population std of the `window`
// preceding values is > 0 and (value - mean) / std >= k. Throws
// ValidationError for window < 3, k <= 0, or a series shorter than `window`.
SpikeReport detect_spikes(const TimelineSeries& series, std::size_t window, double k);
SpikeReport detect_spikes(std::span<const Date> buckets, std::span<const double> values, std::size_t window,
                          double k);

inline constexpr std::size_t kDefaultSpikeWindow = 8;
inline constexpr double kDefaultSpikeK = 3.0;

}  // namespace xenomon::analytics
