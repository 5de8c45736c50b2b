#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "xenomon/query.hpp"
#include "xenomon/records.hpp"
#include "xenomon/store.hpp"

// Deterministic record generators, canned corpora and brute-force oracles
// shared by the unit, property and acceptance tests.
namespace xenomon::testing {

// Uses only raw mt19937_64 output so sequences are identical on every
// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

struct Corpus {
  std::vector<EventRecord> events;
  std::vector<MentionRecord> mentions;
  std::vector<GkgRecord> gkg;
};

// Single valid records. Every value survives a write/parse round trip.
EventRecord random_event(Rng& rng, std::int64_t id, const DateRange& days);
MentionRecord random_mention(Rng& rng, const EventRecord& event, std::string identifier);
GkgRecord random_gkg(Rng& rng, std::string id, std::string document_identifier);

// Mutates a well-formed line so that the parser must reject it.
std::string corrupt_line(Rng& rng, const std::string& line);

// `events` events with unique ids, `mentions` mentions spread over them
// (about 5% orphaned), `gkg` documents, most of them cited by some mention.
Corpus random_corpus(Rng& rng, std::size_t events, std::size_t mentions, std::size_t gkg, const DateRange& days);

void load(store::Store& store, const Corpus& corpus);

// Every clause independently present or absent; code sets are never empty
// and dates fall inside `days`.
query::QueryCriteria random_criteria(Rng& rng, const DateRange& days);

// Brute-force join over plain vectors, ordered like Store::scan.
std::vector<EventWithContext> oracle_join(const Corpus& corpus);
// Criteria semantics spelled out clause by clause, independent of query::matches.
bool oracle_matches(const query::QueryCriteria& criteria, const EventWithContext& ctx);
std::vector<EventWithContext> oracle_scan(const Corpus& corpus, const query::QueryCriteria& criteria);

// Refugee-related events from 2015-03 to 2016-03 with a surge in 2015-09,
// plus unrelated events and events outside the window.
Corpus kurdi_fixture();
// March 2021 events meeting criteria 2 with Actor1 countries weighted
// ESP > USA > ITA > others, plus decoys that fail criteria 2.
Corpus march2021_fixture();
// Small frozen corpus behind the API golden files.
Corpus frozen_fixture();

// Daily counts with a single spike; used by the spike golden test.
Corpus spike_fixture();

std::string to_lines(const std::vector<EventRecord>& records);
std::string to_lines(const std::vector<MentionRecord>& records);
std::string to_lines(const std::vector<GkgRecord>& records);

}  // namespace xenomon::testing
