#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "xenomon/date.hpp"
#include "xenomon/formats.hpp"
#include "xenomon/records.hpp"

namespace xenomon::ingest {

inline constexpr std::string_view kDefaultFeedUrl = "http://data.gdeltproject.org/gdeltv2/lastupdate.txt";
inline constexpr std::string_view kDefaultDocApiUrl = "https://api.gdeltproject.org/api/v2/doc/doc";

// First day covered by the DOC API.
Date doc_api_earliest();

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Blocking GET. Implementations throw TransportError (retryable) when no
// response arrives; non-2xx responses are returned, not thrown. Must be safe
// to call from several threads at once.
class HttpClient {
 public:
  virtual ~HttpClient() = default;
  virtual HttpResponse get(const std::string& url) = 0;
};

// cpp-httplib backed client; follows redirects, supports http and https.
std::unique_ptr<HttpClient> make_http_client(std::chrono::seconds timeout = std::chrono::seconds(60));

// Throws TransportError for non-2xx: retryable for 429 and 5xx.
std::string get_ok(HttpClient& client, const std::string& url);

struct FeedEntry {
  std::int64_t size_bytes = 0;
  std::string md5;  // 32 lowercase hex chars
  std::string url;
  formats::FileKind kind = formats::FileKind::events;

  friend bool operator==(const FeedEntry&, const FeedEntry&) = default;
};

struct Manifest {
  std::vector<FeedEntry> entries;
  std::vector<RowError> skipped;  // malformed lines, 1-based
};

// Lines of "size md5 url"; blank lines ignored, anything else malformed is skipped.
Manifest parse_manifest(std::string_view body);
Manifest fetch_update_manifest(HttpClient& client, const std::string& feed_url);

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds base_delay{500};  // doubled after each failed attempt
};

std::string md5_hex(std::string_view data);

// Downloads into `dest` under the URL's file name. The body is written to a
// temporary name and renamed only after its MD5 matches, so a mismatching file
// never remains (IntegrityError). Retryable transport errors are retried per
// `policy`; the last one is rethrown.
std::filesystem::path download_and_verify(HttpClient& client, const FeedEntry& entry,
                                          const std::filesystem::path& dest, const RetryPolicy& policy = {});

struct DownloadOutcome {
  FeedEntry entry;
  std::filesystem::path path;  // empty on failure
  std::string error;
};

// Bounded pool; results come back in input order.
std::vector<DownloadOutcome> download_all(HttpClient& client, std::span<const FeedEntry> entries,
                                          const std::filesystem::path& dest, std::size_t concurrency = 4,
                                          const RetryPolicy& policy = {});

using LogSink = std::function<void(std::string_view)>;
void log_to_stderr(std::string_view line);

// Calls `handler` once per manifest url never seen before by this poller.
// Entries are handled one at a time in manifest order. Fetch and handler
// failures are logged and the next poll proceeds.
class FeedPoller {
 public:
  using Fetch = std::function<Manifest()>;
  using Handler = std::function<void(const FeedEntry&)>;

  // Throws ValidationError when interval < 1 minute.
  FeedPoller(Fetch fetch, Handler handler, std::chrono::seconds interval, LogSink log = log_to_stderr);
  ~FeedPoller();
  FeedPoller(const FeedPoller&) = delete;
  FeedPoller& operator=(const FeedPoller&) = delete;

  // Runs one poll on the calling thread; returns the number of new entries.
  std::size_t poll_once();

  // Background loop polling immediately, then every interval until stop().
  void start();
  void stop();

  std::size_t seen_count() const;

 private:
  Fetch fetch_;
  Handler handler_;
  std::chrono::seconds interval_;
  LogSink log_;
  mutable std::mutex mutex_;
  std::set<std::string, std::less<>> seen_;
  std::jthread thread_;
};

// One matched/total sample from the DOC API.
struct VolumePoint {
  Timestamp time;
  std::int64_t matched = 0;
  std::int64_t total = 0;

  friend bool operator==(const VolumePoint&, const VolumePoint&) = default;
};

// Where each value lives in a timelinevolraw JSON response.
struct DocTimelineFields {
  static constexpr std::string_view kTimeline = "timeline";
  static constexpr std::string_view kData = "data";
  static constexpr std::string_view kDate = "date";      // "YYYYMMDDTHHMMSSZ"
  static constexpr std::string_view kMatched = "value";  // articles matching the query
  static constexpr std::string_view kTotal = "norm";     // all articles monitored
};

// Builds the request URL. Throws DateRangeError when start > end or when
// start is before doc_api_earliest(); the latter message reads
// "DOC API coverage begins 2017-01-01; requested start <date> is earlier".
std::string doc_api_url(std::string_view base_url, std::string_view query, Date start, Date end);

// Sorted by time. Throws TransportError (not retryable) on malformed JSON,
// negative counts or duplicate timestamps.
std::vector<VolumePoint> parse_doc_timeline(std::string_view json);

std::vector<VolumePoint> doc_api_timeline(HttpClient& client, std::string_view base_url, std::string_view query,
                                          Date start, Date end, const RetryPolicy& policy = {});

}  // namespace xenomon::ingest
