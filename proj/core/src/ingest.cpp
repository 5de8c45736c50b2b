#include "xenomon/ingest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "xenomon/error.hpp"
#include "xenomon/query.hpp"

namespace xenomon::ingest {
namespace {

bool is_hex32(std::string_view s) {
  return s.size() == 32 &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string file_name_of(const std::string& url) {
  auto end = url.find_first_of("?#");
  std::string path = url.substr(0, end);
  const auto slash = path.rfind('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

class HttplibClient : public HttpClient {
 public:
  explicit HttplibClient(std::chrono::seconds timeout) : timeout_(timeout) {}

  HttpResponse get(const std::string& url) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw TransportError("not an absolute URL: " + url, false);
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    if (!client.is_valid()) throw TransportError("unsupported URL: " + url, false);
    client.set_follow_location(true);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    auto res = client.Get(path);
    if (!res) {
      throw TransportError("GET " + url + " failed: " + httplib::to_string(res.error()), true);
    }
    return HttpResponse{res->status, std::move(res->body)};
  }

 private:
  std::chrono::seconds timeout_;
};

template <class Fn>
auto with_retry(const RetryPolicy& policy, Fn&& fn) {
  auto delay = policy.base_delay;
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const TransportError& e) {
      if (!e.retryable() || attempt >= std::max(1, policy.attempts)) throw;
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
  }
}

std::string two(unsigned v) {
  char buf[3];
  std::snprintf(buf, sizeof buf, "%02u", v % 100);
  return buf;
}

}  // namespace

Date doc_api_earliest() { return Date::from_ymd(2017, 1, 1); }

std::unique_ptr<HttpClient> make_http_client(std::chrono::seconds timeout) {
  return std::make_unique<HttplibClient>(timeout);
}

std::string get_ok(HttpClient& client, const std::string& url) {
  auto res = client.get(url);
  if (res.status < 200 || res.status >= 300) {
    const bool retryable = res.status == 429 || res.status >= 500;
    throw TransportError("GET " + url + " returned HTTP " + std::to_string(res.status), retryable, res.status);
  }
  return std::move(res.body);
}

Manifest parse_manifest(std::string_view body) {
  Manifest out;
  std::size_t line_no = 0;
  while (!body.empty()) {
    const auto nl = body.find('\n');
    std::string_view line = body.substr(0, nl);
    body = nl == std::string_view::npos ? std::string_view{} : body.substr(nl + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty()) continue;

    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto sp = line.find(' ', pos);
      const auto part = line.substr(pos, sp == std::string_view::npos ? std::string_view::npos : sp - pos);
      if (!part.empty()) parts.push_back(part);
      if (sp == std::string_view::npos) break;
      pos = sp + 1;
    }
    auto skip = [&](std::string reason) { out.skipped.push_back(RowError{line_no, std::move(reason)}); };
    if (parts.size() != 3) {
      skip("expected 3 space-separated fields, found " + std::to_string(parts.size()));
      continue;
    }
    FeedEntry entry;
    const auto [p, ec] = std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), entry.size_bytes);
    if (ec != std::errc{} || p != parts[0].data() + parts[0].size() || entry.size_bytes < 0) {
      skip("bad size '" + std::string(parts[0]) + "'");
      continue;
    }
    if (!is_hex32(parts[1])) {
      skip("bad md5 '" + std::string(parts[1]) + "'");
      continue;
    }
    entry.md5 = lower(parts[1]);
    entry.url = std::string(parts[2]);
    if (entry.url.find("://") == std::string::npos) {
      skip("url is not absolute");
      continue;
    }
    const auto kind = formats::kind_from_filename(entry.url);
    if (!kind) {
      skip("unrecognized file suffix in " + entry.url);
      continue;
    }
    entry.kind = *kind;
    out.entries.push_back(std::move(entry));
  }
  return out;
}

Manifest fetch_update_manifest(HttpClient& client, const std::string& feed_url) {
  return parse_manifest(get_ok(client, feed_url));
}

std::string md5_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_md5(), nullptr) != 1) {
    throw Error("MD5 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::filesystem::path download_and_verify(HttpClient& client, const FeedEntry& entry,
                                          const std::filesystem::path& dest, const RetryPolicy& policy) {
  const std::string name = file_name_of(entry.url);
  if (name.empty()) throw ValidationError("url has no file name: " + entry.url);
  std::error_code ec;
  std::filesystem::create_directories(dest, ec);
  if (ec) throw IoError("cannot create " + dest.string() + ": " + ec.message());

  const std::string body = with_retry(policy, [&] { return get_ok(client, entry.url); });
  const std::string digest = md5_hex(body);
  const auto final_path = dest / name;
  if (digest != lower(entry.md5)) {
    std::filesystem::remove(final_path, ec);
    throw IntegrityError("md5 mismatch for " + name + ": expected " + entry.md5 + ", got " + digest);
  }

  auto tmp = final_path;
  tmp += ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) {
      out.close();
      std::filesystem::remove(tmp, ec);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, final_path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move download into place: " + final_path.string());
  }
  return final_path;
}

std::vector<DownloadOutcome> download_all(HttpClient& client, std::span<const FeedEntry> entries,
                                          const std::filesystem::path& dest, std::size_t concurrency,
                                          const RetryPolicy& policy) {
  std::vector<DownloadOutcome> out(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      out[i].entry = entries[i];
      try {
        out[i].path = download_and_verify(client, entries[i], dest, policy);
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  const std::size_t n = std::min(std::max<std::size_t>(concurrency, 1), std::max<std::size_t>(entries.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return out;
}

void log_to_stderr(std::string_view line) { std::cerr << line << '\n'; }

FeedPoller::FeedPoller(Fetch fetch, Handler handler, std::chrono::seconds interval, LogSink log)
    : fetch_(std::move(fetch)), handler_(std::move(handler)), interval_(interval), log_(std::move(log)) {
  if (interval_ < std::chrono::minutes(1)) throw ValidationError("poll interval must be at least 1 minute");
  if (!log_) log_ = log_to_stderr;
}

FeedPoller::~FeedPoller() { stop(); }

std::size_t FeedPoller::poll_once() {
  Manifest manifest;
  try {
    manifest = fetch_();
  } catch (const std::exception& e) {
    log_(std::string("poll: manifest fetch failed: ") + e.what());
    return 0;
  }
  for (const auto& s : manifest.skipped) {
    log_("poll: manifest line " + std::to_string(s.line) + " skipped: " + s.reason);
  }
  std::size_t handled = 0;
  for (const auto& entry : manifest.entries) {
    {
      std::lock_guard lock(mutex_);
      if (!seen_.insert(entry.url).second) continue;
    }
    ++handled;
    try {
      handler_(entry);
    } catch (const std::exception& e) {
      log_("poll: handler failed for " + entry.url + ": " + e.what());
    } catch (...) {
      log_("poll: handler failed for " + entry.url);
    }
  }
  return handled;
}

void FeedPoller::start() {
  if (thread_.joinable()) return;
  thread_ = std::jthread([this](std::stop_token stop) {
    std::mutex m;
    std::condition_variable_any cv;
    while (!stop.stop_requested()) {
      poll_once();
      std::unique_lock lock(m);
      cv.wait_for(lock, stop, interval_, [] { return false; });
    }
  });
}

void FeedPoller::stop() {
  if (!thread_.joinable()) return;
  thread_.request_stop();
  thread_.join();
}

std::size_t FeedPoller::seen_count() const {
  std::lock_guard lock(mutex_);
  return seen_.size();
}

std::string doc_api_url(std::string_view base_url, std::string_view query, Date start, Date end) {
  if (end < start) throw DateRangeError("start " + start.iso() + " is after end " + end.iso());
  if (start < doc_api_earliest()) {
    throw DateRangeError("DOC API coverage begins " + doc_api_earliest().iso() + "; requested start " + start.iso() +
                         " is earlier");
  }
  auto stamp = [](Date d, std::string_view hms) {
    return std::to_string(d.year()) + two(d.month()) + two(d.day()) + std::string(hms);
  };
  std::vector<std::pair<std::string, std::string>> params = {
      {"query", std::string(query)},
      {"mode", "timelinevolraw"},
      {"format", "json"},
      {"startdatetime", stamp(start, "000000")},
      {"enddatetime", stamp(end, "235959")},
  };
  return std::string(base_url) + "?" + query::to_query_string(params);
}

std::vector<VolumePoint> parse_doc_timeline(std::string_view text) {
  using F = DocTimelineFields;
  const auto bad = [](const std::string& why) { return TransportError("DOC API response: " + why, false); };
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw bad("not a JSON object");

  std::vector<VolumePoint> out;
  const auto timeline = j.find(F::kTimeline);
  if (timeline == j.end() || timeline->is_null()) return out;
  if (!timeline->is_array()) throw bad("timeline is not an array");
  if (timeline->empty()) return out;
  const auto& series = (*timeline)[0];
  const auto data = series.find(F::kData);
  if (data == series.end() || !data->is_array()) throw bad("timeline[0].data missing");

  auto count = [&](const nlohmann::json& point, std::string_view key) {
    const auto it = point.find(key);
    if (it == point.end() || !it->is_number()) throw bad("missing numeric '" + std::string(key) + "'");
    const double v = it->get<double>();
    if (v < 0) throw bad("negative '" + std::string(key) + "'");
    return static_cast<std::int64_t>(v);
  };
  for (const auto& point : *data) {
    const auto date = point.find(F::kDate);
    if (date == point.end() || !date->is_string()) throw bad("point without date");
    const auto t = Timestamp::parse(date->get<std::string>());
    if (!t) throw bad("unparseable date '" + date->get<std::string>() + "'");
    out.push_back(VolumePoint{*t, count(point, F::kMatched), count(point, F::kTotal)});
  }
  std::sort(out.begin(), out.end(), [](const VolumePoint& a, const VolumePoint& b) { return a.time < b.time; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].time == out[i - 1].time) throw bad("duplicate date " + out[i].time.iso());
  }
  return out;
}

std::vector<VolumePoint> doc_api_timeline(HttpClient& client, std::string_view base_url, std::string_view query,
                                          Date start, Date end, const RetryPolicy& policy) {
  const std::string url = doc_api_url(base_url, query, start, end);
  const std::string body = with_retry(policy, [&] { return get_ok(client, url); });
  return parse_doc_timeline(body);
}

}  // namespace xenomon::ingest
