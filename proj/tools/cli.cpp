#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>

#include "xenomon/cameo.hpp"
#include "xenomon/error.hpp"
#include "xenomon/ingest.hpp"
#include "xenomon/serialize.hpp"
#include "xenomon/service.hpp"

namespace xenomon::cli {
namespace {

namespace fs = std::filesystem;
using serialize::Json;

// Thrown for argument problems detected after CLI11 has parsed.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Date date_arg(const std::string& flag, const std::string& text) {
  const auto d = Date::parse(text);
  if (!d) throw UsageError(flag + ": expected YYYY-MM-DD, got '" + text + "'");
  return *d;
}

void write_file(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

void print_report(std::ostream& out, const FileIngestReport& r) {
  const auto& d = r.diagnostics;
  out << r.name << ": " << formats::to_string(r.kind) << " rows=" << d.rows_total << " ok=" << d.rows_ok
      << " skipped=" << d.rows_skipped << " inserted=" << r.upserts.inserted << " updated=" << r.upserts.updated
      << " unchanged=" << r.upserts.unchanged << '\n';
  for (const auto& e : d.first_errors) out << "  line " << e.line << ": " << e.reason << '\n';
}

// Blocks SIGINT/SIGTERM in every thread started afterwards and returns once
// one arrives.
class SignalWaiter {
 public:
  SignalWaiter() {
    sigemptyset(&set_);
    sigaddset(&set_, SIGINT);
    sigaddset(&set_, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set_, &old_);
  }
  ~SignalWaiter() { pthread_sigmask(SIG_SETMASK, &old_, nullptr); }
  void wait() {
    int sig = 0;
    sigwait(&set_, &sig);
  }

 private:
  sigset_t set_{};
  sigset_t old_{};
};

struct Options {
  std::string store_path = "xenomon.db";

  std::vector<std::string> ingest_files;
  bool poll = false;
  std::string feed_url{ingest::kDefaultFeedUrl};
  std::string data_dir = "data";
  int interval_minutes = 15;

  std::string criteria = "1";
  std::string from;
  std::string to;
  std::string theme_mode = "exact";
  std::string refugee_mode = "exact";
  std::string out = "-";

  std::string study;
  std::string replay_dir;

  std::string bind = "127.0.0.1:8080";
  std::string cors_origin = "*";
  std::string static_dir;

  bool fetch_ingest = false;
  std::size_t concurrency = 4;

  std::string doc_query;
  std::string doc_api_url{ingest::kDefaultDocApiUrl};
  bool doc_save = false;
};

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  store::Store store(o.store_path);
  if (!o.poll) {
    if (o.ingest_files.empty()) throw UsageError("ingest: give files or --poll");
    int status = kExitOk;
    for (const auto& f : o.ingest_files) {
      try {
        print_report(out, ingest_file(store, f));
      } catch (const Error& e) {
        err << f << ": " << e.what() << '\n';
        status = kExitRuntime;
      }
    }
    const auto c = store.counts();
    out << "store: events=" << c.events << " mentions=" << c.mentions << " gkg=" << c.gkg << '\n';
    return status;
  }

  if (o.interval_minutes < 1) throw UsageError("--interval-minutes must be at least 1");
  auto client = ingest::make_http_client();
  std::mutex out_mutex;
  ingest::FeedPoller poller(
      [&] {
        auto manifest = ingest::fetch_update_manifest(*client, o.feed_url);
        store.set_last_poll(Timestamp::now());
        return manifest;
      },
      [&](const ingest::FeedEntry& entry) {
        const auto path = ingest::download_and_verify(*client, entry, o.data_dir);
        const auto report = ingest_file(store, path);
        std::lock_guard lock(out_mutex);
        print_report(out, report);
        out.flush();
      },
      std::chrono::minutes(o.interval_minutes), [&](std::string_view line) {
        std::lock_guard lock(out_mutex);
        err << line << '\n';
      });
  SignalWaiter signals;
  poller.start();
  signals.wait();
  poller.stop();
  return kExitOk;
}

int cmd_query(const Options& o, std::ostream& out) {
  query::QueryParams params = {{"criteria", o.criteria},
                               {"from", date_arg("--from", o.from).iso()},
                               {"to", date_arg("--to", o.to).iso()},
                               {"theme_mode", o.theme_mode},
                               {"refugee_mode", o.refugee_mode}};
  query::QueryCriteria criteria;
  try {
    criteria = query::criteria_from_query_params(params);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  store::Store store(o.store_path);
  const auto rows = store.scan(criteria);
  const auto csv = serialize::events_to_csv(rows);
  if (o.out == "-") {
    out << csv;
  } else {
    write_file(o.out, csv);
    out << rows.size() << " events written to " << o.out << '\n';
  }
  return kExitOk;
}

int cmd_replay(const Options& o, std::ostream& out) {
  const CaseStudy study = o.study == "kurdi" ? CaseStudy::kurdi : CaseStudy::march2021;
  store::Store store(o.store_path);
  for (const auto& name : replay(store, study, o.replay_dir)) out << (fs::path(o.replay_dir) / name).string() << '\n';
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  const auto colon = o.bind.rfind(':');
  if (colon == std::string::npos) throw UsageError("--bind expects HOST:PORT");
  service::ServerOptions so;
  so.host = o.bind.substr(0, colon);
  try {
    so.port = std::stoi(o.bind.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("--bind port is not a number");
  }
  so.cors_origin = o.cors_origin;
  if (!o.static_dir.empty()) so.static_dir = o.static_dir;

  store::Store store(o.store_path);
  service::Api api(store, cameo::CameoTables::builtin());
  SignalWaiter signals;
  service::Server server(api, so);
  const int port = server.bind();
  out << "listening on http://" << so.host << ":" << port << '\n';
  out.flush();
  std::jthread loop([&] { server.listen(); });
  signals.wait();
  server.stop();
  return kExitOk;
}

int cmd_fetch(const Options& o, std::ostream& out, std::ostream& err) {
  auto client = ingest::make_http_client();
  const auto manifest = ingest::fetch_update_manifest(*client, o.feed_url);
  for (const auto& s : manifest.skipped) err << "manifest line " << s.line << " skipped: " << s.reason << '\n';
  const auto results = ingest::download_all(*client, manifest.entries, o.data_dir, o.concurrency);
  int status = kExitOk;
  std::optional<store::Store> store;
  if (o.fetch_ingest) store.emplace(o.store_path);
  for (const auto& r : results) {
    if (!r.error.empty()) {
      err << r.entry.url << ": " << r.error << '\n';
      status = kExitRuntime;
      continue;
    }
    out << r.path.string() << '\n';
    if (store) print_report(out, ingest_file(*store, r.path));
  }
  if (store) store->set_last_poll(Timestamp::now());
  return status;
}

int cmd_doc_timeline(const Options& o, std::ostream& out) {
  const Date start = date_arg("--from", o.from);
  const Date end = date_arg("--to", o.to);
  auto client = ingest::make_http_client();
  const auto points = ingest::doc_api_timeline(*client, o.doc_api_url, o.doc_query, start, end);
  Json arr = Json::array();
  std::map<Date, store::StoredVolumePoint> daily;
  for (const auto& p : points) {
    arr.push_back(Json{{"time", p.time.iso()}, {"matched", p.matched}, {"total", p.total}});
    auto& d = daily[p.time.date()];
    d.date = p.time.date();
    d.matched += p.matched;
    d.total += p.total;
  }
  if (o.doc_save) {
    std::vector<store::StoredVolumePoint> rows;
    for (const auto& [date, p] : daily) rows.push_back(p);
    store::Store(o.store_path).save_volume(o.doc_query, rows);
  }
  out << serialize::dump(arr);
  return kExitOk;
}

int cmd_status(const Options& o, std::ostream& out) {
  store::Store store(o.store_path);
  out << serialize::dump(serialize::to_json(store.ingest_status()));
  return kExitOk;
}

}  // namespace

FileIngestReport ingest_file(store::Store& store, const std::filesystem::path& path) {
  FileIngestReport report;
  report.name = path.filename().string();
  const auto kind = formats::kind_from_filename(report.name);
  if (!kind) throw FormatError(report.name + ": cannot tell the table from the file name");
  report.kind = *kind;
  const std::string text = formats::read_export_file(path);
  switch (*kind) {
    case formats::FileKind::events: {
      auto parsed = formats::parse_events(text);
      report.diagnostics = parsed.diagnostics;
      report.upserts = store.upsert_events(parsed.records);
      break;
    }
    case formats::FileKind::mentions: {
      auto parsed = formats::parse_mentions(text);
      report.diagnostics = parsed.diagnostics;
      report.upserts = store.upsert_mentions(parsed.records);
      break;
    }
    case formats::FileKind::gkg: {
      auto parsed = formats::parse_gkg(text);
      report.diagnostics = parsed.diagnostics;
      report.upserts = store.upsert_gkg(parsed.records);
      break;
    }
  }
  store::IngestedFile row;
  row.name = report.name;
  row.kind = std::string(formats::to_string(*kind));
  row.rows_total = static_cast<std::int64_t>(report.diagnostics.rows_total);
  row.rows_ok = static_cast<std::int64_t>(report.diagnostics.rows_ok);
  row.rows_skipped = static_cast<std::int64_t>(report.diagnostics.rows_skipped);
  row.inserted = static_cast<std::int64_t>(report.upserts.inserted);
  row.updated = static_cast<std::int64_t>(report.upserts.updated);
  row.ingested_at = Timestamp::now();
  store.record_ingested_file(row);
  return report;
}

ReplayPlan replay_plan(CaseStudy study) {
  if (study == CaseStudy::kurdi) {
    auto c = query::criteria1();
    const DateRange range{Date::from_ymd(2015, 3, 1), Date::from_ymd(2016, 3, 31)};
    c.date_range = range;
    return {c, range, analytics::Granularity::month};
  }
  auto c = query::criteria2(query::ThemeMode::exact_set);
  const DateRange range{Date::from_ymd(2021, 3, 1), Date::from_ymd(2021, 3, 31)};
  c.date_range = range;
  return {c, range, analytics::Granularity::day};
}

std::vector<std::string> replay(const store::Store& store, CaseStudy study, const std::filesystem::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const auto plan = replay_plan(study);
  const auto contexts = store.scan(plan.criteria);
  const auto unit = analytics::default_count_unit(contexts);
  std::map<std::string, std::string> files;
  auto emit = [&](const std::string& stem, const auto& value) {
    files[stem + ".json"] = serialize::dump(serialize::to_json(value));
    files[stem + ".csv"] = serialize::to_csv(value);
  };

  const auto daily = analytics::article_count_timeline(contexts, plan.range, analytics::Granularity::day, unit);
  const auto spikes = analytics::detect_spikes(daily, analytics::kDefaultSpikeWindow, analytics::kDefaultSpikeK);
  if (study == CaseStudy::kurdi) {
    emit("timeline", analytics::article_count_timeline(contexts, plan.range, analytics::Granularity::month, unit));
    emit("timeline_daily", daily);
    emit("tone", analytics::tone_stats(contexts, analytics::Granularity::day));
    emit("tone_monthly", analytics::tone_stats(contexts, analytics::Granularity::month));
  } else {
    emit("timeline", daily);
    emit("countries", analytics::top_country_frequencies(contexts, 20, analytics::ActorSide::actor1));
    emit("choropleth",
         analytics::choropleth_counts(contexts, std::nullopt, cameo::CameoTables::builtin(), analytics::ActorSide::actor1));
  }
  emit("spikes", spikes);
  files["events.csv"] = serialize::events_to_csv(contexts);

  std::vector<std::string> names;
  for (const auto& [name, body] : files) {
    write_file(dir / name, body);
    names.push_back(name);
  }
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Refugee and xenophobia news monitoring over GDELT 2.0 data", "xenomon"};
  app.require_subcommand(1);
  app.add_option("--store", o.store_path, "SQLite store path")->envname("XENOMON_STORE")->capture_default_str();

  auto* ingest_cmd = app.add_subcommand("ingest", "Parse GDELT export files into the store, or poll the live feed");
  ingest_cmd->add_option("files", o.ingest_files, "Export files (.CSV or .CSV.zip)");
  ingest_cmd->add_flag("--poll", o.poll, "Poll the update feed until interrupted");
  ingest_cmd->add_option("--feed-url", o.feed_url)->envname("XENOMON_FEED_URL")->capture_default_str();
  ingest_cmd->add_option("--data-dir", o.data_dir, "Download directory")->envname("XENOMON_DATA_DIR")
      ->capture_default_str();
  ingest_cmd->add_option("--interval-minutes", o.interval_minutes)->capture_default_str();

  auto* query_cmd = app.add_subcommand("query", "Export events matching a criteria preset as CSV");
  query_cmd->add_option("--criteria", o.criteria)->check(CLI::IsMember({"1", "2"}))->capture_default_str();
  query_cmd->add_option("--from", o.from, "YYYY-MM-DD")->required();
  query_cmd->add_option("--to", o.to, "YYYY-MM-DD")->required();
  query_cmd->add_option("--theme-mode", o.theme_mode)->check(CLI::IsMember({"exact", "prefix"}))
      ->capture_default_str();
  query_cmd->add_option("--refugee-mode", o.refugee_mode)->check(CLI::IsMember({"exact", "contains-type"}))
      ->capture_default_str();
  query_cmd->add_option("--out", o.out, "Output CSV, - for stdout")->capture_default_str();

  auto* replay_cmd = app.add_subcommand("replay", "Write all chart payloads of a case study");
  replay_cmd->add_option("study", o.study)->required()->check(CLI::IsMember({"kurdi", "march2021"}));
  replay_cmd->add_option("--out", o.replay_dir, "Output directory")->required();

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--bind", o.bind, "HOST:PORT")->envname("XENOMON_BIND")->capture_default_str();
  serve_cmd->add_option("--cors-origin", o.cors_origin)->envname("XENOMON_CORS_ORIGIN")->capture_default_str();
  serve_cmd->add_option("--static-dir", o.static_dir, "Dashboard bundle served at /")
      ->envname("XENOMON_STATIC_DIR");

  auto* fetch_cmd = app.add_subcommand("fetch", "Download the files of the current update manifest");
  fetch_cmd->add_option("--feed-url", o.feed_url)->envname("XENOMON_FEED_URL")->capture_default_str();
  fetch_cmd->add_option("--data-dir", o.data_dir)->envname("XENOMON_DATA_DIR")->capture_default_str();
  fetch_cmd->add_option("--concurrency", o.concurrency)->check(CLI::Range(1, 32))->capture_default_str();
  fetch_cmd->add_flag("--ingest", o.fetch_ingest, "Ingest the downloaded files");

  auto* doc_cmd = app.add_subcommand("doc-timeline", "Query DOC API matched/total article volume");
  doc_cmd->add_option("--query", o.doc_query)->required();
  doc_cmd->add_option("--from", o.from, "YYYY-MM-DD")->required();
  doc_cmd->add_option("--to", o.to, "YYYY-MM-DD")->required();
  doc_cmd->add_option("--api-url", o.doc_api_url)->envname("XENOMON_DOC_API_URL")->capture_default_str();
  doc_cmd->add_flag("--save", o.doc_save, "Store daily volume for /api/volume");

  auto* status_cmd = app.add_subcommand("status", "Print ingestion status as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ingest_cmd->parsed()) return cmd_ingest(o, out, err);
    if (query_cmd->parsed()) return cmd_query(o, out);
    if (replay_cmd->parsed()) return cmd_replay(o, out);
    if (serve_cmd->parsed()) return cmd_serve(o, out);
    if (fetch_cmd->parsed()) return cmd_fetch(o, out, err);
    if (doc_cmd->parsed()) return cmd_doc_timeline(o, out);
    if (status_cmd->parsed()) return cmd_status(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DateRangeError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace xenomon::cli
