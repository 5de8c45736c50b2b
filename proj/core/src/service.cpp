#include "xenomon/service.hpp"

#include <charconv>
#include <cmath>

#include <httplib.h>

#include "xenomon/analytics.hpp"
#include "xenomon/error.hpp"

namespace xenomon::service {
namespace {

using serialize::Json;

struct HttpFailure {
  ApiError error;
};

[[noreturn]] void fail(int status, std::string code, std::string message) {
  throw HttpFailure{ApiError{status, std::move(code), std::move(message)}};
}

std::optional<std::string> param(const query::QueryParams& params, std::string_view key) {
  std::optional<std::string> out;
  for (const auto& [k, v] : params) {
    if (k == key) out = v;
  }
  return out;
}

query::QueryParams without(const query::QueryParams& params, std::string_view key) {
  query::QueryParams out;
  for (const auto& kv : params) {
    if (kv.first != key) out.push_back(kv);
  }
  return out;
}

std::size_t size_param(const query::QueryParams& params, std::string_view key, std::size_t fallback) {
  const auto text = param(params, key);
  if (!text) return fallback;
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(text->data(), text->data() + text->size(), v);
  if (ec != std::errc{} || p != text->data() + text->size()) {
    fail(400, "invalid_parameter", std::string(key) + " must be a non-negative integer, got '" + *text + "'");
  }
  return v;
}

double real_param(const query::QueryParams& params, std::string_view key, double fallback) {
  const auto text = param(params, key);
  if (!text) return fallback;
  double v = 0;
  const auto [p, ec] = std::from_chars(text->data(), text->data() + text->size(), v);
  if (ec != std::errc{} || p != text->data() + text->size() || !std::isfinite(v)) {
    fail(400, "invalid_parameter", std::string(key) + " must be a number, got '" + *text + "'");
  }
  return v;
}

analytics::Granularity granularity_param(const query::QueryParams& params) {
  const auto text = param(params, "granularity");
  if (!text) return analytics::Granularity::day;
  const auto g = analytics::granularity_from_string(*text);
  if (!g) fail(400, "invalid_parameter", "granularity must be day or month");
  return *g;
}

analytics::ActorSide which_param(const query::QueryParams& params) {
  const auto text = param(params, "which");
  if (!text) return analytics::ActorSide::actor1;
  const auto w = analytics::actor_side_from_string(*text);
  if (!w) fail(400, "invalid_parameter", "which must be actor1 or actor2");
  return *w;
}

DateRange required_range(const query::QueryCriteria& c) {
  if (!c.date_range) fail(422, "invalid_date_range", "from and to are required");
  return *c.date_range;
}

analytics::TimelineSeries timeline_for(const store::Store& store, const query::QueryParams& params) {
  const auto criteria = query::criteria_from_query_params(params);
  const auto range = required_range(criteria);
  const auto contexts = store.scan(criteria);
  analytics::CountUnit unit = analytics::default_count_unit(contexts);
  if (const auto text = param(params, "unit")) {
    const auto u = analytics::count_unit_from_string(*text);
    if (!u) fail(400, "invalid_parameter", "unit must be events or distinct-articles");
    unit = *u;
  }
  return analytics::article_count_timeline(contexts, range, granularity_param(params), unit);
}

}  // namespace

Json to_json(const ApiError& e) { return Json{{"status", e.status}, {"code", e.code}, {"message", e.message}}; }

Json Api::route(std::string_view path, const query::QueryParams& params) const {
  if (path == "/api/timeline") return serialize::to_json(timeline_for(store_, params));

  if (path == "/api/tone") {
    const auto criteria = query::criteria_from_query_params(params);
    return serialize::to_json(analytics::tone_stats(store_.scan(criteria), granularity_param(params)));
  }

  if (path == "/api/countries") {
    const auto n = size_param(params, "n", 20);
    if (n < 1) fail(400, "invalid_parameter", "n must be at least 1");
    const auto criteria = query::criteria_from_query_params(params);
    return serialize::to_json(analytics::top_country_frequencies(store_.scan(criteria), n, which_param(params)));
  }

  if (path == "/api/choropleth") {
    // roots filters the map only; root_options are counted over all roots.
    std::optional<query::CodeSet> roots;
    if (const auto text = param(params, "roots")) {
      auto codes = query::split_codes(*text);
      if (!codes.empty() && !codes.contains("all")) roots = std::move(codes);
    }
    const auto criteria = query::criteria_from_query_params(without(params, "roots"));
    return serialize::to_json(
        analytics::choropleth_counts(store_.scan(criteria), roots, tables_, which_param(params)));
  }

  if (path == "/api/spikes") {
    const auto window = size_param(params, "window", analytics::kDefaultSpikeWindow);
    const double k = real_param(params, "k", analytics::kDefaultSpikeK);
    const auto series = timeline_for(store_, params);
    if (window >= 3 && series.points.size() < window) {
      fail(422, "window_too_large",
           "window " + std::to_string(window) + " exceeds the " + std::to_string(series.points.size()) +
               " buckets in range");
    }
    return serialize::to_json(analytics::detect_spikes(series, window, k));
  }

  if (path == "/api/events") {
    const auto offset = size_param(params, "offset", 0);
    const auto limit = size_param(params, "limit", kDefaultPageSize);
    if (limit < 1 || limit > kMaxPageSize) {
      fail(400, "invalid_parameter", "limit must be between 1 and " + std::to_string(kMaxPageSize));
    }
    const auto criteria = query::criteria_from_query_params(params);
    const auto page = store_.scan_page(criteria, offset, limit);
    Json events = Json::array();
    for (const auto& ctx : page) events.push_back(serialize::to_json(ctx));
    return Json{{"offset", offset}, {"limit", limit}, {"events", std::move(events)}};
  }

  constexpr std::string_view kEventPrefix = "/api/events/";
  if (path.starts_with(kEventPrefix)) {
    const auto id_text = path.substr(kEventPrefix.size());
    std::int64_t id = 0;
    const auto [p, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (id_text.empty() || ec != std::errc{} || p != id_text.data() + id_text.size()) {
      fail(400, "invalid_parameter", "event id must be an integer");
    }
    const auto ctx = store_.get_event_with_context(id);
    if (!ctx) fail(404, "not_found", "no event with id " + std::to_string(id));
    return serialize::to_json(*ctx);
  }

  if (path == "/api/ingest/status") return serialize::to_json(store_.ingest_status());

  if (path == "/api/volume") {
    const auto q = param(params, "query");
    if (!q || q->empty()) fail(400, "invalid_parameter", "query is required");
    const auto criteria = query::criteria_from_query_params(params);
    const auto range = required_range(criteria);
    std::vector<analytics::VolumeSample> samples;
    for (const auto& p : store_.volume(*q)) samples.push_back({p.date, p.matched, p.total});
    return serialize::to_json(analytics::volume_share_series(samples, range, granularity_param(params)));
  }

  if (path == "/api/cameo/roots") {
    Json out = Json::array();
    for (const auto& [code, description] : tables_.event_roots()) {
      out.push_back(Json{{"code", code}, {"description", description}});
    }
    return out;
  }

  if (path == "/api/cameo/countries") {
    Json out = Json::array();
    for (const auto& [code, info] : tables_.countries()) {
      out.push_back(
          Json{{"code", code}, {"name", info.name}, {"iso_alpha2", info.iso_alpha2}, {"iso_alpha3", info.iso_alpha3}});
    }
    return out;
  }

  fail(404, "not_found", "no endpoint " + std::string(path));
}

ApiResponse Api::handle_get(std::string_view path, const query::QueryParams& params) const {
  ApiError error;
  try {
    return ApiResponse{200, serialize::dump(route(path, params))};
  } catch (const HttpFailure& f) {
    error = f.error;
  } catch (const DateRangeError& e) {
    error = {422, "invalid_date_range", e.what()};
  } catch (const AlignmentError& e) {
    error = {422, "misaligned_series", e.what()};
  } catch (const ValidationError& e) {
    error = {400, "invalid_request", e.what()};
  } catch (const std::exception& e) {
    error = {500, "internal", e.what()};
  }
  return ApiResponse{error.status, serialize::dump(to_json(error))};
}

struct Server::Impl {
  Impl(const Api& a, ServerOptions o) : api(a), options(std::move(o)) {}

  const Api& api;
  ServerOptions options;
  httplib::Server http;
  int port = -1;
};

Server::Server(const Api& api, ServerOptions options)
    : impl_(std::make_unique<Impl>(api, std::move(options))) {
  auto& http = impl_->http;
  const int threads = std::max(1, impl_->options.threads);
  http.new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<std::size_t>(threads)); };

  const std::string origin = impl_->options.cors_origin;
  http.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
    if (!origin.empty()) res.set_header("Access-Control-Allow-Origin", origin);
  });
  http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  http.Get(R"(/api/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    query::QueryParams params(req.params.begin(), req.params.end());
    auto out = impl_->api.handle_get(req.path, params);
    res.status = out.status;
    res.set_content(std::move(out.body), "application/json");
  });
  if (impl_->options.static_dir) http.set_mount_point("/", impl_->options.static_dir->string());
}

Server::~Server() { stop(); }

int Server::bind() {
  auto& o = impl_->options;
  impl_->port = o.port == 0 ? impl_->http.bind_to_any_port(o.host) : (impl_->http.bind_to_port(o.host, o.port) ? o.port : -1);
  if (impl_->port < 0) throw IoError("cannot bind " + o.host + ":" + std::to_string(o.port));
  return impl_->port;
}

void Server::listen() {
  if (impl_->port < 0) bind();
  impl_->http.listen_after_bind();
}

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace xenomon::service
