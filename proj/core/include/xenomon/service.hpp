#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "xenomon/cameo.hpp"
#include "xenomon/query.hpp"
#include "xenomon/serialize.hpp"
#include "xenomon/store.hpp"

namespace xenomon::service {

inline constexpr std::size_t kDefaultPageSize = 100;
inline constexpr std::size_t kMaxPageSize = 1000;

struct ApiError {
  int status = 500;
  std::string code;
  std::string message;
};

serialize::Json to_json(const ApiError& error);

struct ApiResponse {
  int status = 200;
  std::string body;  // serialize::dump() output
};

// Read-only HTTP API over a store. handle_get() is the whole routing and
// adapter layer so it can be exercised without sockets; Server only moves
// bytes. Errors map to: 400 bad parameters, 404 unknown path or event id,
// 422 invalid date range or a series too short for the spike window.
class Api {
 public:
  Api(const store::Store& store, const cameo::CameoTables& tables) : store_(store), tables_(tables) {}

  ApiResponse handle_get(std::string_view path, const query::QueryParams& params) const;

 private:
  serialize::Json route(std::string_view path, const query::QueryParams& params) const;

  const store::Store& store_;
  const cameo::CameoTables& tables_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "*";
  std::optional<std::filesystem::path> static_dir;  // dashboard bundle served at /
  int threads = 8;
};

class Server {
 public:
  Server(const Api& api, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the socket and returns the bound port. Throws IoError.
  int bind();
  // Serves until stop(); call after bind().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace xenomon::service
