#pragma once

#include <memory>
#include <optional>
#include <string>

#include "chemdelt/service/app.h"

namespace httplib {
class Server;
}

namespace chemdelt::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  /// Value for Access-Control-Allow-Origin; unset = same-origin only.
  std::optional<std::string> cors_origin;
};

/// HTTP/1.1 front end: every /api request is forwarded to App::handle and
/// answered as UTF-8 application/json.
class HttpServer {
 public:
  HttpServer(const App& app, ServerOptions options = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(int port);
  /// Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  const App& app_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
};

/// Port from CHEMDELT_PORT, else `fallback`.
int default_port(int fallback = 8080);

}  // namespace chemdelt::service
