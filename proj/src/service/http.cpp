#include "chemdelt/service/http.h"

#include <httplib.h>

#include <cstdlib>

namespace chemdelt::service {

HttpServer::HttpServer(const App& app, ServerOptions options)
    : app_(app), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    QueryParams query(req.params.begin(), req.params.end());
    Response r = app_.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  };
  server_->Get(".*", forward);
  server_->Post(".*", forward);
  server_->Put(".*", forward);
  server_->Delete(".*", forward);
  server_->Patch(".*", forward);
  if (options_.cors_origin) {
    std::string origin = *options_.cors_origin;
    server_->set_default_headers({{"Access-Control-Allow-Origin", origin}, {"Vary", "Origin"}});
    server_->Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(int port) {
  if (port == 0) return server_->bind_to_any_port(options_.host);
  return server_->bind_to_port(options_.host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_->is_running()) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

int default_port(int fallback) {
  const char* env = std::getenv("CHEMDELT_PORT");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  long p = std::strtol(env, &end, 10);
  if (*end != '\0' || p < 0 || p > 65535) return fallback;
  return static_cast<int>(p);
}

}  // namespace chemdelt::service
