#pragma once

#include <filesystem>
#include <memory>
#include <string>

namespace pflp {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Served at / when non-empty.
  std::filesystem::path static_dir;
  // Target of POST /sessions/{id}/snapshot.
  std::filesystem::path snapshot_dir = ".";
};

// Session-scoped HTTP/JSON API over the engine. Sessions live in memory; one
// optimization runs per session at a time and concurrent ones get 503.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds the socket and returns the port. Throws std::runtime_error when the
  // address cannot be bound.
  int bind();
  // Serves until stop(); bind() must have succeeded.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pflp
