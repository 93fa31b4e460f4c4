#pragma once

// HTTP front end for sessions. Service holds the sessions and is usable
// without a socket; HttpServer mounts it on cpp-httplib.
//
//   POST /sessions                  {"config"?, "seed"?, "max_incorrect"?, ...}
//   GET  /sessions/{id}             full state view
//   POST /sessions/{id}/scan        {"text": ...} or {"faces": {...}}
//   POST /sessions/{id}/cube        {"move": "R'"}, {"state": {...}} or a scan
//   POST /sessions/{id}/terrain     {"action": "move", "dir": "N"}, ...
//   GET  /sessions/{id}/cue
//   GET  /sessions/{id}/events?since=N     polling
//   GET  /sessions/{id}/stream?since=N     text/event-stream
//   GET  /sessions/{id}/save               save document

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>

#include "pipecube/session.hpp"

namespace pipecube::server {

using session::json;

struct Response {
  int status = 200;
  json body;
};

class Service {
 public:
  explicit Service(session::SessionOptions defaults = {});
  ~Service();

  Response create(const json& body);
  Response get(const std::string& id);
  Response scan(const std::string& id, const json& body);
  Response cube(const std::string& id, const json& body);
  Response terrain(const std::string& id, const json& body);
  Response cue(const std::string& id);
  Response events(const std::string& id, std::uint64_t since);
  Response save(const std::string& id);

  /// Events with seq >= since, waiting up to `timeout` for at least one.
  /// Empty on timeout, unknown id or shutdown.
  std::vector<json> wait_events(const std::string& id, std::uint64_t since, std::chrono::milliseconds timeout);

  /// Wakes every waiter; later waits return immediately.
  void shutdown();
  std::size_t session_count() const;

 private:
  struct Entry;
  std::shared_ptr<Entry> find(const std::string& id) const;
  template <class F>
  Response with_session(const std::string& id, F&& f);

  session::SessionOptions defaults_;
  mutable std::shared_mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
  std::atomic<bool> stopping_{false};
};

class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  /// Binds and serves until stop(); returns false if the bind failed.
  bool listen(const std::string& host, int port);
  /// Binds to a free port and returns it (or -1); serve with listen_after_bind().
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  bool is_running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pipecube::server
