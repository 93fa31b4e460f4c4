#include "pipecube/server.hpp"

#include <condition_variable>
#include <mutex>

#include <httplib.h>

namespace pipecube::server {

using session::ErrorCode;
using session::Session;
using session::SessionError;

struct Service::Entry {
  std::mutex mutex;
  std::condition_variable changed;
  Session session;
  explicit Entry(Session s) : session(std::move(s)) {}
};

Service::Service(session::SessionOptions defaults) : defaults_(std::move(defaults)) {}
Service::~Service() { shutdown(); }

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const {
  std::shared_lock lock(registry_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

// Requests on one session run one at a time in arrival order; sessions are
// independent of each other.
template <class F>
Response Service::with_session(const std::string& id, F&& f) {
  try {
    auto entry = find(id);
    if (!entry) throw SessionError(ErrorCode::NotFound, "no session '" + id + "'");
    std::lock_guard lock(entry->mutex);
    const std::size_t before = entry->session.events().size();
    Response r = f(entry->session);
    if (entry->session.events().size() != before) entry->changed.notify_all();
    return r;
  } catch (const std::exception& e) {
    return {session::error_status(e), session::error_json(e)};
  }
}

Response Service::create(const json& body) {
  try {
    session::SessionOptions options = defaults_;
    if (!body.is_null()) {
      if (!body.is_object()) throw SessionError(ErrorCode::BadRequest, "body must be an object");
      // Unset fields fall back to the service defaults.
      json merged = session::to_json(defaults_);
      for (const auto& [k, v] : body.items()) merged[k] = v;
      options = session::options_from_json(merged);
    }
    std::unique_lock lock(registry_mutex_);
    const std::string id = "s" + std::to_string(next_id_++);
    auto entry = std::make_shared<Entry>(Session::create(options, id));
    json view = entry->session.view();
    sessions_.emplace(id, std::move(entry));
    return {201, {{"id", id}, {"state", view}}};
  } catch (const std::exception& e) {
    return {session::error_status(e), session::error_json(e)};
  }
}

Response Service::get(const std::string& id) {
  return with_session(id, [](Session& s) { return Response{200, s.view()}; });
}

Response Service::scan(const std::string& id, const json& body) {
  return with_session(id, [&](Session& s) {
    s.submit_scan(session::scan_from_json(body));
    return Response{200, {{"cue", session::to_json(s.current_cue())}, {"state", s.view()}}};
  });
}

Response Service::cube(const std::string& id, const json& body) {
  return with_session(id, [&](Session& s) {
    const auto result = s.submit_cube(session::cube_input_from_json(body, s.options().face_map));
    struct Visitor {
      json operator()(const cue::OnPlan& o) const { return {{"type", "on_plan"}, {"advanced_to", o.advanced_to}}; }
      json operator()(const cue::NoChange&) const { return {{"type", "no_change"}}; }
      json operator()(const cue::SingleDeviation& d) const {
        return {{"type", "single_deviation"},
                {"detected_move", cube::to_string(d.detected_move)},
                {"new_plan", solver::to_string(d.new_plan)}};
      }
      json operator()(const cue::MultiDeviation&) const { return {{"type", "multi_deviation"}}; }
    };
    return Response{200, {{"result", std::visit(Visitor{}, result)},
                          {"cue", session::to_json(s.current_cue())},
                          {"state", s.view()}}};
  });
}

Response Service::terrain(const std::string& id, const json& body) {
  return with_session(id, [&](Session& s) {
    s.submit_terrain(session::terrain_action_from_json(body));
    return Response{200, {{"state", s.view()}}};
  });
}

Response Service::cue(const std::string& id) {
  return with_session(id, [](Session& s) { return Response{200, {{"cue", session::to_json(s.current_cue())}}}; });
}

Response Service::events(const std::string& id, std::uint64_t since) {
  return with_session(id, [&](Session& s) {
    json list = json::array();
    for (std::size_t i = since; i < s.events().size(); ++i) list.push_back(session::to_json(s.events()[i]));
    return Response{200, {{"events", list}, {"next", s.events().size()}}};
  });
}

Response Service::save(const std::string& id) {
  return with_session(id, [](Session& s) { return Response{200, session::save(s)}; });
}

std::vector<json> Service::wait_events(const std::string& id, std::uint64_t since,
                                       std::chrono::milliseconds timeout) {
  auto entry = find(id);
  std::vector<json> out;
  if (!entry) return out;
  std::unique_lock lock(entry->mutex);
  entry->changed.wait_for(lock, timeout,
                          [&] { return stopping_ || entry->session.events().size() > since; });
  for (std::size_t i = since; i < entry->session.events().size(); ++i)
    out.push_back(session::to_json(entry->session.events()[i]));
  return out;
}

void Service::shutdown() {
  stopping_ = true;
  std::shared_lock lock(registry_mutex_);
  for (auto& [_, entry] : sessions_) {
    // Taking the lock orders the flag before any waiter re-checks it.
    std::lock_guard guard(entry->mutex);
    entry->changed.notify_all();
  }
}

std::size_t Service::session_count() const {
  std::shared_lock lock(registry_mutex_);
  return sessions_.size();
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
  Service& service;
  httplib::Server http;
  std::atomic<bool> stopping{false};
  explicit Impl(Service& s) : service(s) {}
};

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return nullptr;
  return json::parse(req.body);
}

std::uint64_t since_of(const httplib::Request& req) {
  if (!req.has_param("since")) return 0;
  return std::stoull(req.get_param_value("since"));
}

// Wraps a handler so malformed JSON or query strings still get one typed reply.
template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const std::exception& e) {
      json err = session::error_json(e);
      err["error"]["code"] = "BadRequest";
      reply(res, {400, err});
    }
  };
}

}  // namespace

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto& http = impl_->http;
  Service& svc = service;
  Impl* impl = impl_.get();

  http.Post("/sessions", guarded([&svc](const auto& req, auto& res) { reply(res, svc.create(body_of(req))); }));
  http.Get(R"(/sessions/([^/]+))",
           guarded([&svc](const auto& req, auto& res) { reply(res, svc.get(req.matches[1])); }));
  http.Post(R"(/sessions/([^/]+)/scan)", guarded([&svc](const auto& req, auto& res) {
              reply(res, svc.scan(req.matches[1], body_of(req)));
            }));
  http.Post(R"(/sessions/([^/]+)/cube)", guarded([&svc](const auto& req, auto& res) {
              reply(res, svc.cube(req.matches[1], body_of(req)));
            }));
  http.Post(R"(/sessions/([^/]+)/terrain)", guarded([&svc](const auto& req, auto& res) {
              reply(res, svc.terrain(req.matches[1], body_of(req)));
            }));
  http.Get(R"(/sessions/([^/]+)/cue)",
           guarded([&svc](const auto& req, auto& res) { reply(res, svc.cue(req.matches[1])); }));
  http.Get(R"(/sessions/([^/]+)/events)", guarded([&svc](const auto& req, auto& res) {
             reply(res, svc.events(req.matches[1], since_of(req)));
           }));
  http.Get(R"(/sessions/([^/]+)/save)",
           guarded([&svc](const auto& req, auto& res) { reply(res, svc.save(req.matches[1])); }));

  http.Get(R"(/sessions/([^/]+)/stream)", guarded([&svc, impl](const auto& req, auto& res) {
             const std::string id = req.matches[1];
             const Response probe = svc.get(id);
             if (probe.status != 200) return reply(res, probe);
             auto cursor = std::make_shared<std::uint64_t>(since_of(req));
             res.set_header("Cache-Control", "no-cache");
             res.set_chunked_content_provider(
                 "text/event-stream", [&svc, impl, id, cursor](std::size_t, httplib::DataSink& sink) {
                   if (impl->stopping) return false;
                   const auto batch = svc.wait_events(id, *cursor, std::chrono::seconds(10));
                   if (impl->stopping) return false;
                   if (batch.empty()) {
                     const std::string ping = ": keepalive\n\n";
                     return sink.write(ping.data(), ping.size());
                   }
                   for (const json& e : batch) {
                     const std::string frame = "id: " + std::to_string(e.at("seq").get<std::uint64_t>()) +
                                               "\nevent: " + e.at("kind").get<std::string>() +
                                               "\ndata: " + e.dump() + "\n\n";
                     if (!sink.write(frame.data(), frame.size())) return false;
                     ++*cursor;
                   }
                   return true;
                 });
           }));
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) { return impl_->http.listen(host, port); }
int HttpServer::bind_to_any_port(const std::string& host) { return impl_->http.bind_to_any_port(host); }
bool HttpServer::listen_after_bind() { return impl_->http.listen_after_bind(); }
bool HttpServer::is_running() const { return impl_->http.is_running(); }

void HttpServer::stop() {
  impl_->stopping = true;
  impl_->service.shutdown();
  impl_->http.stop();
}

}  // namespace pipecube::server
