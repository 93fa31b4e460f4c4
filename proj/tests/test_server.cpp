#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "pipecube/random.hpp"
#include "pipecube/server.hpp"

using namespace pipecube;
using server::json;

namespace {

// A live server on a free local port for the duration of one test.
struct LiveServer {
  server::Service service;
  server::HttpServer http{service};
  int port = -1;
  std::thread thread;

  LiveServer() {
    port = http.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { http.listen_after_bind(); });
    for (int i = 0; i < 200 && !http.is_running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~LiveServer() {
    http.stop();
    thread.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(5, 0);
    return c;
  }
};

struct Reply {
  int status;
  json body;
};

Reply post(httplib::Client& c, const std::string& path, const json& body) {
  auto r = c.Post(path, body.dump(), "application/json");
  REQUIRE(r);
  return {r->status, json::parse(r->body)};
}

Reply get(httplib::Client& c, const std::string& path) {
  auto r = c.Get(path);
  REQUIRE(r);
  return {r->status, json::parse(r->body)};
}

std::string scrambled_text(std::uint64_t seed) {
  Rng rng(seed);
  cube::CubeState s;
  do s = random_canonical_state(rng);
  while (cube::classify(s) != cube::Classification::Unsolved);
  return cube::format_scan_text(cube::render_stickers(s));
}

// Waits and walks until the character stands in a portal, then enters it.
void enter_portal(httplib::Client& c, const std::string& id) {
  for (int guard = 0; guard < 200; ++guard) {
    const json t = get(c, "/sessions/" + id).body;
    if (t["mode"] == "cube") return;
    const json& terrain = t["terrain"];
    if (terrain["portal"].is_null()) {
      post(c, "/sessions/" + id + "/terrain", {{"action", "wait"}});
      continue;
    }
    if (terrain["portal"] == terrain["character"]) {
      REQUIRE(post(c, "/sessions/" + id + "/terrain", {{"action", "enter_portal"}}).status == 200);
      continue;
    }
    // Try the four steps, keeping one that brings us closer.
    const int dx = terrain["portal"][0].get<int>() - terrain["character"][0].get<int>();
    const int dy = terrain["portal"][1].get<int>() - terrain["character"][1].get<int>();
    std::vector<std::string> order;
    if (dx > 0) order.push_back("E");
    if (dx < 0) order.push_back("W");
    if (dy > 0) order.push_back("S");
    if (dy < 0) order.push_back("N");
    bool moved = false;
    for (const auto& d : order)
      if (post(c, "/sessions/" + id + "/terrain", {{"action", "move"}, {"dir", d}}).status == 200) {
        moved = true;
        break;
      }
    if (!moved) post(c, "/sessions/" + id + "/terrain", {{"action", "wait"}});
  }
  FAIL("never reached cube mode");
}

}  // namespace

TEST_CASE("service without a socket") {
  server::Service svc;
  const auto created = svc.create(nullptr);
  CHECK(created.status == 201);
  const std::string id = created.body["id"];
  CHECK(svc.get(id).body["mode"] == "terrain");
  CHECK(svc.get("nope").status == 404);
  CHECK(svc.get("nope").body["error"]["code"] == "NotFound");
  CHECK(svc.create(json::array()).status == 400);
  CHECK(svc.create({{"config", "width = 3"}}).status == 400);
  CHECK(svc.session_count() == 1);
  CHECK(svc.wait_events(id, 1, std::chrono::milliseconds(10)).empty());
  CHECK(svc.wait_events(id, 0, std::chrono::milliseconds(10)).size() == 1);
}

TEST_CASE("http endpoints") {
  LiveServer live;
  auto c = live.client();

  auto created = post(c, "/sessions", {{"seed", 5}, {"max_incorrect", 2}});
  REQUIRE(created.status == 201);
  const std::string id = created.body["id"];
  const std::string base = "/sessions/" + id;
  CHECK(created.body["state"]["cube"]["scanned"] == false);

  SUBCASE("typed errors") {
    CHECK(get(c, "/sessions/missing").status == 404);
    CHECK(get(c, "/sessions/missing/cue").body["error"]["code"] == "NotFound");
    CHECK(post(c, base + "/cube", {{"move", "R"}}).status == 409);
    CHECK(post(c, base + "/terrain", {{"action", "move"}, {"dir", "S"}}).status == 200);
    auto edge = post(c, base + "/terrain", {{"action", "move"}, {"dir", "S"}});
    CHECK(edge.status == 422);
    CHECK(edge.body["error"]["code"] == "Blocked");
    CHECK(edge.body["error"]["reason"] == "OutOfBounds");
    auto shop = post(c, base + "/terrain", {{"action", "buy"}, {"pipe", "wide"}});
    CHECK(shop.status == 422);
    CHECK(shop.body["error"]["code"] == "NotAtShop");
    auto bogus = post(c, base + "/terrain", {{"action", "teleport"}});
    CHECK(bogus.status == 400);
    auto r = c.Post(base + "/terrain", "{not json", "application/json");
    REQUIRE(r);
    CHECK(r->status == 400);
    CHECK(json::parse(r->body)["error"]["code"] == "BadRequest");
    auto inconsistent = post(c, base + "/scan", {{"text", "U: CLO CLO CLO CLO"}});
    CHECK(inconsistent.status == 422);
    auto over_scan = post(c, base + "/scan", {{"text", scrambled_text(1)}});
    CHECK(over_scan.status == 200);
    CHECK(post(c, base + "/scan", {{"text", scrambled_text(1)}}).status == 409);
  }

  SUBCASE("play through the API") {
    auto scanned = post(c, base + "/scan", {{"text", scrambled_text(8)}});
    REQUIRE(scanned.status == 200);
    CHECK(scanned.body["cue"]["type"] == "layer");
    CHECK(get(c, base + "/cue").body["cue"] == scanned.body["cue"]);

    enter_portal(c, id);
    CHECK(post(c, base + "/terrain", {{"action", "wait"}}).status == 409);
    const json cue = get(c, base + "/cue").body["cue"];
    const std::string dir = cue["dir"];
    const std::string move = cue["face"].get<std::string>() + (dir == "cw" ? "" : dir == "ccw" ? "'" : "2");
    auto turned = post(c, base + "/cube", {{"move", move}});
    REQUIRE(turned.status == 200);
    CHECK(turned.body["result"]["type"] == "on_plan");
    CHECK(turned.body["result"]["advanced_to"] == 1);

    // The save document reloads into an identical session.
    const json doc = get(c, base + "/save").body;
    CHECK(doc["schema_version"] == 1);
    CHECK(session::save(session::load(doc)) == doc);

    // Polling picks up exactly the events after the cursor.
    const json all = get(c, base + "/events").body;
    const std::uint64_t n = all["next"];
    CHECK(all["events"].size() == n);
    const json tail = get(c, base + "/events?since=" + std::to_string(n - 2)).body;
    CHECK(tail["events"].size() == 2);
    CHECK(tail["events"][1] == all["events"][n - 1]);
    CHECK(get(c, base + "/events?since=" + std::to_string(n)).body["events"].empty());
  }
}

TEST_CASE("event stream") {
  LiveServer live;
  auto c = live.client();
  const std::string id = post(c, "/sessions", json::object()).body["id"];

  std::string received;
  std::atomic<int> frames{0};
  std::thread reader([&] {
    auto sc = live.client();
    sc.Get("/sessions/" + id + "/stream?since=0", [&](const char* data, std::size_t len) {
      received.append(data, len);
      std::size_t count = 0;
      for (std::size_t p = 0; (p = received.find("\n\n", p)) != std::string::npos; p += 2) ++count;
      frames = static_cast<int>(count);
      return frames < 4;
    });
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  auto w = live.client();
  for (int i = 0; i < 3; ++i) post(w, "/sessions/" + id + "/terrain", {{"action", "wait"}});
  reader.join();
  REQUIRE(frames >= 4);
  CHECK(received.rfind("id: 0\nevent: Created\ndata: {", 0) == 0);
  CHECK(received.find("id: 1\nevent: Wait\n") != std::string::npos);
  CHECK(received.find("id: 3\nevent: Wait\n") != std::string::npos);

  auto missing = c.Get("/sessions/none/stream");
  REQUIRE(missing);
  CHECK(missing->status == 404);
}

TEST_CASE("sessions are independent under concurrent clients") {
  LiveServer live;
  constexpr int kSessions = 4, kWaits = 25;
  std::vector<std::string> ids;
  {
    auto c = live.client();
    for (int i = 0; i < kSessions; ++i) ids.push_back(post(c, "/sessions", {{"seed", 3}}).body["id"]);
  }
  std::vector<std::thread> workers;
  for (int w = 0; w < 2 * kSessions; ++w)
    workers.emplace_back([&, w] {
      auto c = live.client();
      for (int i = 0; i < kWaits; ++i) post(c, "/sessions/" + ids[w % kSessions] + "/terrain", {{"action", "wait"}});
    });
  for (auto& t : workers) t.join();

  auto c = live.client();
  json first;
  for (const auto& id : ids) {
    const json view = get(c, "/sessions/" + id).body;
    CHECK(view["clock"] == 2 * kWaits);
    // Same seed, same inputs: only the id differs.
    json terrain = view["terrain"];
    if (first.is_null()) first = terrain;
    CHECK(terrain == first);
    const json events = get(c, "/sessions/" + id + "/events").body["events"];
    for (std::size_t i = 0; i < events.size(); ++i) CHECK(events[i]["seq"] == i);
  }
}
