#include <algorithm>

#include "pipecube/session.hpp"

namespace pipecube::session {

using cube::AssetClass;
using cube::Face;
using terrain::Coord;

namespace {

[[noreturn]] void bad(const std::string& why) { throw SessionError(ErrorCode::BadRequest, why); }

std::string_view amount_text(cube::Amount a) {
  switch (a) {
    case cube::Amount::CW: return "cw";
    case cube::Amount::CCW: return "ccw";
    case cube::Amount::Half: return "half";
  }
  return "?";
}

std::string face_text(Face f) { return std::string(1, cube::face_char(f)); }

json cell_json(cube::Cell c) { return json::array({face_text(c.face), c.index}); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) bad(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

terrain::Direction dir_field(const json& j, const char* key) {
  auto d = terrain::direction_from_string(string_field(j, key));
  if (!d) bad(std::string("field '") + key + "' must be one of N, S, E, W");
  return *d;
}

std::string_view status_text(terrain::Outcome o) {
  switch (o) {
    case terrain::Outcome::InProgress: return "in_progress";
    case terrain::Outcome::Won: return "won";
    case terrain::Outcome::Lost: return "lost";
  }
  return "?";
}

json inventory_json(const terrain::Inventory& inv) {
  json assets = json::object();
  for (AssetClass a : cube::kAllAssetClasses) assets[std::string(cube::asset_name(a))] = inv[a];
  return {{"assets", assets}, {"pipes", inv.pipes}};
}

}  // namespace

std::string_view to_string(Mode m) { return m == Mode::Terrain ? "terrain" : "cube"; }
std::string_view to_string(LossReason r) { return r == LossReason::Pressure ? "pressure" : "cube_errors"; }

json to_json(const Event& e) {
  return {{"seq", e.seq}, {"t", e.t}, {"kind", e.kind}, {"payload", e.payload}};
}

Event event_from_json(const json& j) {
  try {
    Event e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.t = j.at("t").get<std::uint64_t>();
    e.kind = j.at("kind").get<std::string>();
    e.payload = j.at("payload");
    return e;
  } catch (const json::exception& ex) {
    throw SessionError(ErrorCode::CorruptLog, std::string("malformed event: ") + ex.what());
  }
}

json to_json(const cue::Cue& c) {
  struct Visitor {
    json operator()(const cue::NoCue&) const { return {{"type", "none"}}; }
    json operator()(const cue::LayerCue& l) const {
      return {{"type", "layer"},
              {"face", face_text(l.face)},
              {"dir", amount_text(l.direction)},
              {"character", cell_json(l.character)},
              {"target", cell_json(l.target)}};
    }
    json operator()(const cue::WholeCubeCue& w) const {
      return {{"type", "cube"}, {"axis", std::string(1, "xyz"[static_cast<int>(w.axis)])},
              {"dir", amount_text(w.direction)}};
    }
    json operator()(const cue::CheckpointReached& r) const {
      return {{"type", "checkpoint"}, {"which", r.which == solver::Goal::Phase1 ? "phase1" : "solved"}};
    }
  };
  return std::visit(Visitor{}, c);
}

json to_json(const cube::CubeState& s) {
  json perm = json::array(), orient = json::array();
  for (int i = 0; i < 8; ++i) {
    perm.push_back(s.perm[i]);
    orient.push_back(s.orient[i]);
  }
  return {{"perm", perm}, {"orient", orient}};
}

cube::CubeState cube_state_from_json(const json& j) {
  const json& perm = field(j, "perm");
  const json& orient = field(j, "orient");
  if (!perm.is_array() || !orient.is_array() || perm.size() != 8 || orient.size() != 8)
    bad("state needs 8-entry perm and orient arrays");
  cube::CubeState s;
  for (int i = 0; i < 8; ++i) {
    if (!perm[i].is_number_integer() || !orient[i].is_number_integer()) bad("state entries must be integers");
    const int p = perm[i].get<int>(), o = orient[i].get<int>();
    if (p < 0 || p > 7 || o < 0 || o > 2) bad("state entry out of range");
    s.perm[i] = static_cast<std::uint8_t>(p);
    s.orient[i] = static_cast<std::uint8_t>(o);
  }
  if (!s.is_valid()) bad("not a reachable cube state");
  return s;
}

json to_json(Coord c) { return json::array({c.x, c.y}); }

Coord coord_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    bad("a cell is [x, y]");
  return {j[0].get<int>(), j[1].get<int>()};
}

json to_json(const TerrainAction& a) {
  struct Visitor {
    json operator()(const MoveAction& m) const { return {{"action", "move"}, {"dir", terrain::to_string(m.dir)}}; }
    json operator()(const PlaceAction& p) const {
      json j = {{"action", "place"}, {"asset", cube::asset_name(p.asset)}, {"at", to_json(p.at)}};
      if (p.dir) j["dir"] = terrain::to_string(*p.dir);
      return j;
    }
    json operator()(const LayAction& l) const {
      return {{"action", "lay"}, {"pipe", l.pipe}, {"from", to_json(l.from)}, {"dir", terrain::to_string(l.dir)}};
    }
    json operator()(const BoostAction& b) const { return {{"action", "boost"}, {"at", to_json(b.at)}}; }
    json operator()(const BuyAction& b) const { return {{"action", "buy"}, {"pipe", b.pipe}}; }
    json operator()(const EnterPortalAction&) const { return {{"action", "enter_portal"}}; }
    json operator()(const WaitAction&) const { return {{"action", "wait"}}; }
  };
  return std::visit(Visitor{}, a);
}

TerrainAction terrain_action_from_json(const json& j) {
  const std::string action = string_field(j, "action");
  if (action == "move") return MoveAction{dir_field(j, "dir")};
  if (action == "place") {
    auto asset = cube::asset_from_name(string_field(j, "asset"));
    if (!asset) bad("unknown asset '" + string_field(j, "asset") + "'");
    PlaceAction p{*asset, coord_from_json(field(j, "at")), std::nullopt};
    if (j.contains("dir")) p.dir = dir_field(j, "dir");
    return p;
  }
  if (action == "lay") return LayAction{string_field(j, "pipe"), coord_from_json(field(j, "from")), dir_field(j, "dir")};
  if (action == "boost") return BoostAction{coord_from_json(field(j, "at"))};
  if (action == "buy") return BuyAction{string_field(j, "pipe")};
  if (action == "enter_portal") return EnterPortalAction{};
  if (action == "wait") return WaitAction{};
  bad("unknown action '" + action + "'");
}

json to_json(const GameOutcome& o) {
  json j = {{"status", status_text(o.status)}};
  if (o.reason) j["reason"] = to_string(*o.reason);
  return j;
}

json to_json(const SessionOptions& o) {
  json map = json::object();
  for (Face f : {Face::U, Face::D, Face::L, Face::R, Face::F, Face::B})
    map[face_text(f)] = cube::asset_name(o.face_map.class_of(f));
  return {{"config", terrain::format_config(o.terrain)},
          {"seed", o.seed ? json(*o.seed) : json(nullptr)},
          {"max_incorrect", o.policy.max_incorrect},
          {"reset_at_checkpoint", o.policy.reset_at_checkpoint},
          {"face_map", map}};
}

SessionOptions options_from_json(const json& j) {
  if (!j.is_object()) bad("options must be an object");
  SessionOptions o;
  try {
    if (j.contains("config")) o.terrain = terrain::parse_config(string_field(j, "config"));
  } catch (const terrain::TerrainError& e) {
    throw SessionError(ErrorCode::InvalidConfig, e.what());
  }
  if (j.contains("seed") && !j.at("seed").is_null()) {
    if (!j.at("seed").is_number_unsigned()) bad("seed must be a non-negative integer");
    o.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("max_incorrect")) {
    if (!j.at("max_incorrect").is_number_integer()) bad("max_incorrect must be an integer");
    o.policy.max_incorrect = j.at("max_incorrect").get<int>();
  }
  if (j.contains("reset_at_checkpoint")) {
    if (!j.at("reset_at_checkpoint").is_boolean()) bad("reset_at_checkpoint must be a boolean");
    o.policy.reset_at_checkpoint = j.at("reset_at_checkpoint").get<bool>();
  }
  if (j.contains("face_map")) {
    std::array<AssetClass, 6> classes{};
    for (Face f : {Face::U, Face::D, Face::L, Face::R, Face::F, Face::B}) {
      auto a = cube::asset_from_name(string_field(field(j, "face_map"), face_text(f).c_str()));
      if (!a) bad("face_map names an unknown asset");
      classes[static_cast<int>(f)] = *a;
    }
    try {
      o.face_map = cube::FaceClassMap(classes);
    } catch (const std::invalid_argument& e) {
      throw SessionError(ErrorCode::InvalidConfig, e.what());
    }
  }
  return o;
}

json to_json(const cube::Scan& scan) {
  json faces = json::object();
  for (const auto& f : scan) {
    json cells = json::array();
    for (AssetClass a : f.cells) cells.push_back(cube::asset_code(a));
    faces[face_text(f.face)] = cells;
  }
  return faces;
}

cube::Scan scan_from_json(const json& j) {
  if (j.is_object() && j.contains("text")) {
    try {
      return cube::parse_scan_text(string_field(j, "text"));
    } catch (const std::invalid_argument& e) {
      bad(e.what());
    }
  }
  const json& faces = field(j, "faces");
  if (!faces.is_object()) bad("faces must be an object");
  cube::Scan scan;
  for (const auto& [name, cells] : faces.items()) {
    auto face = name.size() == 1 ? cube::face_from_char(name[0]) : std::nullopt;
    if (!face) bad("unknown face '" + name + "'");
    if (!cells.is_array() || cells.size() != 4) bad("each face lists 4 cells");
    cube::FaceObservation obs{*face, {}};
    for (int i = 0; i < 4; ++i) {
      auto a = cells[i].is_string() ? cube::asset_from_code(cells[i].get<std::string>()) : std::nullopt;
      if (!a) bad("unknown cell code " + cells[i].dump());
      obs.cells[i] = *a;
    }
    scan.push_back(obs);
  }
  // Keep the conventional face order so logs do not depend on key order.
  std::sort(scan.begin(), scan.end(), [](const auto& a, const auto& b) { return a.face < b.face; });
  return scan;
}

CubeInput cube_input_from_json(const json& j, const cube::FaceClassMap& map) {
  if (j.is_object() && j.contains("move")) {
    auto m = cube::parse_move(string_field(j, "move"));
    if (!m) bad("bad move token '" + string_field(j, "move") + "'");
    return *m;
  }
  if (j.is_object() && j.contains("state")) return cube_state_from_json(j.at("state"));
  if (j.is_object() && (j.contains("text") || j.contains("faces"))) return cube::decode_scan(scan_from_json(j), map);
  bad("cube input needs 'move', 'state', 'text' or 'faces'");
}

json Session::view() const {
  json c = {{"scanned", cube_.state.has_value()}, {"solved", cube_.solved}};
  if (cube_.state) {
    json checkpoints = json::array();
    for (const auto& cp : cube_.plan.checkpoints)
      checkpoints.push_back({{"index", cp.index}, {"which", solver::to_string(cp.goal)}});
    json pose = json::object();
    for (Face f : {Face::U, Face::D, Face::L, Face::R, Face::F, Face::B})
      pose[face_text(f)] = face_text(cube_.pose.image(f));
    c.update({{"state", to_json(*cube_.state)},
              {"classification", cube::to_string(cube::classify(*cube_.state))},
              {"scanned_as", cube::to_string(cube_.scanned_as)},
              {"phase", cube_.phase == cue::Phase::Phase1 ? "phase1" : "phase2"},
              {"plan", cube::to_string(cube_.plan.moves)},
              {"checkpoints", checkpoints},
              {"cursor", cube_.cursor},
              {"deviations", cube_.deviations},
              {"max_incorrect", options_.policy.max_incorrect},
              {"pose", pose},
              {"granted_cells", cube_.granted_cells}});
  }

  const terrain::TerrainState& t = terrain_;
  json surface = json::array();
  for (const auto& [cell, what] : t.surface)
    surface.push_back({{"at", to_json(cell)}, {"asset", what == terrain::SurfaceAsset::Bridge ? "bridge" : "fence"}});
  json ladders = json::array();
  for (const auto& e : t.ladders) ladders.push_back(json::array({to_json(e.a), to_json(e.b)}));
  json pipes = json::array();
  for (const auto& p : t.pipes) pipes.push_back({{"from", to_json(p.from)}, {"to", to_json(p.to)}, {"type", p.type}});
  json boosts = json::array();
  for (const auto& b : t.boosts) boosts.push_back({{"at", to_json(b.node)}, {"amount", b.amount}});
  json ledger = json::array();
  for (const auto& [cell, p] : terrain::compute_ledger(t).pressure)
    ledger.push_back({{"at", to_json(cell)}, {"pressure", p}});
  json tj = {{"character", to_json(t.character)},
             {"level", t.character_level()},
             {"surface", surface},
             {"ladders", ladders},
             {"pipes", pipes},
             {"boosts", boosts},
             {"boosts_remaining", terrain::boosts_remaining(t)},
             {"ledger", ledger},
             {"portal", t.portal ? to_json(*t.portal) : json(nullptr)},
             {"portal_timer", t.portal_timer},
             {"portals_spawned", t.portals_spawned},
             {"portals_entered", t.portals_entered},
             {"action_counter", t.action_counter},
             {"tank_fenced", terrain::tank_fenced(t)},
             {"pressure_failed", t.pressure_failed}};

  return {{"id", id_},
          {"mode", to_string(mode_)},
          {"outcome", to_json(outcome_)},
          {"cube", c},
          {"cue", to_json(current_cue())},
          {"terrain", tj},
          {"inventory", inventory_json(t.inventory)},
          {"clock", clock_},
          {"event_count", events_.size()}};
}

// ---------------------------------------------------------------------------
// Errors

json error_json(const std::exception& e) {
  json err = {{"message", e.what()}};
  if (auto* s = dynamic_cast<const SessionError*>(&e)) {
    err["code"] = to_string(s->code());
  } else if (auto* t = dynamic_cast<const terrain::TerrainError*>(&e)) {
    err["code"] = terrain::to_string(t->code());
    if (t->reason()) err["reason"] = terrain::to_string(*t->reason());
  } else if (auto* c = dynamic_cast<const cube::ScanError*>(&e)) {
    err["code"] = cube::to_string(c->kind());
  } else if (dynamic_cast<const json::exception*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) {
    err["code"] = "BadRequest";
  } else {
    err["code"] = "Internal";
  }
  return {{"error", err}};
}

int error_status(const std::exception& e) {
  if (auto* s = dynamic_cast<const SessionError*>(&e)) {
    switch (s->code()) {
      case ErrorCode::NotFound: return 404;
      case ErrorCode::BadRequest:
      case ErrorCode::InvalidConfig: return 400;
      case ErrorCode::WrongMode:
      case ErrorCode::GameOver:
      case ErrorCode::AlreadyScanned:
      case ErrorCode::NotScanned: return 409;
      case ErrorCode::SchemaVersionMismatch:
      case ErrorCode::CorruptLog: return 422;
    }
  }
  if (dynamic_cast<const terrain::TerrainError*>(&e) || dynamic_cast<const cube::ScanError*>(&e)) return 422;
  if (dynamic_cast<const json::exception*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) return 400;
  return 500;
}

}  // namespace pipecube::session
