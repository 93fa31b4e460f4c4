#include "pipecube/session.hpp"

#include <algorithm>

namespace pipecube::session {

using cube::CubeState;
using cube::Move;
using terrain::TerrainError;

std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::WrongMode: return "WrongMode";
    case ErrorCode::GameOver: return "GameOver";
    case ErrorCode::AlreadyScanned: return "AlreadyScanned";
    case ErrorCode::NotScanned: return "NotScanned";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::CorruptLog: return "CorruptLog";
    case ErrorCode::NotFound: return "NotFound";
  }
  return "?";
}

SessionError::SessionError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

bool is_input_kind(std::string_view k) {
  return k == "Created" || k == "Scan" || k == "CubeTurn" || k == "Move" || k == "Placement" ||
         k == "Purchase" || k == "Boost" || k == "PortalEnter" || k == "Wait";
}

Session Session::create(const SessionOptions& options, std::string id) {
  terrain::TerrainConfig cfg = options.terrain;
  if (options.seed) cfg.portal_seed = *options.seed;
  try {
    cfg.validate();
  } catch (const TerrainError& e) {
    throw SessionError(ErrorCode::InvalidConfig, e.what());
  }
  if (options.policy.max_incorrect < 0) throw SessionError(ErrorCode::InvalidConfig, "max_incorrect must be >= 0");
  Session s;
  s.id_ = std::move(id);
  s.options_ = options;
  s.config_ = std::make_shared<const terrain::TerrainConfig>(std::move(cfg));
  s.terrain_ = terrain::initial_state(s.config_);
  s.log("Created", {{"id", s.id_}, {"options", to_json(options)}});
  return s;
}

void Session::log(std::string kind, json payload) {
  events_.push_back({events_.size(), clock_, std::move(kind), std::move(payload)});
}

void Session::log_input(std::string kind, json payload) {
  ++clock_;
  log(std::move(kind), std::move(payload));
}

void Session::require_live() const {
  if (outcome_.status != terrain::Outcome::InProgress)
    throw SessionError(ErrorCode::GameOver, "the game has ended");
}

cue::Cue Session::current_cue() const {
  if (!cube_.state || cube_.solved || outcome_.status != terrain::Outcome::InProgress) return cue::NoCue{};
  return cue::next_cue(cube_.plan, cube_.cursor, cube_.pose);
}

void Session::start_phase(cue::Phase phase) {
  const solver::Solver& solver = solver::default_solver();
  cube_.phase = phase;
  cube_.cursor = 0;
  if (phase == cue::Phase::Phase1)
    cube_.plan = solver.solve_phase1(*cube_.state);
  else
    cube_.plan = cube::d_layer_solved(*cube_.state) ? solver.solve_phase2(*cube_.state)
                                                    : solver.solve_to_solved(*cube_.state);
}

void Session::grant(solver::Goal goal) {
  const terrain::Grant g = terrain::grant_assets(goal, *cube_.state, options_.face_map, cube_.granted_cells);
  terrain::add_grant(terrain_.inventory, g);
  cube_.granted_cells = g.granted_cells;
  json assets = json::object();
  for (cube::AssetClass a : cube::kAllAssetClasses)
    if (int n = g.delta[static_cast<int>(a)]) assets[std::string(cube::asset_name(a))] = n;
  log("Checkpoint", {{"which", solver::to_string(goal)}});
  log("Grant", {{"assets", assets}, {"cells", cube_.granted_cells}});
}

// Fires every checkpoint sitting at the cursor. Each one transports the
// player back to the terrain.
void Session::reach_checkpoints() {
  for (;;) {
    const auto& cps = cube_.plan.checkpoints;
    auto it = std::find_if(cps.begin(), cps.end(), [&](const auto& c) { return c.index == cube_.cursor; });
    if (it == cps.end() || cube_.solved) return;
    const solver::Goal goal = it->goal;
    grant(goal);
    mode_ = Mode::Terrain;
    if (options_.policy.reset_at_checkpoint) cube_.deviations = 0;
    if (goal == solver::Goal::Solved) {
      cube_.solved = true;
      terrain_.cube_solved = true;
      terrain_.portal.reset();
      return;
    }
    start_phase(cue::Phase::Phase2);
  }
}

void Session::lose(LossReason why) {
  outcome_ = {terrain::Outcome::Lost, why};
  log("Outcome", to_json(outcome_));
}

void Session::submit_scan(const cube::Scan& scan) {
  require_live();
  if (cube_.state) throw SessionError(ErrorCode::AlreadyScanned, "the cube was already scanned");
  const CubeState raw = cube::decode_scan(scan, options_.face_map);

  log_input("Scan", {{"faces", to_json(scan)}});
  const cube::CanonicalForm cf = cube::canonicalize_with_rotation(raw);
  cube_.state = cf.state;
  cube_.pose = cf.rotation.inverse();
  cube_.scanned_as = cube::classify(cf.state);
  log("Classified", {{"as", cube::to_string(cube_.scanned_as)}});
  switch (cube_.scanned_as) {
    case cube::Classification::Solved:
      cube_.plan = {{}, {{0, solver::Goal::Solved}}};
      cube_.cursor = 0;
      break;
    case cube::Classification::Phase1Solved:
      cube_.plan = {{}, {{0, solver::Goal::Phase1}}};
      cube_.cursor = 0;
      break;
    case cube::Classification::Unsolved:
      start_phase(cue::Phase::Phase1);
      break;
  }
  reach_checkpoints();
  if (!cube_.solved) log("Cue", {{"cue", to_json(current_cue())}, {"cursor", cube_.cursor}});
}

cue::ObservationResult Session::submit_cube(const CubeInput& input) {
  require_live();
  if (mode_ != Mode::Cube) throw SessionError(ErrorCode::WrongMode, "cube input outside Cube mode");
  if (!cube_.state) throw SessionError(ErrorCode::NotScanned, "scan the cube first");

  const CubeState held = cube::compose(*cube_.state, cube_.pose.transform());
  CubeState raw;
  json payload;
  if (const Move* m = std::get_if<Move>(&input)) {
    raw = cube::apply_move(held, *m);
    payload = {{"move", cube::to_string(*m)}};
  } else {
    raw = std::get<CubeState>(input);
    if (!raw.is_valid()) throw SessionError(ErrorCode::BadRequest, "not a reachable cube state");
    payload = {{"state", to_json(raw)}};
  }
  const cube::CanonicalForm cf = cube::canonicalize_with_rotation(raw);
  const CubeState expected = cube::apply_move(*cube_.state, cube_.plan.moves.at(cube_.cursor));
  cue::ObservationResult result = cue::observe(*cube_.state, expected, cf.state, options_.policy,
                                               cube_.deviations, cube_.cursor, cube_.phase);

  log_input("CubeTurn", std::move(payload));
  cube_.pose = cf.rotation.inverse();
  if (const auto* on = std::get_if<cue::OnPlan>(&result)) {
    cube_.state = cf.state;
    cube_.cursor = on->advanced_to;
    reach_checkpoints();
  } else if (const auto* dev = std::get_if<cue::SingleDeviation>(&result)) {
    ++cube_.deviations;
    cube_.state = cf.state;
    cube_.plan = dev->new_plan;
    cube_.cursor = 0;
    log("Deviation", {{"detected", cube::to_string(dev->detected_move)},
                      {"deviations", cube_.deviations},
                      {"plan", solver::to_string(cube_.plan)}});
    reach_checkpoints();
  } else if (std::holds_alternative<cue::MultiDeviation>(result)) {
    cube_.state = cf.state;
    ++cube_.deviations;
    log("Deviation", {{"detected", nullptr}, {"deviations", cube_.deviations}});
    lose(LossReason::CubeErrors);
  }
  if (outcome_.status == terrain::Outcome::InProgress && !cube_.solved)
    log("Cue", {{"cue", to_json(current_cue())}, {"cursor", cube_.cursor}});
  return result;
}

void Session::submit_terrain(const TerrainAction& action) {
  require_live();
  if (mode_ != Mode::Terrain) throw SessionError(ErrorCode::WrongMode, "terrain action outside Terrain mode");

  struct Apply {
    const terrain::TerrainState& s;
    terrain::TerrainState operator()(const MoveAction& a) const { return terrain::move_character(s, a.dir); }
    terrain::TerrainState operator()(const PlaceAction& a) const {
      return terrain::place_asset(s, a.asset, {a.at, a.dir});
    }
    terrain::TerrainState operator()(const LayAction& a) const {
      return terrain::lay_pipe(s, a.pipe, a.from, a.dir).state;
    }
    terrain::TerrainState operator()(const BoostAction& a) const { return terrain::apply_boost(s, a.at).state; }
    terrain::TerrainState operator()(const BuyAction& a) const { return terrain::shop_buy(s, a.pipe); }
    terrain::TerrainState operator()(const EnterPortalAction&) const { return terrain::enter_portal(s); }
    terrain::TerrainState operator()(const WaitAction&) const { return s; }
  };
  terrain::TerrainState next = std::visit(Apply{terrain_}, action);

  static constexpr const char* kinds[] = {"Move", "Placement", "Placement", "Boost",
                                          "Purchase", "PortalEnter", "Wait"};
  log_input(kinds[action.index()], to_json(action));
  const bool entered = std::holds_alternative<EnterPortalAction>(action);

  const int spawned = next.portals_spawned;
  next = terrain::tick_portal(next);
  if (next.portals_spawned != spawned) log("PortalSpawn", {{"at", to_json(*next.portal)}});
  terrain_ = std::move(next);

  switch (terrain::check_outcome(terrain_)) {
    case terrain::Outcome::Lost: lose(LossReason::Pressure); return;
    case terrain::Outcome::Won:
      outcome_ = {terrain::Outcome::Won, std::nullopt};
      log("Outcome", to_json(outcome_));
      return;
    case terrain::Outcome::InProgress: break;
  }
  if (entered) {
    mode_ = Mode::Cube;
    if (cube_.state) log("Cue", {{"cue", to_json(current_cue())}, {"cursor", cube_.cursor}});
  }
}

void Session::apply_input(const Event& e) {
  if (e.kind == "Scan") {
    submit_scan(scan_from_json(e.payload));
  } else if (e.kind == "CubeTurn") {
    submit_cube(cube_input_from_json(e.payload, options_.face_map));
  } else if (is_input_kind(e.kind) && e.kind != "Created") {
    submit_terrain(terrain_action_from_json(e.payload));
  } else {
    throw SessionError(ErrorCode::BadRequest, "'" + e.kind + "' is not an input event");
  }
}

// ---------------------------------------------------------------------------
// Persistence

json save(const Session& s) {
  json events = json::array();
  for (const Event& e : s.events()) events.push_back(to_json(e));
  return {{"schema_version", kSchemaVersion}, {"events", events}, {"state", s.view()}};
}

Session load(const json& document) {
  if (!document.is_object() || !document.contains("schema_version"))
    throw SessionError(ErrorCode::SchemaVersionMismatch, "document has no schema_version");
  const json& v = document.at("schema_version");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    throw SessionError(ErrorCode::SchemaVersionMismatch,
                       "expected schema_version " + std::to_string(kSchemaVersion) + ", got " + v.dump());
  if (!document.contains("events") || !document.at("events").is_array())
    throw SessionError(ErrorCode::CorruptLog, "document has no event list");
  std::vector<Event> log;
  for (const json& e : document.at("events")) log.push_back(event_from_json(e));
  Session s = replay(log);
  if (!document.contains("state") || document.at("state").dump() != s.view().dump())
    throw SessionError(ErrorCode::CorruptLog, "stored state differs from the replayed one");
  return s;
}

Session replay(const std::vector<Event>& log) {
  if (log.empty() || log.front().kind != "Created" || log.front().seq != 0)
    throw SessionError(ErrorCode::CorruptLog, "log must start with a Created event");
  const json& created = log.front().payload;
  std::optional<Session> s;
  try {
    s = Session::create(options_from_json(created.at("options")), created.at("id").get<std::string>());
  } catch (const std::exception& e) {
    throw SessionError(ErrorCode::CorruptLog, std::string("bad Created event: ") + e.what());
  }
  for (std::size_t i = 1; i < log.size(); ++i) {
    if (!is_input_kind(log[i].kind)) continue;
    try {
      s->apply_input(log[i]);
    } catch (const std::exception& e) {
      throw SessionError(ErrorCode::CorruptLog, "event " + std::to_string(i) + " rejected: " + e.what());
    }
  }
  const auto& mine = s->events();
  for (std::size_t i = 0; i < std::max(mine.size(), log.size()); ++i) {
    if (i >= mine.size() || i >= log.size() || to_json(mine[i]).dump() != to_json(log[i]).dump())
      throw SessionError(ErrorCode::CorruptLog, "log diverges from its replay at event " + std::to_string(i));
  }
  return std::move(*s);
}

Session replay(const std::vector<Event>& log, const SessionOptions& options) {
  Session s = replay(log);
  if (to_json(s.options()).dump() != to_json(options).dump())
    throw SessionError(ErrorCode::CorruptLog, "log was recorded with a different config");
  return s;
}

}  // namespace pipecube::session
